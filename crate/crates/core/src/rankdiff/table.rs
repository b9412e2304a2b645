//! Delimited accuracy tables: `model_id,clean_acc,noisy_acc[,tau=<v>...]`.

use std::io::Read;

use super::ModelRecord;
use crate::error::{Error, Result};

fn malformed(msg: impl std::fmt::Display) -> Error {
    Error::MalformedTable(msg.to_string())
}

/// Reads model records from comma-separated text with a header row.
/// Columns named `tau=<value>` become severity samples; empty cells in
/// them are skipped.
pub fn read_table<R: Read>(reader: R) -> Result<Vec<ModelRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(malformed)?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| malformed(format!("missing column {name:?}")))
    };
    let (id_col, clean_col, noisy_col) =
        (find("model_id")?, find("clean_acc")?, find("noisy_acc")?);
    let tau_cols = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| h.strip_prefix("tau=").map(|v| (i, v)))
        .map(|(i, v)| {
            v.parse::<f64>()
                .map(|tau| (i, tau))
                .map_err(|_| malformed(format!("bad severity header \"tau={v}\"")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(malformed)?;
        let cell = |i: usize| row.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            cell(i).parse::<f64>().map_err(|_| {
                malformed(format!(
                    "row {}: column {:?} is not a number: {:?}",
                    line + 1,
                    &headers[i],
                    cell(i)
                ))
            })
        };
        let mut record = ModelRecord::new(cell(id_col), num(clean_col)?, num(noisy_col)?)?;
        if !tau_cols.is_empty() {
            let samples = tau_cols
                .iter()
                .filter(|&&(i, _)| !cell(i).is_empty())
                .map(|&(i, tau)| Ok((tau, num(i)?)))
                .collect::<Result<Vec<_>>>()?;
            record = record.with_severity(samples)?;
        }
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_basic_and_severity_columns() {
        let text = "model_id,clean_acc,noisy_acc,tau=0.1,tau=0.2\n a, 80,70,75,70\nb,60,55,,55\n";
        let r = read_table(text.as_bytes()).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].severity, vec![(0.0, 80.0), (0.1, 75.0), (0.2, 70.0)]);
        assert_eq!(r[1].model_id, "b");
        assert_eq!(r[1].severity, vec![(0.0, 60.0), (0.2, 55.0)]);
    }

    #[test]
    fn rejects_bad_tables() {
        let name = |t: &str| read_table(t.as_bytes()).unwrap_err().name();
        assert_eq!(name("id,clean_acc,noisy_acc\nx,1,2\n"), "MalformedTable");
        assert_eq!(
            name("model_id,clean_acc,noisy_acc\nx,abc,2\n"),
            "MalformedTable"
        );
        assert_eq!(
            name("model_id,clean_acc,noisy_acc,tau=x\nx,1,2,3\n"),
            "MalformedTable"
        );
        assert_eq!(
            name("model_id,clean_acc,noisy_acc\nx,1\n"),
            "MalformedTable"
        );
    }
}
