//! Tables rendered as comma-separated text or line-delimited JSON records.

use std::io::Write;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Str(v)
    }
}

impl Value {
    /// Plain text form; floats always carry six decimals.
    fn text(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format!("{v:.6}"),
            Value::Str(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Float(v) if !v.is_finite() => "null".into(),
            Value::Str(s) => serde_json::to_string(s).expect("strings always serialize"),
            other => other.text(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Value::text))?;
                }
                w.flush()
            }
            Format::Jsonl => {
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| {
                            format!("{}:{}", serde_json::to_string(c).expect("column"), v.json())
                        })
                        .collect();
                    writeln!(out, "{{{}}}", fields.join(","))?;
                }
                Ok(())
            }
        }
    }

    #[cfg(test)]
    pub fn render(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("tables are utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["name", "k", "gain", "ok"]);
        t.push(vec![
            "a,b".into(),
            4usize.into(),
            0.0625.into(),
            true.into(),
        ]);
        t.push(vec![
            "q\"x".into(),
            (-3i64).into(),
            (1.0 / 3.0).into(),
            false.into(),
        ]);
        t
    }

    #[test]
    fn csv_rendering() {
        assert_eq!(
            sample().render(Format::Csv),
            "name,k,gain,ok\n\"a,b\",4,0.062500,true\n\"q\"\"x\",-3,0.333333,false\n"
        );
    }

    #[test]
    fn jsonl_rendering() {
        assert_eq!(
            sample().render(Format::Jsonl),
            "{\"name\":\"a,b\",\"k\":4,\"gain\":0.062500,\"ok\":true}\n{\"name\":\"q\\\"x\",\"k\":-3,\"gain\":0.333333,\"ok\":false}\n"
        );
        let mut t = Table::new(&["x"]);
        t.push(vec![f64::NAN.into()]);
        assert_eq!(t.render(Format::Jsonl), "{\"x\":null}\n");
    }
}
