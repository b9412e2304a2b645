use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// One model's clean and noisy accuracy, in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelRecord {
    pub model_id: String,
    pub clean_acc: f64,
    pub noisy_acc: f64,
    /// `(tau, accuracy)` pairs sorted by `tau`, starting at `tau = 0`.
    pub severity: Vec<(f64, f64)>,
}

fn check_acc(id: &str, acc: f64) -> Result<()> {
    if !(0.0..=100.0).contains(&acc) {
        return Err(Error::InvalidParameter(format!(
            "accuracy {acc} of {id:?} outside [0, 100]"
        )));
    }
    Ok(())
}

impl ModelRecord {
    pub fn new(model_id: impl Into<String>, clean_acc: f64, noisy_acc: f64) -> Result<Self> {
        let model_id = model_id.into();
        check_acc(&model_id, clean_acc)?;
        check_acc(&model_id, noisy_acc)?;
        Ok(Self {
            model_id,
            clean_acc,
            noisy_acc,
            severity: Vec::new(),
        })
    }

    /// Attaches accuracy-vs-severity samples; `(0, clean_acc)` is added when
    /// no `tau = 0` sample is given.
    pub fn with_severity(mut self, mut samples: Vec<(f64, f64)>) -> Result<Self> {
        for &(tau, acc) in &samples {
            if !(tau >= 0.0) || !tau.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "severity {tau} of {:?} must be >= 0",
                    self.model_id
                )));
            }
            check_acc(&self.model_id, acc)?;
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter(format!(
                "repeated severity for {:?}",
                self.model_id
            )));
        }
        if !samples.is_empty() && samples[0].0 != 0.0 {
            samples.insert(0, (0.0, self.clean_acc));
        }
        self.severity = samples;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Clean,
    Noisy,
}

/// Ranks `(id, accuracy)` pairs: rank 1 is the highest accuracy, ties go to
/// the smaller id.
pub fn rank_values(entries: &[(&str, f64)]) -> Result<Vec<usize>> {
    let mut seen = HashSet::with_capacity(entries.len());
    for (id, _) in entries {
        if !seen.insert(*id) {
            return Err(Error::DuplicateModelId(id.to_string()));
        }
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        entries[b]
            .1
            .total_cmp(&entries[a].1)
            .then_with(|| entries[a].0.cmp(entries[b].0))
    });
    let mut ranks = vec![0; entries.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    Ok(ranks)
}

pub fn compute_ranks(records: &[ModelRecord], column: Column) -> Result<Vec<usize>> {
    let entries: Vec<(&str, f64)> = records
        .iter()
        .map(|r| {
            let acc = match column {
                Column::Clean => r.clean_acc,
                Column::Noisy => r.noisy_acc,
            };
            (r.model_id.as_str(), acc)
        })
        .collect();
    rank_values(&entries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankRow {
    pub model_id: String,
    pub rank_clean: usize,
    pub rank_noisy: usize,
    /// `rank_noisy - rank_clean`; negative means relatively more robust.
    pub rank_diff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub rows: Vec<RankRow>,
    pub tie_policy: &'static str,
}

pub const TIE_POLICY: &str = "ascending_model_id";

impl RankReport {
    pub fn get(&self, model_id: &str) -> Option<&RankRow> {
        self.rows.iter().find(|r| r.model_id == model_id)
    }

    /// `RankDiff(a) - RankDiff(b)` for a user-chosen comparison pair.
    pub fn delta(&self, a: &str, b: &str) -> Result<i64> {
        let index: HashMap<&str, i64> = self
            .rows
            .iter()
            .map(|r| (r.model_id.as_str(), r.rank_diff))
            .collect();
        let look = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("unknown model id {id:?}")))
        };
        Ok(look(a)? - look(b)?)
    }
}

/// Clean and noisy ranks of every model, in input order.
pub fn rank_diff(records: &[ModelRecord]) -> Result<RankReport> {
    let clean = compute_ranks(records, Column::Clean)?;
    let noisy = compute_ranks(records, Column::Noisy)?;
    let rows = records
        .iter()
        .zip(clean.iter().zip(&noisy))
        .map(|(r, (&c, &n))| RankRow {
            model_id: r.model_id.clone(),
            rank_clean: c,
            rank_noisy: n,
            rank_diff: n as i64 - c as i64,
        })
        .collect();
    Ok(RankReport {
        rows,
        tie_policy: TIE_POLICY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recs(rows: &[(&str, f64, f64)]) -> Vec<ModelRecord> {
        rows.iter()
            .map(|&(id, c, n)| ModelRecord::new(id, c, n).unwrap())
            .collect()
    }

    #[test]
    fn ranking_rules() {
        let r = recs(&[("x", 90.0, 1.0), ("y", 80.0, 1.0), ("z", 70.0, 1.0)]);
        assert_eq!(compute_ranks(&r, Column::Clean).unwrap(), vec![1, 2, 3]);
        let tie = recs(&[("b", 80.0, 0.0), ("a", 80.0, 0.0)]);
        assert_eq!(compute_ranks(&tie, Column::Clean).unwrap(), vec![2, 1]);
        assert_eq!(
            compute_ranks(&recs(&[("solo", 3.0, 2.0)]), Column::Noisy).unwrap(),
            vec![1]
        );
        let dup = recs(&[("a", 1.0, 1.0), ("a", 2.0, 2.0)]);
        assert_eq!(
            rank_diff(&dup).unwrap_err(),
            Error::DuplicateModelId("a".into())
        );
    }

    #[test]
    fn diffs() {
        let shift = recs(&[("a", 90.0, 80.0), ("b", 85.0, 75.0), ("c", 60.0, 50.0)]);
        assert!(rank_diff(&shift)
            .unwrap()
            .rows
            .iter()
            .all(|r| r.rank_diff == 0));
        let swap = rank_diff(&recs(&[("a", 90.0, 70.0), ("b", 85.0, 75.0)])).unwrap();
        assert_eq!(
            swap.rows.iter().map(|r| r.rank_diff).collect::<Vec<_>>(),
            vec![1, -1]
        );
        assert_eq!(swap.delta("a", "b").unwrap(), 2);
        assert!(swap.delta("a", "q").is_err());
        assert_eq!(swap.tie_policy, TIE_POLICY);
    }

    #[test]
    fn record_validation() {
        assert!(ModelRecord::new("a", 101.0, 3.0).is_err());
        assert!(ModelRecord::new("a", 50.0, f64::NAN).is_err());
        let r = ModelRecord::new("a", 80.0, 70.0)
            .unwrap()
            .with_severity(vec![(0.2, 70.0), (0.1, 75.0)])
            .unwrap();
        assert_eq!(r.severity, vec![(0.0, 80.0), (0.1, 75.0), (0.2, 70.0)]);
        assert!(ModelRecord::new("a", 80.0, 70.0)
            .unwrap()
            .with_severity(vec![(-0.1, 70.0)])
            .is_err());
    }
}
