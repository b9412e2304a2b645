use crate::error::{Error, Result};

/// Clean activations of one pooling window, row-major when `side` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolWindow {
    values: Vec<f64>,
    side: Option<usize>,
}

impl PoolWindow {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter(
                "pooling window must be non-empty".into(),
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { values, side: None })
    }

    /// A `side x side` window.
    pub fn square(side: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != side * side {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {side}x{side} window",
                values.len()
            )));
        }
        let mut w = Self::new(values)?;
        w.side = Some(side);
        Ok(w)
    }

    /// `m` copies of `value`.
    pub fn uniform(m: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn side(&self) -> Option<usize> {
        self.side
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest value minus the second largest; zero for a single value.
    pub fn gap(&self) -> f64 {
        let mut top = [f64::NEG_INFINITY; 2];
        for &v in &self.values {
            if v > top[0] {
                top = [v, top[0]];
            } else if v > top[1] {
                top[1] = v;
            }
        }
        if self.values.len() < 2 {
            0.0
        } else {
            top[0] - top[1]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoolType {
    Avg,
    Max,
    /// Nearest-neighbour: the top-left element (index 0).
    Nn,
    Median,
}

impl PoolType {
    pub fn apply(self, values: &[f64]) -> f64 {
        match self {
            PoolType::Avg => mean(values),
            PoolType::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            PoolType::Nn => values[0],
            PoolType::Median => median(values),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PoolType::Avg => "avg",
            PoolType::Max => "max",
            PoolType::Nn => "nn",
            PoolType::Median => "median",
        }
    }
}

impl std::str::FromStr for PoolType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "avg" => Ok(PoolType::Avg),
            "max" => Ok(PoolType::Max),
            "nn" => Ok(PoolType::Nn),
            "median" => Ok(PoolType::Median),
            _ => Err(Error::InvalidParameter(format!("unknown pool type {s:?}"))),
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Middle order statistic; the mean of the two central ones for even counts.
pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    let m = v.len();
    let mid = m / 2;
    let (_, &mut hi, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    if m % 2 == 1 {
        hi
    } else {
        let lo = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo + hi) / 2.0
    }
}

pub fn pool_avg(win: &PoolWindow) -> f64 {
    PoolType::Avg.apply(&win.values)
}

pub fn pool_max(win: &PoolWindow) -> f64 {
    PoolType::Max.apply(&win.values)
}

pub fn pool_nn(win: &PoolWindow, index: usize) -> Result<f64> {
    win.values.get(index).copied().ok_or_else(|| {
        Error::InvalidParameter(format!("index {index} outside window of {}", win.len()))
    })
}

pub fn pool_median(win: &PoolWindow) -> f64 {
    PoolType::Median.apply(&win.values)
}

/// `l2 -> l2` Lipschitz constant of pooling `k` values into one: `k^-1/2`
/// for averaging, 1 for the selecting pools.
pub fn pool_lipschitz(pool: PoolType, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("window count must be >= 1".into()));
    }
    Ok(match pool {
        PoolType::Avg => 1.0 / (k as f64).sqrt(),
        PoolType::Max | PoolType::Nn | PoolType::Median => 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_pools() {
        let w = PoolWindow::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(pool_avg(&w), 2.5);
        assert_eq!(pool_max(&w), 4.0);
        assert_eq!(pool_nn(&w, 0).unwrap(), 1.0);
        assert_eq!(pool_median(&w), 2.5);
        assert!(pool_nn(&w, 4).is_err());

        let spike = PoolWindow::new(vec![0.0, 0.0, 0.0, 10.0]).unwrap();
        assert_eq!((pool_avg(&spike), pool_max(&spike)), (2.5, 10.0));

        let c = PoolWindow::uniform(9, -1.5).unwrap();
        for p in [
            pool_avg(&c),
            pool_max(&c),
            pool_nn(&c, 0).unwrap(),
            pool_median(&c),
        ] {
            assert_eq!(p, -1.5);
        }
    }

    #[test]
    fn odd_median_and_gap() {
        let w = PoolWindow::square(3, vec![5.0, 1.0, 9.0, 2.0, 8.0, 3.0, 7.0, 4.0, 6.0]).unwrap();
        assert_eq!(pool_median(&w), 5.0);
        assert_eq!(w.gap(), 1.0);
        assert_eq!(PoolWindow::new(vec![3.0]).unwrap().gap(), 0.0);
        assert!(PoolWindow::square(2, vec![0.0; 3]).is_err());
        assert!(PoolWindow::new(vec![]).is_err());
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(pool_lipschitz(PoolType::Avg, 4).unwrap(), 0.5);
        assert_eq!(pool_lipschitz(PoolType::Avg, 1).unwrap(), 1.0);
        assert_eq!(pool_lipschitz(PoolType::Max, 17).unwrap(), 1.0);
    }

    #[test]
    fn lipschitz_attained() {
        let a = [0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 1.1, 0.9, -2.2];
        let k = a.len();
        // constant perturbation for avg
        let n: Vec<f64> = vec![0.25; k];
        let shifted: Vec<f64> = a.iter().zip(&n).map(|(x, d)| x + d).collect();
        let norm = (n.iter().map(|d| d * d).sum::<f64>()).sqrt();
        let ratio = (PoolType::Avg.apply(&shifted) - PoolType::Avg.apply(&a)).abs() / norm;
        assert!((ratio - pool_lipschitz(PoolType::Avg, k).unwrap()).abs() < 1e-12);
        // one-hot on the argmax for max
        let mut bumped = a;
        bumped[3] += 0.5;
        let ratio = (PoolType::Max.apply(&bumped) - PoolType::Max.apply(&a)) / 0.5;
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_pool_type() {
        for p in [PoolType::Avg, PoolType::Max, PoolType::Nn, PoolType::Median] {
            assert_eq!(p.name().parse::<PoolType>().unwrap(), p);
        }
        assert!("mean".parse::<PoolType>().is_err());
    }
}
