use serde::{Deserialize, Serialize};

/// Best, 20th-percentile and mean of a lower-is-better metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub best: f64,
    pub p20: f64,
    pub mean: f64,
}

/// Nearest-rank 20th percentile of `values` sorted ascending. NaN counts as
/// `+inf` (worst).
pub fn percentile_20(values: &[f64]) -> f64 {
    let mut v = sanitized(values);
    v.sort_by(f64::total_cmp);
    let rank = ((0.2 * v.len() as f64).ceil() as usize).max(1);
    v[rank - 1]
}

fn sanitized(values: &[f64]) -> Vec<f64> {
    values.iter().map(|x| if x.is_nan() { f64::INFINITY } else { *x }).collect()
}

/// Panics on an empty slice.
pub fn summarize(values: &[f64]) -> Summary {
    assert!(!values.is_empty(), "cannot summarize zero values");
    let v = sanitized(values);
    Summary {
        best: v.iter().copied().fold(f64::INFINITY, f64::min),
        p20: percentile_20(&v),
        mean: v.iter().sum::<f64>() / v.len() as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value() {
        let s = summarize(&[0.25]);
        assert_eq!((s.best, s.p20, s.mean), (0.25, 0.25, 0.25));
    }

    #[test]
    fn hundred_values() {
        let v: Vec<f64> = (0..100).rev().map(f64::from).collect();
        let s = summarize(&v);
        assert_eq!(s.best, 0.0);
        assert_eq!(s.p20, 19.0);
        assert_eq!(s.mean, 49.5);
    }

    #[test]
    fn failures_are_worst() {
        let s = summarize(&[1.0, f64::NAN, 2.0, 3.0, 4.0]);
        assert_eq!(s.best, 1.0);
        assert_eq!(s.p20, 1.0);
        assert!(s.mean.is_infinite());
    }
}
