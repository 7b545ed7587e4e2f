/// Cells with fewer accepted trials than this are reported as inconclusive.
pub const MIN_ACCEPTED: u64 = 100;

/// Normal-approximation standard error of a binomial proportion.
pub fn proportion_stderr(p: f64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

/// Median; the average of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
        assert_eq!(mean(&[1.0, 2.0, 6.0]), Some(3.0));
        assert!((proportion_stderr(0.5, 100) - 0.05).abs() < 1e-15);
        assert!(proportion_stderr(0.5, 0).is_nan());
    }
}
