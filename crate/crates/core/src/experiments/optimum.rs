use serde::Serialize;

use crate::error::{invalid, Result};
use crate::genotype::Genotype;
use crate::operators::{crossover_unchecked, BitMutation};
use crate::rng::make_rng;

use super::stats::proportion_stderr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimumFrequency {
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub stderr: f64,
}

/// Fraction of uniform crossovers of `a` and `b`, followed by standard bit
/// mutation at rate `p_m`, that yield the all-ones string.
pub fn estimate_optimum_frequency(
    a: &Genotype,
    b: &Genotype,
    p_m: f64,
    trials: u64,
    seed: u64,
    stream: u64,
) -> Result<OptimumFrequency> {
    a.check_same_len(b)?;
    if trials == 0 {
        return Err(invalid("trials", 0, "at least 1"));
    }
    let mutation = BitMutation::new(p_m)?;
    let mut rng = make_rng(seed, stream);
    let mut hits = 0u64;
    for _ in 0..trials {
        let mut c = crossover_unchecked(a, b, &mut rng);
        mutation.apply(&mut c, &mut rng);
        hits += u64::from(c.is_all_ones());
    }
    let frequency = hits as f64 / trials as f64;
    Ok(OptimumFrequency {
        trials,
        hits,
        frequency,
        stderr: proportion_stderr(frequency, trials),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::exact_optimum_probability;

    #[test]
    fn agrees_with_exact_probability() {
        let a: Genotype = "0011111111".parse().unwrap();
        let b: Genotype = "1100111111".parse().unwrap();
        let p = exact_optimum_probability(&a, &b, 0.1).unwrap();
        let est = estimate_optimum_frequency(&a, &b, 0.1, 400_000, 2, 0).unwrap();
        assert!(
            (est.frequency - p).abs() <= 3.0 * est.stderr,
            "{} vs {p}",
            est.frequency
        );
    }

    #[test]
    fn identical_ones_parents_need_no_mutation() {
        let a = Genotype::ones(30);
        let est = estimate_optimum_frequency(&a, &a, 0.0, 1000, 1, 0).unwrap();
        assert_eq!(est.hits, 1000);
        assert!(estimate_optimum_frequency(&a, &Genotype::ones(31), 0.0, 10, 1, 0).is_err());
    }
}
