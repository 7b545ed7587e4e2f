use crate::error::Result;
use crate::genotype::Genotype;

/// Position classes of two parents: shared ones, shared zeros, differing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParentOverlap {
    pub both_ones: usize,
    pub both_zeros: usize,
    pub differing: usize,
}

impl ParentOverlap {
    pub fn of(a: &Genotype, b: &Genotype) -> Result<Self> {
        a.check_same_len(b)?;
        let (mut both_ones, mut differing) = (0, 0);
        for (x, y) in a.words().iter().zip(b.words()) {
            both_ones += (x & y).count_ones() as usize;
            differing += (x ^ y).count_ones() as usize;
        }
        Ok(Self {
            both_ones,
            both_zeros: a.len() - both_ones - differing,
            differing,
        })
    }
}

/// Natural log of [`exact_optimum_probability`]; `-inf` when the event is impossible.
pub fn exact_optimum_probability_ln(a: &Genotype, b: &Genotype, p_m: f64) -> Result<f64> {
    let o = ParentOverlap::of(a, b)?;
    let ln_term = |count: usize, p: f64| {
        if count == 0 {
            0.0
        } else {
            count as f64 * p.ln()
        }
    };
    Ok(ln_term(o.both_ones, 1.0 - p_m) + ln_term(o.both_zeros, p_m) + ln_term(o.differing, 0.5))
}

/// Exact probability that uniform crossover of `a` and `b` followed by
/// standard bit mutation with rate `p_m` yields the all-ones string.
///
/// Bits are independent: a position whose crossover bit is 1 with
/// probability `q ∈ {0, ½, 1}` ends as 1 with probability
/// `q(1 − p_m) + (1 − q)p_m`, which is `1 − p_m` for shared ones, `p_m` for
/// shared zeros and exactly `½` for differing positions.
pub fn exact_optimum_probability(a: &Genotype, b: &Genotype, p_m: f64) -> Result<f64> {
    let o = ParentOverlap::of(a, b)?;
    Ok(0.5f64.powi(o.differing as i32)
        * (1.0 - p_m).powi(o.both_ones as i32)
        * p_m.powi(o.both_zeros as i32))
}
