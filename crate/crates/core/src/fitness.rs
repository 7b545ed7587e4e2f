use serde::Serialize;

use crate::error::{invalid, Result};
use crate::genotype::Genotype;

/// Jump_k fitness value, in `[0, n + k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fitness(pub u64);

/// Jump_k evaluated from the number of ones. No range checks.
#[inline]
pub fn jump_value(ones: usize, n: usize, k: usize) -> Fitness {
    if ones == n || ones + k <= n {
        Fitness((k + ones) as u64)
    } else {
        Fitness((n - ones) as u64)
    }
}

/// Jump_k of a genotype: `k + |x|_1` off the gap, `n - |x|_1` inside it.
pub fn jump_fitness(g: &Genotype, k: usize) -> Result<Fitness> {
    let n = g.len();
    if k == 0 || k > n {
        return Err(invalid("k", k, "1 <= k <= n"));
    }
    Ok(jump_value(g.ones_count(), n, k))
}

/// The fitness shared by every plateau point, which equals `n`.
pub fn plateau_fitness(n: usize) -> Fitness {
    Fitness(n as u64)
}

pub fn optimum_fitness(n: usize, k: usize) -> Fitness {
    Fitness((n + k) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_ones(n: usize, ones: usize) -> Genotype {
        let bits: Vec<bool> = (0..n).map(|i| i < ones).collect();
        Genotype::from_bits(&bits)
    }

    #[test]
    fn branches_of_jump() {
        assert_eq!(jump_fitness(&with_ones(100, 100), 5).unwrap(), Fitness(105));
        assert_eq!(jump_fitness(&with_ones(100, 95), 5).unwrap(), Fitness(100));
        assert_eq!(jump_fitness(&with_ones(100, 97), 5).unwrap(), Fitness(3));
        assert_eq!(jump_fitness(&with_ones(100, 0), 5).unwrap(), Fitness(5));
    }

    #[test]
    fn k_out_of_range_is_rejected() {
        assert!(jump_fitness(&with_ones(10, 3), 0).is_err());
        assert!(jump_fitness(&with_ones(10, 3), 11).is_err());
        assert!(jump_fitness(&with_ones(10, 3), 10).is_ok());
    }

    fn all_strings(n: usize) -> impl Iterator<Item = Genotype> {
        (0u32..1 << n)
            .map(move |m| Genotype::from_bits(&(0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
    }

    #[test]
    fn unique_maximum_at_all_ones_exhaustive() {
        let (n, k) = (12, 3);
        let mut best = Vec::new();
        for x in all_strings(n) {
            let f = jump_fitness(&x, k).unwrap();
            assert!(f.0 <= (n + k) as u64);
            if f == optimum_fitness(n, k) {
                best.push(x);
            }
        }
        assert_eq!(best, vec![Genotype::ones(n)]);
    }

    #[test]
    fn plateau_and_gap_structure_exhaustive() {
        let n = 12;
        for k in 2..=4 {
            let mut min_non_gap = u64::MAX;
            let mut max_gap = 0;
            for x in all_strings(n) {
                let ones = x.ones_count();
                let f = jump_fitness(&x, k).unwrap().0;
                if ones == n - k {
                    assert_eq!(f, n as u64);
                }
                if ones > n - k && ones < n {
                    assert!((1..k as u64).contains(&f), "gap fitness {f} for k={k}");
                    max_gap = max_gap.max(f);
                } else {
                    min_non_gap = min_non_gap.min(f);
                }
            }
            assert!(max_gap < min_non_gap);
        }
    }
}
