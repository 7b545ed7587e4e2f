//! Uniform crossover and standard bit mutation.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Geometric};

use crate::error::{invalid, Result};
use crate::genotype::Genotype;

/// Each offspring bit is taken from `a` or `b` with probability 1/2,
/// independently per position. Consumes one `u64` per word.
pub fn uniform_crossover<R: RngCore + ?Sized>(
    a: &Genotype,
    b: &Genotype,
    rng: &mut R,
) -> Result<Genotype> {
    a.check_same_len(b)?;
    Ok(crossover_unchecked(a, b, rng))
}

#[inline]
pub(crate) fn crossover_unchecked<R: RngCore + ?Sized>(
    a: &Genotype,
    b: &Genotype,
    rng: &mut R,
) -> Genotype {
    let mut child = a.clone();
    for (c, &w) in child.words_mut().iter_mut().zip(b.words()) {
        let mask = rng.next_u64();
        *c = (*c & mask) | (w & !mask);
    }
    child
}

/// Standard bit mutation with a fixed rate.
///
/// For `0 < p_m < 1` the flipped positions are generated by geometric
/// skipping: the gap to the next flipped bit is `Geometric(p_m)`, which
/// yields exactly independent Bernoulli(`p_m`) flips at expected cost
/// `O(1 + n p_m)` draws.
#[derive(Debug, Clone)]
pub struct BitMutation {
    rate: f64,
    gaps: Option<Geometric>,
}

impl BitMutation {
    pub fn new(rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(invalid("p_m", rate, "a probability in [0, 1]"));
        }
        let gaps = if rate > 0.0 && rate < 1.0 {
            Some(
                Geometric::new(rate)
                    .map_err(|_| invalid("p_m", rate, "a probability in [0, 1]"))?,
            )
        } else {
            None
        };
        Ok(Self { rate, gaps })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Mutates `g` in place and returns the number of flipped bits.
    pub fn apply<R: Rng + ?Sized>(&self, g: &mut Genotype, rng: &mut R) -> usize {
        let n = g.len() as u64;
        match &self.gaps {
            None if self.rate >= 1.0 => {
                g.complement();
                g.len()
            }
            None => 0,
            Some(gaps) => {
                let mut flips = 0;
                let mut pos = gaps.sample(rng);
                while pos < n {
                    g.flip(pos as usize);
                    flips += 1;
                    pos = pos.saturating_add(1).saturating_add(gaps.sample(rng));
                }
                flips
            }
        }
    }
}

/// Returns a copy of `g` with each bit flipped independently with probability `p_m`.
pub fn standard_bit_mutation<R: Rng + ?Sized>(
    g: &Genotype,
    p_m: f64,
    rng: &mut R,
) -> Result<Genotype> {
    let op = BitMutation::new(p_m)?;
    let mut out = g.clone();
    op.apply(&mut out, rng);
    Ok(out)
}
