use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// A fixed-length bit string packed into 64-bit words.
///
/// Bit `i` lives in word `i / 64` at position `i % 64`. Padding bits past
/// `len` are always zero, so word-wise popcount and XOR are exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Genotype {
    words: Vec<u64>,
    len: usize,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl Genotype {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut g = Self {
            words: vec![u64::MAX; word_count(len)],
            len,
        };
        g.clear_padding();
        g
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut g = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                g.set(i, true);
            }
        }
        g
    }

    /// Uniform sample from `{0,1}^len`.
    pub fn random<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut g = Self {
            words: (0..word_count(len)).map(|_| rng.next_u64()).collect(),
            len,
        };
        g.clear_padding();
        g
    }

    /// Uniform sample among the `C(len, zeros)` strings with exactly `zeros` 0-bits.
    pub fn random_with_zeros<R: Rng + ?Sized>(
        len: usize,
        zeros: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if zeros > len {
            return Err(crate::error::invalid(
                "zeros",
                zeros,
                "at most the genotype length",
            ));
        }
        let mut g = Self::ones(len);
        for i in index::sample(rng, len, zeros) {
            g.set(i, false);
        }
        Ok(g)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Flips every bit.
    pub fn complement(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.clear_padding();
    }

    /// Number of 1-bits, `|x|_1`.
    #[inline]
    pub fn ones_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn zeros_count(&self) -> usize {
        self.len - self.ones_count()
    }

    pub fn is_all_ones(&self) -> bool {
        self.ones_count() == self.len
    }

    pub fn check_same_len(&self, other: &Genotype) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    /// Number of positions in which the two strings differ.
    pub fn hamming_distance(&self, other: &Genotype) -> Result<usize> {
        self.check_same_len(other)?;
        Ok(self.hamming_unchecked(other))
    }

    #[inline]
    pub(crate) fn hamming_unchecked(&self, other: &Genotype) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn xor(&self, other: &Genotype) -> Result<Genotype> {
        self.check_same_len(other)?;
        Ok(Genotype {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
            len: self.len,
        })
    }

    /// Indices of the 0-bits, ascending.
    pub fn zero_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| !self.get(i)).collect()
    }

    pub fn one_positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub(crate) fn clear_padding(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }
}

/// `|g|_1`.
pub fn ones_count(g: &Genotype) -> usize {
    g.ones_count()
}

/// `H(a, b)`; fails when the lengths differ.
pub fn hamming_distance(a: &Genotype, b: &Genotype) -> Result<usize> {
    a.hamming_distance(b)
}

impl fmt::Display for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Genotype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Genotype({self})")
    }
}

impl FromStr for Genotype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Genotype::from_bits(&bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::make_rng;
    use proptest::prelude::*;

    fn g(s: &str) -> Genotype {
        s.parse().unwrap()
    }

    #[test]
    fn ones_count_examples() {
        assert_eq!(Genotype::zeros(8).ones_count(), 0);
        assert_eq!(Genotype::ones(8).ones_count(), 8);
        assert_eq!(g("10110000").ones_count(), 3);
    }

    #[test]
    fn hamming_examples() {
        let x = g("1011001");
        assert_eq!(x.hamming_distance(&x).unwrap(), 0);
        assert_eq!(
            Genotype::zeros(5)
                .hamming_distance(&Genotype::ones(5))
                .unwrap(),
            5
        );
        assert_eq!(g("10110").hamming_distance(&g("10011")).unwrap(), 2);
    }

    #[test]
    fn hamming_rejects_length_mismatch() {
        let err = g("101").hamming_distance(&g("1010")).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { left: 3, right: 4 });
    }

    #[test]
    fn padding_stays_clear_across_word_boundary() {
        let mut x = Genotype::ones(70);
        assert_eq!(x.ones_count(), 70);
        x.complement();
        assert_eq!(x.ones_count(), 0);
        let mut rng = make_rng(3, 0);
        let r = Genotype::random(130, &mut rng);
        assert!(r.ones_count() <= 130);
        assert_eq!(r.words().len(), 3);
        assert_eq!(r.words()[2] >> 2, 0);
    }

    #[test]
    fn display_round_trips() {
        let s = "0110100111010";
        assert_eq!(g(s).to_string(), s);
        assert!("01a".parse::<Genotype>().is_err());
    }

    #[test]
    fn random_with_zeros_has_exact_zero_count() {
        let mut rng = make_rng(11, 0);
        for zeros in 0..=10 {
            let x = Genotype::random_with_zeros(10, zeros, &mut rng).unwrap();
            assert_eq!(x.zeros_count(), zeros);
        }
        assert!(Genotype::random_with_zeros(4, 5, &mut rng).is_err());
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
        (1usize..200).prop_flat_map(|n| {
            (
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(any::<bool>(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn hamming_is_popcount_of_xor((a, b) in arb_pair()) {
            let (a, b) = (Genotype::from_bits(&a), Genotype::from_bits(&b));
            let h = a.hamming_distance(&b).unwrap();
            prop_assert_eq!(h, a.xor(&b).unwrap().ones_count());
            prop_assert_eq!(h, b.hamming_distance(&a).unwrap());
            prop_assert!(h <= a.len());
        }

        #[test]
        fn string_form_round_trips(bits in prop::collection::vec(any::<bool>(), 0..300)) {
            let x = Genotype::from_bits(&bits);
            prop_assert_eq!(x.to_string().parse::<Genotype>().unwrap(), x.clone());
            prop_assert_eq!(x.ones_count(), bits.iter().filter(|&&b| b).count());
        }
    }
}
