use serde::Serialize;

use crate::error::{invalid, Result};

/// Problem and algorithm parameters of one (μ+1) GA run on Jump_k.
///
/// The mutation rate is given through its numerator: `p_m = chi / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaParams {
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub p_c: f64,
    pub chi: f64,
    pub seed: u64,
}

impl GaParams {
    pub fn new(n: usize, k: usize, mu: usize, p_c: f64, chi: f64, seed: u64) -> Result<Self> {
        let params = Self {
            n,
            k,
            mu,
            p_c,
            chi,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n", self.n, "a positive dimension"));
        }
        if self.k == 0 || 2 * self.k > self.n {
            return Err(invalid("k", self.k, "1 <= k <= n/2"));
        }
        if self.mu < 2 {
            return Err(invalid("mu", self.mu, "mu >= 2"));
        }
        if !(0.0..=1.0).contains(&self.p_c) {
            return Err(invalid("p_c", self.p_c, "a probability in [0, 1]"));
        }
        // p_m = chi/n must lie in [0, 1]; chi = 0 is allowed for no-variation runs.
        if !(self.chi >= 0.0 && self.chi <= self.n as f64) {
            return Err(invalid("chi", self.chi, "0 <= chi <= n"));
        }
        Ok(())
    }

    #[inline]
    pub fn p_m(&self) -> f64 {
        self.chi / self.n as f64
    }

    /// `k > n/4` is allowed but far outside the `k = o(n)` regime of the runtime results.
    pub fn k_is_large(&self) -> bool {
        4 * self.k > self.n
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_mu(self, mu: usize) -> Self {
        Self { mu, ..self }
    }

    pub fn with_p_c(self, p_c: f64) -> Self {
        Self { p_c, ..self }
    }
}
