use std::f64::consts::E;

use serde::Serialize;

use crate::error::{invalid, Result};

/// Probability that a no-flip mutation leaves a string unchanged, `(1 - χ/n)^n`.
fn no_flip(chi: f64, n: usize) -> f64 {
    (1.0 - chi / n as f64).powi(n as i32)
}

fn check_y(y: usize, mu: usize) -> Result<()> {
    if mu < 2 {
        return Err(invalid("mu", mu, "mu >= 2"));
    }
    if y == 0 || y > mu {
        return Err(invalid("y", y, "1 <= y <= mu"));
    }
    Ok(())
}

fn check_chi(chi: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", n, "a positive dimension"));
    }
    if !(chi >= 0.0 && chi <= n as f64) {
        return Err(invalid("chi", chi, "0 <= chi <= n"));
    }
    Ok(())
}

/// Inputs of a bound evaluation, validated together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInputs {
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub chi: f64,
    pub p_c: f64,
    /// Species size.
    pub y: usize,
    /// Half the Hamming distance between two plateau parents.
    pub d: usize,
    /// Threshold fraction of the survival bound.
    pub lambda: f64,
}

impl BoundInputs {
    pub fn validate(&self) -> Result<()> {
        check_chi(self.chi, self.n)?;
        check_y(self.y, self.mu)?;
        if self.k == 0 || 2 * self.k > self.n {
            return Err(invalid("k", self.k, "1 <= k <= n/2"));
        }
        if self.d > self.k {
            return Err(invalid("d", self.d, "0 <= d <= k"));
        }
        if !(0.0..=1.0).contains(&self.p_c) {
            return Err(invalid("p_c", self.p_c, "a probability in [0, 1]"));
        }
        if !(self.lambda > 0.5 && self.lambda < 1.0) {
            return Err(invalid("lambda", self.lambda, "1/2 < lambda < 1"));
        }
        Ok(())
    }
}

/// Natural log of [`optimum_construction_bound`].
pub fn optimum_construction_bound_ln(n: usize, k: usize, d: usize, p_m: f64) -> Result<f64> {
    if k == 0 || 2 * k > n {
        return Err(invalid("k", k, "1 <= k <= n/2"));
    }
    if d > k {
        return Err(invalid("d", d, "0 <= d <= k"));
    }
    if !(p_m > 0.0 && p_m < 1.0) {
        return Err(invalid("p_m", p_m, "0 < p_m < 1"));
    }
    Ok(-(d as f64) * 4f64.ln() + (n - k + d) as f64 * (-p_m).ln_1p() + (k - d) as f64 * p_m.ln())
}

/// Probability of one specific route from two plateau parents at Hamming
/// distance `2d` to the all-ones string: crossover picks the 1 at all `2d`
/// differing positions, then mutation flips exactly the `k - d` shared
/// zeros. Equals `4^-d (1 - p_m)^(n-k+d) p_m^(k-d)`.
pub fn optimum_construction_bound(n: usize, k: usize, d: usize, p_m: f64) -> Result<f64> {
    let ln = optimum_construction_bound_ln(n, k, d, p_m)?;
    if k - d >= 8 || n >= 10_000 {
        return Ok(ln.exp());
    }
    Ok(0.25f64.powi(d as i32) * (1.0 - p_m).powi((n - k + d) as i32) * p_m.powi((k - d) as i32))
}

/// A leading term plus the unscaled expression of its `O(·)` remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingTerm {
    pub leading: f64,
    pub o_scale: f64,
}

/// Upper bound on the probability that a species of size `y` grows, given
/// crossover of parents at distance at most 2 on a full plateau:
/// `(μ−y) y (μ+y) / (2(μ+1)μ²) · (1−χ/n)^n + O(((μ−y)/μ)² / n)`.
pub fn crossover_increase_leading_term(
    y: usize,
    mu: usize,
    chi: f64,
    n: usize,
) -> Result<LeadingTerm> {
    check_y(y, mu)?;
    check_chi(chi, n)?;
    let (y, m) = (y as f64, mu as f64);
    Ok(LeadingTerm {
        leading: (m - y) * y * (m + y) / (2.0 * (m + 1.0) * m * m) * no_flip(chi, n),
        o_scale: ((m - y) / m).powi(2) / n as f64,
    })
}

/// Lower bound on the probability that a species of size `y ∈ [1, μ−1]`
/// shrinks, given crossover of parents at distance at most 2 on a full plateau:
/// `y(μ−y)(μ(1+χ/2) + yχ/2) / (2(μ+1)μ²) · (1−χ/n)^n`.
pub fn crossover_decrease_lower_bound(y: usize, mu: usize, chi: f64, n: usize) -> Result<f64> {
    check_y(y, mu)?;
    check_chi(chi, n)?;
    if y == mu {
        return Err(invalid("y", y, "1 <= y <= mu - 1"));
    }
    let (y, m) = (y as f64, mu as f64);
    Ok(
        y * (m - y) * (m * (1.0 + chi / 2.0) + y * chi / 2.0) / (2.0 * (m + 1.0) * m * m)
            * no_flip(chi, n),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MutationBounds {
    /// Main part of the growth probability under mutation only.
    pub p_plus_leading: f64,
    /// Lower bound on the shrink probability under mutation only.
    pub p_minus_lower: f64,
    /// Unscaled remainder of the growth probability, `(μ−y)²/(nμ²)`.
    pub o_scale: f64,
}

/// Both mutation-only transition terms, `y(μ−y)/(μ(μ+1)) · (1−χ/n)^n`.
pub fn mutation_transition_bounds(
    y: usize,
    mu: usize,
    chi: f64,
    n: usize,
) -> Result<MutationBounds> {
    check_y(y, mu)?;
    check_chi(chi, n)?;
    let (y, m) = (y as f64, mu as f64);
    let term = y * (m - y) / (m * (m + 1.0)) * no_flip(chi, n);
    Ok(MutationBounds {
        p_plus_leading: term,
        p_minus_lower: term,
        o_scale: (m - y).powi(2) / (n as f64 * m * m),
    })
}

/// Exponent constant of the survival bound,
/// `C = (2λ − 1)(1 + (1 + λ)χ) / (256e) · p_c`.
pub fn survival_constant(lambda: f64, chi: f64, p_c: f64) -> Result<f64> {
    if !(lambda > 0.5 && lambda < 1.0) {
        return Err(invalid("lambda", lambda, "1/2 < lambda < 1"));
    }
    if !(chi > 0.0 && chi.is_finite()) {
        return Err(invalid("chi", chi, "chi > 0"));
    }
    if !(p_c > 0.0 && p_c <= 1.0) {
        return Err(invalid("p_c", p_c, "0 < p_c <= 1"));
    }
    Ok((2.0 * lambda - 1.0) * (1.0 + (1.0 + lambda) * chi) / (256.0 * E) * p_c)
}

/// The constant used by the runtime bound, `(1 + 7χ/4) / (512e) · p_c`,
/// written out independently of [`survival_constant`].
pub fn runtime_constant(chi: f64, p_c: f64) -> f64 {
    (1.0 + 1.75 * chi) / (512.0 * E) * p_c
}

/// `Pr[T ≤ t] ≤ t² exp(−b|ε| / (2c²))` for a process with drift `ε < 0`
/// away from a target at distance `b` and step size below `c`. The raw
/// value is returned even when it exceeds 1.
pub fn drift_tail_bound(t: f64, b: f64, epsilon: f64, c: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(invalid("b", b, "b > 0"));
    }
    if !(epsilon < 0.0) {
        return Err(invalid("epsilon", epsilon, "epsilon < 0"));
    }
    if !(c > 0.0 && c < b) {
        return Err(invalid("c", c, "0 < c < b"));
    }
    if !(t >= 0.0) {
        return Err(invalid("t", t, "t >= 0"));
    }
    Ok(t * t * (-b * epsilon.abs() / (2.0 * c * c)).exp())
}

/// Drift-theorem parameters for the species-size process started at μ/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftParameters {
    pub b: f64,
    pub c: f64,
    pub epsilon: f64,
}

/// `b = (λ − 1/2)μ`, `c = 1`, `ε = −(1 + (1+λ)χ) p_c / (64e)`.
pub fn survival_drift_parameters(
    lambda: f64,
    mu: usize,
    chi: f64,
    p_c: f64,
) -> Result<DriftParameters> {
    survival_constant(lambda, chi, p_c)?;
    Ok(DriftParameters {
        b: (lambda - 0.5) * mu as f64,
        c: 1.0,
        epsilon: -(1.0 + (1.0 + lambda) * chi) * p_c / (64.0 * E),
    })
}

/// `t² exp(−Cμ)`, raw (may exceed 1).
pub fn survival_tail(t: f64, mu: usize, lambda: f64, chi: f64, p_c: f64) -> Result<f64> {
    let c = survival_constant(lambda, chi, p_c)?;
    Ok(t * t * (-c * mu as f64).exp())
}

/// Order-of-magnitude evaluation of the expected runtime bound with every
/// suppressed constant set to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuntimeBound {
    /// `n √k (μ ln μ + ln n)`: reaching the plateau.
    pub plateau_term: f64,
    /// `(μn + μ² ln μ) / (n^(1−k) · min(exp(Cμ/2), n^(k−1)))`.
    pub diversity_term: f64,
    /// `n^(k−1)`.
    pub jump_term: f64,
    pub total: f64,
    /// `C = (1 + 7χ/4) p_c / (512e)`.
    pub constant: f64,
}

pub fn runtime_bound(n: usize, k: usize, mu: usize, chi: f64, p_c: f64) -> Result<RuntimeBound> {
    if mu < 2 {
        return Err(invalid("mu", mu, "mu >= 2"));
    }
    if k < 3 {
        return Err(invalid("k", k, "k >= 3"));
    }
    if n < k {
        return Err(invalid("n", n, "n >= k"));
    }
    let constant = survival_constant(0.75, chi, p_c)?;
    let (nf, kf, m) = (n as f64, k as f64, mu as f64);
    let ln_jump = (kf - 1.0) * nf.ln();
    let plateau_term = nf * kf.sqrt() * (m * m.ln() + nf.ln());
    // n^(k-1) / min(exp(Cμ/2), n^(k-1)) evaluated in log space.
    let diversity_term =
        (m * nf + m * m * m.ln()) * (ln_jump - (constant * m / 2.0).min(ln_jump)).exp();
    let jump_term = ln_jump.exp();
    Ok(RuntimeBound {
        plateau_term,
        diversity_term,
        jump_term,
        total: plateau_term + diversity_term + jump_term,
        constant,
    })
}
