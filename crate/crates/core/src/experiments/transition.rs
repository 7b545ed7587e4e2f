use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::ga::{EventClass, Population, StepEngine};
use crate::genotype::Genotype;
use crate::params::GaParams;
use crate::rng::make_rng;

use super::stats::{proportion_stderr, MIN_ACCEPTED};

/// A uniform random plateau point and a plateau point at Hamming distance
/// `2 · half_distance` from it, made by swapping `half_distance` of its
/// zeros with as many of its ones.
pub fn plateau_pair<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    half_distance: usize,
    rng: &mut R,
) -> Result<(Genotype, Genotype)> {
    if half_distance > k || half_distance > n - k {
        return Err(invalid(
            "half_distance",
            half_distance,
            "at most min(k, n - k)",
        ));
    }
    let x = Genotype::random_with_zeros(n, k, rng)?;
    let zeros = x.zero_positions();
    let ones = x.one_positions();
    let mut z = x.clone();
    for i in rand::seq::index::sample(rng, zeros.len(), half_distance) {
        z.flip(zeros[i]);
    }
    for i in rand::seq::index::sample(rng, ones.len(), half_distance) {
        z.flip(ones[i]);
    }
    Ok((x, z))
}

/// Start population of a transition estimate, together with the species
/// whose size is followed.
#[derive(Debug, Clone, PartialEq)]
pub enum PopulationSpec {
    /// μ copies of a random plateau point; the species has size μ.
    Monomorphic,
    /// `y` copies of a random plateau point `x` and `μ − y` copies of a
    /// plateau point at Hamming distance `2 · half_distance` from `x`; the
    /// followed species is `x`.
    TwoSpecies { y: usize, half_distance: usize },
    /// A caller-supplied full-plateau population and species.
    Explicit {
        population: Population,
        species: Genotype,
    },
}

impl PopulationSpec {
    pub fn build<R: Rng + ?Sized>(
        &self,
        params: &GaParams,
        rng: &mut R,
    ) -> Result<(Population, Genotype)> {
        let (pop, species) = match self {
            PopulationSpec::Monomorphic => {
                let pop = Population::init_monomorphic_plateau(params, rng);
                let s = pop.members()[0].clone();
                (pop, s)
            }
            &PopulationSpec::TwoSpecies { y, half_distance } => {
                let (n, k, mu) = (params.n, params.k, params.mu);
                if y == 0 || y >= mu {
                    return Err(invalid("y", y, "1 <= y <= mu - 1 for two species"));
                }
                if half_distance == 0 {
                    return Err(invalid("half_distance", 0, "at least 1 for two species"));
                }
                let (x, z) = plateau_pair(n, k, half_distance, rng)?;
                let mut members = vec![x.clone(); y];
                members.extend(std::iter::repeat_n(z, mu - y));
                (Population::from_members(members, k)?, x)
            }
            PopulationSpec::Explicit {
                population,
                species,
            } => (population.clone(), species.clone()),
        };
        if pop.mu() != params.mu || pop.n() != params.n || pop.k() != params.k {
            return Err(invalid(
                "population",
                pop.mu(),
                "a population matching (n, k, mu)",
            ));
        }
        if !pop.all_on_plateau() {
            return Err(invalid(
                "population",
                "off-plateau member",
                "a full-plateau population",
            ));
        }
        if !pop.members().contains(&species) {
            return Err(invalid(
                "species",
                &species,
                "a genotype present in the population",
            ));
        }
        Ok((pop, species))
    }

    pub fn describe(&self) -> String {
        match self {
            PopulationSpec::Monomorphic => "monomorphic".to_string(),
            PopulationSpec::TwoSpecies { y, half_distance } => {
                format!("two-species y={y} distance={}", 2 * half_distance)
            }
            PopulationSpec::Explicit { .. } => "explicit".to_string(),
        }
    }
}

/// Conditional one-step frequencies of the followed species growing or
/// shrinking by one, given the realized event class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionedEstimate {
    pub event: EventClass,
    pub y: usize,
    pub mu: usize,
    /// Steps simulated.
    pub trials: u64,
    /// Steps whose event matched; the denominator of both frequencies.
    pub accepted: u64,
    pub p_plus_hat: f64,
    pub p_minus_hat: f64,
    pub stderr_plus: f64,
    pub stderr_minus: f64,
    pub config_descriptor: String,
    /// Fewer than [`MIN_ACCEPTED`] matching steps.
    pub inconclusive: bool,
}

/// Change of the followed species' size caused by one proposed step.
fn species_delta(
    pop: &Population,
    species: &Genotype,
    offspring: &Genotype,
    removed_index: usize,
) -> i32 {
    let gained = i32::from(offspring == species);
    let removed = if removed_index == pop.mu() {
        offspring
    } else {
        &pop.members()[removed_index]
    };
    gained - i32::from(removed == species)
}

/// Repeats `trials` single steps from the same start population with fresh
/// randomness, keeps those whose realized event is `event`, and reports
/// the conditional frequencies of `ΔY_s = +1` and `−1`.
///
/// The start population is built from `make_rng(params.seed, stream)`,
/// which then drives the trials.
pub fn estimate_transition(
    params: &GaParams,
    spec: &PopulationSpec,
    event: EventClass,
    trials: u64,
    stream: u64,
) -> Result<ConditionedEstimate> {
    let engine = StepEngine::new(params)?;
    let mut rng = make_rng(params.seed, stream);
    let (pop, species) = spec.build(params, &mut rng)?;
    let y = pop.members().iter().filter(|g| **g == species).count();

    let (mut accepted, mut plus, mut minus) = (0u64, 0u64, 0u64);
    for _ in 0..trials {
        let tr = engine.propose(&pop, &mut rng);
        if tr.event != event {
            continue;
        }
        accepted += 1;
        match species_delta(&pop, &species, &tr.offspring, tr.removed_index) {
            1 => plus += 1,
            -1 => minus += 1,
            _ => {}
        }
    }

    let freq = |c: u64| {
        if accepted == 0 {
            0.0
        } else {
            c as f64 / accepted as f64
        }
    };
    let (p_plus_hat, p_minus_hat) = (freq(plus), freq(minus));
    Ok(ConditionedEstimate {
        event,
        y,
        mu: params.mu,
        trials,
        accepted,
        p_plus_hat,
        p_minus_hat,
        stderr_plus: proportion_stderr(p_plus_hat, accepted),
        stderr_minus: proportion_stderr(p_minus_hat, accepted),
        config_descriptor: spec.describe(),
        inconclusive: accepted < MIN_ACCEPTED,
    })
}

/// Unconditional one-step drift `E[ΔY_s | Y_s = y]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftEstimate {
    pub y: usize,
    pub mu: usize,
    pub trials: u64,
    pub p_plus_hat: f64,
    pub p_minus_hat: f64,
    pub mean: f64,
    pub stderr: f64,
}

pub fn estimate_drift(
    params: &GaParams,
    spec: &PopulationSpec,
    trials: u64,
    stream: u64,
) -> Result<DriftEstimate> {
    if trials < 2 {
        return Err(invalid("trials", trials, "at least 2"));
    }
    let engine = StepEngine::new(params)?;
    let mut rng = make_rng(params.seed, stream);
    let (pop, species) = spec.build(params, &mut rng)?;
    let y = pop.members().iter().filter(|g| **g == species).count();

    let (mut plus, mut minus) = (0u64, 0u64);
    for _ in 0..trials {
        let tr = engine.propose(&pop, &mut rng);
        match species_delta(&pop, &species, &tr.offspring, tr.removed_index) {
            1 => plus += 1,
            -1 => minus += 1,
            _ => {}
        }
    }
    let n = trials as f64;
    let mean = (plus as f64 - minus as f64) / n;
    let second = (plus + minus) as f64 / n;
    let var = (second - mean * mean) * n / (n - 1.0);
    Ok(DriftEstimate {
        y,
        mu: params.mu,
        trials,
        p_plus_hat: plus as f64 / n,
        p_minus_hat: minus as f64 / n,
        mean,
        stderr: (var / n).sqrt(),
    })
}
