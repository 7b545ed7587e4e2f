use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fitness::{jump_value, Fitness};
use crate::genotype::Genotype;
use crate::operators::{crossover_unchecked, BitMutation};
use crate::params::GaParams;

use super::Population;

/// How the offspring of one iteration was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EventClass {
    /// Crossover of parents at Hamming distance at most 2.
    A,
    /// Crossover of parents at Hamming distance at least 3 (at least 4 on the plateau).
    APrime,
    /// Mutation only.
    B,
}

impl EventClass {
    pub const ALL: [EventClass; 3] = [EventClass::A, EventClass::APrime, EventClass::B];

    pub fn used_crossover(self) -> bool {
        !matches!(self, EventClass::B)
    }

    pub fn label(self) -> &'static str {
        match self {
            EventClass::A => "A",
            EventClass::APrime => "A'",
            EventClass::B => "B",
        }
    }
}

impl fmt::Display for EventClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `second` is `Some` exactly when crossover was used.
pub fn classify_event(first: &Genotype, second: Option<&Genotype>) -> EventClass {
    match second {
        None => EventClass::B,
        Some(other) if first.hamming_unchecked(other) <= 2 => EventClass::A,
        Some(_) => EventClass::APrime,
    }
}

/// Indices into the pre-step population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parents {
    Single(usize),
    Pair(usize, usize),
}

impl Parents {
    pub fn len(&self) -> usize {
        match self {
            Parents::Single(_) => 1,
            Parents::Pair(..) => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        match *self {
            Parents::Single(i) => i == index,
            Parents::Pair(i, j) => i == index || j == index,
        }
    }
}

/// Record of one iteration.
///
/// `removed_index` addresses the μ+1 candidates: `0..μ` are the pre-step
/// members, `μ` is the offspring itself.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub t: u64,
    pub event: EventClass,
    pub parents: Parents,
    pub offspring: Genotype,
    pub offspring_fitness: Fitness,
    pub removed_index: usize,
    pub optimum_created: bool,
}

impl StepTrace {
    /// Whether the offspring was the removed candidate, leaving the population unchanged.
    pub fn offspring_rejected(&self, mu: usize) -> bool {
        self.removed_index == mu
    }

    /// Genotype that left the candidate multiset.
    pub fn removed<'a>(&'a self, before: &'a Population) -> &'a Genotype {
        if self.removed_index == before.mu() {
            &self.offspring
        } else {
            &before.members()[self.removed_index]
        }
    }
}

/// Precomputed per-run state for stepping: parameters plus the mutation
/// sampler.
///
/// Random draws inside one step always happen in this order:
/// 1. crossover coin `p ~ U[0,1)`, crossover iff `p < p_c`;
/// 2. parent index (two indices, with replacement, under crossover);
/// 3. one `u64` crossover mask per word (crossover only);
/// 4. geometric gaps of the mutation;
/// 5. the removal tie-break, drawn only when two or more candidates share the minimum fitness.
#[derive(Debug, Clone)]
pub struct StepEngine {
    params: GaParams,
    mutation: BitMutation,
}

impl StepEngine {
    pub fn new(params: &GaParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params: *params,
            mutation: BitMutation::new(params.p_m())?,
        })
    }

    pub fn params(&self) -> &GaParams {
        &self.params
    }

    /// Draws offspring and removal decision for one iteration without
    /// modifying `pop`.
    pub fn propose<R: Rng + ?Sized>(&self, pop: &Population, rng: &mut R) -> StepTrace {
        let mu = pop.mu();
        let members = pop.members();

        let coin: f64 = rng.random();
        let (parents, event, mut child) = if coin < self.params.p_c {
            let i = rng.random_range(0..mu);
            let j = rng.random_range(0..mu);
            let event = classify_event(&members[i], Some(&members[j]));
            (
                Parents::Pair(i, j),
                event,
                crossover_unchecked(&members[i], &members[j], rng),
            )
        } else {
            let i = rng.random_range(0..mu);
            (Parents::Single(i), EventClass::B, members[i].clone())
        };
        self.mutation.apply(&mut child, rng);

        let ones = child.ones_count();
        let n = pop.n();
        let fitness = jump_value(ones, n, pop.k());

        let fits = pop.fitness();
        let worst = fits.iter().copied().min().expect("non-empty").min(fitness);
        let ties = fits.iter().filter(|&&f| f == worst).count() + usize::from(fitness == worst);
        let pick = if ties > 1 {
            rng.random_range(0..ties)
        } else {
            0
        };
        let removed_index = fits
            .iter()
            .chain(std::iter::once(&fitness))
            .enumerate()
            .filter(|(_, &f)| f == worst)
            .nth(pick)
            .map(|(i, _)| i)
            .expect("tie index in range");

        StepTrace {
            t: pop.generation(),
            event,
            parents,
            offspring: child,
            offspring_fitness: fitness,
            removed_index,
            optimum_created: ones == n,
        }
    }

    /// One full iteration of the (μ+1) GA.
    pub fn step<R: Rng + ?Sized>(&self, pop: &mut Population, rng: &mut R) -> StepTrace {
        let trace = self.propose(pop, rng);
        commit(pop, &trace);
        trace
    }
}

/// Applies a proposed step: the offspring takes the slot of the removed
/// member, unless the offspring itself was removed.
pub fn commit(pop: &mut Population, trace: &StepTrace) {
    if trace.removed_index < pop.mu() {
        pop.replace(
            trace.removed_index,
            trace.offspring.clone(),
            trace.offspring_fitness,
        );
    }
    pop.advance();
}

/// Convenience form of [`StepEngine::propose`] for one-off calls.
pub fn propose<R: Rng + ?Sized>(
    pop: &Population,
    params: &GaParams,
    rng: &mut R,
) -> Result<StepTrace> {
    Ok(StepEngine::new(params)?.propose(pop, rng))
}

/// Convenience form of [`StepEngine::step`] for one-off calls.
pub fn ga_step<R: Rng + ?Sized>(
    pop: &mut Population,
    params: &GaParams,
    rng: &mut R,
) -> Result<StepTrace> {
    Ok(StepEngine::new(params)?.step(pop, rng))
}
