use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::diversity::SpeciesTracker;
use crate::error::{invalid, Result};
use crate::ga::{Population, StepEngine};
use crate::params::GaParams;
use crate::rng::make_rng;

use super::stats::{mean, median};

/// Iteration scale `μn + μ² ln μ` of the expected takeover time.
pub fn takeover_scale(n: usize, mu: usize) -> f64 {
    let m = mu as f64;
    m * n as f64 + m * m * m.ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct TakeoverConfig {
    pub params: GaParams,
    pub replicates: usize,
    /// Per-replicate cap; defaults to `100 · takeover_scale(n, μ)`.
    pub max_iterations: Option<u64>,
}

impl TakeoverConfig {
    pub fn cap(&self) -> u64 {
        self.max_iterations.unwrap_or_else(|| {
            (100.0 * takeover_scale(self.params.n, self.params.mu)).ceil() as u64
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TakeoverOutcome {
    /// The largest species shrank to at most μ/2.
    Reached,
    /// The iteration cap ended the replicate first.
    Censored,
    /// The optimum was created first, which ends the plateau phase.
    OptimumFirst,
}

#[derive(Debug, Clone, Serialize)]
pub struct TakeoverReplicate {
    pub replicate: usize,
    pub iterations: u64,
    pub outcome: TakeoverOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct TakeoverSummary {
    pub params: GaParams,
    pub cap: u64,
    pub scale: f64,
    pub replicates: Vec<TakeoverReplicate>,
    pub reached: usize,
    pub censored: usize,
    pub optimum_first: usize,
    /// Mean over replicates that reached the target.
    pub mean: Option<f64>,
    /// Median counting censored replicates at the cap; `None` unless more
    /// than half reached the target.
    pub median: Option<f64>,
    /// `mean / scale`.
    pub ratio: Option<f64>,
}

/// Steps from `pop` until the largest species has size at most μ/2.
///
/// Returns the final population, its species tracker, the number of
/// iterations and the outcome.
pub(crate) fn drive_to_takeover<R: Rng + ?Sized>(
    mut pop: Population,
    engine: &StepEngine,
    cap: u64,
    rng: &mut R,
) -> (Population, SpeciesTracker, u64, TakeoverOutcome) {
    let mu = pop.mu();
    let mut tracker = SpeciesTracker::new(&pop);
    let mut t = 0;
    loop {
        if 2 * tracker.largest() <= mu {
            return (pop, tracker, t, TakeoverOutcome::Reached);
        }
        if t >= cap {
            return (pop, tracker, t, TakeoverOutcome::Censored);
        }
        let tr = engine.propose(&pop, rng);
        tracker.apply(&pop, &tr);
        crate::ga::commit(&mut pop, &tr);
        t += 1;
        if tr.optimum_created {
            return (pop, tracker, t, TakeoverOutcome::OptimumFirst);
        }
    }
}

/// Runs `replicates` independent takeovers from a monomorphic plateau
/// population. Replicate `r` uses stream `r`.
pub fn run_takeover(config: &TakeoverConfig) -> Result<TakeoverSummary> {
    if config.replicates == 0 {
        return Err(invalid("replicates", 0, "at least 1"));
    }
    let params = config.params;
    let engine = StepEngine::new(&params)?;
    let cap = config.cap();

    let replicates: Vec<TakeoverReplicate> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = make_rng(params.seed, r as u64);
            let pop = Population::init_monomorphic_plateau(&params, &mut rng);
            let (_, _, iterations, outcome) = drive_to_takeover(pop, &engine, cap, &mut rng);
            TakeoverReplicate {
                replicate: r,
                iterations,
                outcome,
            }
        })
        .collect();

    let count = |o| replicates.iter().filter(|r| r.outcome == o).count();
    let (reached, censored, optimum_first) = (
        count(TakeoverOutcome::Reached),
        count(TakeoverOutcome::Censored),
        count(TakeoverOutcome::OptimumFirst),
    );
    let hits: Vec<f64> = replicates
        .iter()
        .filter(|r| r.outcome == TakeoverOutcome::Reached)
        .map(|r| r.iterations as f64)
        .collect();
    let mean = mean(&hits);
    // Censored and optimum-first replicates sort above every hit.
    let median = if 2 * reached > replicates.len() {
        let padded: Vec<f64> = replicates
            .iter()
            .map(|r| {
                if r.outcome == TakeoverOutcome::Reached {
                    r.iterations as f64
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        median(&padded)
    } else {
        None
    };
    let scale = takeover_scale(params.n, params.mu);
    Ok(TakeoverSummary {
        params,
        cap,
        scale,
        replicates,
        reached,
        censored,
        optimum_first,
        mean,
        median,
        ratio: mean.map(|m| m / scale),
    })
}
