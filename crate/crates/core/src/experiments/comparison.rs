use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::ga::{run, NoTelemetry, Population, StopCondition, StopReason};
use crate::params::GaParams;
use crate::rng::make_rng;

use super::stats::{mean, median};

/// One replicate of a run to the optimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub replicate: usize,
    pub seed: u64,
    pub iterations: u64,
    pub evaluations: u64,
    pub stop_reason: StopReason,
}

impl RunRecord {
    pub fn censored(&self) -> bool {
        self.stop_reason == StopReason::MaxIterations
    }
}

/// Runs `replicates` independent optimizations from uniform random
/// populations until the optimum or `max_iterations`. Replicate `r` uses
/// stream `r`, so arms that differ only in `p_c` share start populations.
pub fn run_replicates(
    params: &GaParams,
    replicates: usize,
    max_iterations: u64,
) -> Result<Vec<RunRecord>> {
    if replicates == 0 {
        return Err(invalid("replicates", 0, "at least 1"));
    }
    params.validate()?;
    let stops = [
        StopCondition::OptimumFound,
        StopCondition::MaxIterations(max_iterations),
    ];
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = make_rng(params.seed, r as u64);
            let pop = Population::init_uniform(params, &mut rng);
            let res = run(pop, params, &stops, &mut rng, &mut NoTelemetry)?;
            Ok(RunRecord {
                replicate: r,
                seed: params.seed,
                iterations: res.iterations,
                evaluations: res.evaluations,
                stop_reason: res.stop_reason,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ArmSummary {
    pub p_c: f64,
    pub runs: Vec<RunRecord>,
    pub completed: usize,
    pub censored: usize,
    /// Mean evaluations over completed runs.
    pub mean_evaluations: Option<f64>,
    /// Median evaluations with censored runs at their cap; `None` unless
    /// more than half completed.
    pub median_evaluations: Option<f64>,
}

impl ArmSummary {
    pub fn from_runs(p_c: f64, runs: Vec<RunRecord>) -> Self {
        let censored = runs.iter().filter(|r| r.censored()).count();
        let completed = runs.len() - censored;
        let done: Vec<f64> = runs
            .iter()
            .filter(|r| !r.censored())
            .map(|r| r.evaluations as f64)
            .collect();
        let median_evaluations = if 2 * completed > runs.len() {
            median(
                &runs
                    .iter()
                    .map(|r| r.evaluations as f64)
                    .collect::<Vec<_>>(),
            )
        } else {
            None
        };
        Self {
            p_c,
            completed,
            censored,
            mean_evaluations: mean(&done),
            median_evaluations,
            runs,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonConfig {
    pub params: GaParams,
    pub replicates: usize,
    pub max_iterations: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonSummary {
    pub params: GaParams,
    pub crossover: ArmSummary,
    pub mutation_only: ArmSummary,
    /// Median of the mutation-only arm over the median of the crossover arm.
    pub median_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
}

/// The configured GA against the same GA with `p_c = 0`, on paired streams.
pub fn run_comparison(config: &ComparisonConfig) -> Result<ComparisonSummary> {
    let params = config.params;
    let with = run_replicates(&params, config.replicates, config.max_iterations)?;
    let without = run_replicates(
        &params.with_p_c(0.0),
        config.replicates,
        config.max_iterations,
    )?;
    let crossover = ArmSummary::from_runs(params.p_c, with);
    let mutation_only = ArmSummary::from_runs(0.0, without);
    let ratio = |a: Option<f64>, b: Option<f64>| Some(a? / b?);
    Ok(ComparisonSummary {
        params,
        median_ratio: ratio(
            mutation_only.median_evaluations,
            crossover.median_evaluations,
        ),
        mean_ratio: ratio(mutation_only.mean_evaluations, crossover.mean_evaluations),
        crossover,
        mutation_only,
    })
}
