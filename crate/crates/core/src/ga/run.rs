use std::ops::ControlFlow;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::params::GaParams;

use super::step::{StepEngine, StepTrace};
use super::Population;

/// When to stop iterating. A run stops as soon as any of its conditions holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopCondition {
    /// The all-ones string has been evaluated, either initially or as an offspring.
    OptimumFound,
    MaxIterations(u64),
    /// Every member is on the plateau or is the optimum.
    FullPopulationOnPlateauOrOptimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    OptimumFound,
    MaxIterations,
    PlateauReached,
    /// A telemetry hook asked to stop.
    Halted,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::OptimumFound => "optimum_found",
            StopReason::MaxIterations => "max_iterations",
            StopReason::PlateauReached => "plateau_reached",
            StopReason::Halted => "halted",
        }
    }
}

/// Observer of a run.
///
/// `on_step` sees every iteration; `snapshot` is pulled at generation 0 and
/// then every `stride()` iterations, never for the population in which the
/// run stopped. Either callback may halt the run.
pub trait Telemetry {
    fn stride(&self) -> u64 {
        1
    }

    fn on_step(&mut self, _before: &Population, _trace: &StepTrace) -> ControlFlow<()> {
        ControlFlow::Continue(())
    }

    fn snapshot(&mut self, _pop: &Population) -> ControlFlow<()> {
        ControlFlow::Continue(())
    }
}

/// Hook that records nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoTelemetry;

impl Telemetry for NoTelemetry {}

/// Snapshot every iteration for μ ≤ 64, every 10th otherwise.
pub fn default_stride(mu: usize) -> u64 {
    if mu <= 64 {
        1
    } else {
        10
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub population: Population,
    pub iterations: u64,
    /// Fitness evaluations: μ for initialization plus one per iteration.
    pub evaluations: u64,
    pub stop_reason: StopReason,
    pub optimum_found: bool,
}

impl RunResult {
    /// False when the iteration cap ended the run.
    pub fn converged(&self) -> bool {
        self.stop_reason != StopReason::MaxIterations
    }
}

/// Iterates the GA from `pop` until a stop condition holds.
///
/// With no `MaxIterations` condition the loop may not terminate; callers
/// choosing only `OptimumFound` rely on the optimum being reached.
pub fn run<R: Rng + ?Sized, T: Telemetry + ?Sized>(
    mut pop: Population,
    params: &GaParams,
    stops: &[StopCondition],
    rng: &mut R,
    telemetry: &mut T,
) -> Result<RunResult> {
    for s in stops {
        if let StopCondition::MaxIterations(0) = s {
            return Err(invalid("max_iterations", 0, "a positive limit"));
        }
    }
    let engine = StepEngine::new(params)?;
    let stride = telemetry.stride().max(1);
    let mu = pop.mu() as u64;
    let start = pop.generation();

    let mut optimum_found = pop.contains_optimum();
    let finish = |pop: Population, reason: StopReason, optimum_found: bool| {
        let iterations = pop.generation() - start;
        RunResult {
            population: pop,
            iterations,
            evaluations: mu + iterations,
            stop_reason: reason,
            optimum_found,
        }
    };

    if let Some(reason) = check_stops(stops, &pop, 0, optimum_found) {
        return Ok(finish(pop, reason, optimum_found));
    }
    if telemetry.snapshot(&pop).is_break() {
        return Ok(finish(pop, StopReason::Halted, optimum_found));
    }

    loop {
        let trace = engine.propose(&pop, rng);
        let halted = telemetry.on_step(&pop, &trace).is_break();
        optimum_found |= trace.optimum_created;
        super::step::commit(&mut pop, &trace);
        let done = pop.generation() - start;

        if let Some(reason) = check_stops(stops, &pop, done, optimum_found) {
            return Ok(finish(pop, reason, optimum_found));
        }
        if halted {
            return Ok(finish(pop, StopReason::Halted, optimum_found));
        }
        if done.is_multiple_of(stride) && telemetry.snapshot(&pop).is_break() {
            return Ok(finish(pop, StopReason::Halted, optimum_found));
        }
    }
}

fn check_stops(
    stops: &[StopCondition],
    pop: &Population,
    done: u64,
    optimum_found: bool,
) -> Option<StopReason> {
    stops.iter().find_map(|s| match *s {
        StopCondition::OptimumFound if optimum_found => Some(StopReason::OptimumFound),
        StopCondition::MaxIterations(limit) if done >= limit => Some(StopReason::MaxIterations),
        StopCondition::FullPopulationOnPlateauOrOptimum if pop.all_at_least_plateau() => {
            Some(StopReason::PlateauReached)
        }
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diversity::census;
    use crate::genotype::Genotype;
    use crate::rng::make_rng;

    struct Recorder {
        traces: Vec<StepTrace>,
        snapshots: Vec<u64>,
        stride: u64,
    }

    impl Telemetry for Recorder {
        fn stride(&self) -> u64 {
            self.stride
        }
        fn on_step(&mut self, _before: &Population, trace: &StepTrace) -> ControlFlow<()> {
            self.traces.push(trace.clone());
            ControlFlow::Continue(())
        }
        fn snapshot(&mut self, pop: &Population) -> ControlFlow<()> {
            self.snapshots.push(pop.generation());
            ControlFlow::Continue(())
        }
    }

    #[test]
    fn optimum_in_initial_population_stops_immediately() {
        let params = GaParams::new(10, 2, 3, 0.5, 1.0, 0).unwrap();
        let pop = Population::from_members(
            vec![Genotype::ones(10), Genotype::zeros(10), Genotype::zeros(10)],
            2,
        )
        .unwrap();
        let res = run(
            pop,
            &params,
            &[StopCondition::OptimumFound],
            &mut make_rng(0, 0),
            &mut NoTelemetry,
        )
        .unwrap();
        assert_eq!(res.iterations, 0);
        assert_eq!(res.evaluations, 3);
        assert_eq!(res.stop_reason, StopReason::OptimumFound);
    }

    #[test]
    fn zero_iteration_cap_is_rejected() {
        let params = GaParams::new(10, 2, 3, 0.5, 1.0, 0).unwrap();
        let pop = Population::init_uniform(&params, &mut make_rng(0, 0));
        assert!(run(
            pop,
            &params,
            &[StopCondition::MaxIterations(0)],
            &mut make_rng(0, 1),
            &mut NoTelemetry
        )
        .is_err());
    }

    #[test]
    fn small_jump_is_solved_in_every_seed() {
        let params = GaParams::new(20, 2, 8, 0.5, 1.0, 0).unwrap();
        for seed in 0..100 {
            let mut rng = make_rng(seed, 0);
            let pop = Population::init_uniform(&params, &mut rng);
            let res = run(
                pop,
                &params,
                &[
                    StopCondition::OptimumFound,
                    StopCondition::MaxIterations(10_000_000),
                ],
                &mut rng,
                &mut NoTelemetry,
            )
            .unwrap();
            assert_eq!(res.stop_reason, StopReason::OptimumFound, "seed {seed}");
            assert_eq!(res.evaluations, 8 + res.iterations);
            assert!(res.population.contains_optimum());
        }
    }

    #[test]
    fn plateau_stop_and_cap() {
        let params = GaParams::new(30, 3, 5, 0.5, 1.0, 0).unwrap();
        let mut rng = make_rng(8, 0);
        let pop = Population::init_uniform(&params, &mut rng);
        let res = run(
            pop,
            &params,
            &[
                StopCondition::FullPopulationOnPlateauOrOptimum,
                StopCondition::MaxIterations(1_000_000),
            ],
            &mut rng,
            &mut NoTelemetry,
        )
        .unwrap();
        assert!(res.population.all_at_least_plateau());
        assert!(res.converged());

        let pop = Population::init_uniform(&params, &mut rng);
        let res = run(
            pop,
            &params,
            &[StopCondition::MaxIterations(17)],
            &mut rng,
            &mut NoTelemetry,
        )
        .unwrap();
        assert_eq!(res.iterations, 17);
        assert_eq!(res.stop_reason, StopReason::MaxIterations);
        assert!(!res.converged());
    }

    #[test]
    fn invariants_along_a_run() {
        let params = GaParams::new(40, 3, 10, 0.6, 1.0, 0).unwrap();
        let mut rng = make_rng(21, 0);
        let pop = Population::init_uniform(&params, &mut rng);
        let mut rec = Recorder {
            traces: Vec::new(),
            snapshots: Vec::new(),
            stride: 1,
        };
        let res = run(
            pop.clone(),
            &params,
            &[StopCondition::MaxIterations(3000)],
            &mut rng,
            &mut rec,
        )
        .unwrap();

        let replayed = {
            let mut rng = make_rng(21, 0);
            let _ = Population::init_uniform(&params, &mut rng);
            let mut rec2 = Recorder {
                traces: Vec::new(),
                snapshots: Vec::new(),
                stride: 1,
            };
            run(
                pop.clone(),
                &params,
                &[StopCondition::MaxIterations(3000)],
                &mut rng,
                &mut rec2,
            )
            .unwrap();
            rec2.traces
        };
        assert_eq!(rec.traces, replayed, "replay determinism");

        let mut cur = pop;
        let mut was_plateau = false;
        for tr in &rec.traces {
            assert_eq!(tr.parents.len() == 2, tr.event.used_crossover());
            let worst = cur.min_fitness().min(tr.offspring_fitness);
            let removed_f = if tr.removed_index == cur.mu() {
                tr.offspring_fitness
            } else {
                cur.fitness()[tr.removed_index]
            };
            assert_eq!(removed_f, worst);
            let before_max = cur.max_fitness();
            let before_census = census(&cur);
            crate::ga::commit(&mut cur, tr);
            assert_eq!(cur.mu(), 10);
            assert!(cur.check_fitness_cache());
            assert!(cur.max_fitness() >= before_max);
            let after_census = census(&cur);
            for (g, &c) in before_census.classes() {
                let c2 = after_census.count(g);
                assert!((c as i64 - c2 as i64).abs() <= 1);
            }
            if was_plateau {
                assert!(cur.all_at_least_plateau());
            }
            was_plateau = cur.all_at_least_plateau();
        }
        assert_eq!(cur, res.population);
        assert_eq!(rec.snapshots.len() as u64, 3000);
    }

    #[test]
    fn snapshot_stride_is_respected() {
        let params = GaParams::new(20, 2, 70, 0.5, 1.0, 0).unwrap();
        let mut rng = make_rng(0, 0);
        let pop = Population::init_uniform(&params, &mut rng);
        let mut rec = Recorder {
            traces: Vec::new(),
            snapshots: Vec::new(),
            stride: default_stride(70),
        };
        run(
            pop,
            &params,
            &[StopCondition::MaxIterations(95)],
            &mut rng,
            &mut rec,
        )
        .unwrap();
        assert_eq!(rec.snapshots, vec![0, 10, 20, 30, 40, 50, 60, 70, 80, 90]);
    }
}
