use std::ops::ControlFlow;

use serde::Serialize;

use crate::diversity::hamming_histogram;
use crate::error::{invalid, Result};
use crate::ga::{default_stride, run, Population, StepTrace, StopCondition, StopReason, Telemetry};
use crate::params::GaParams;
use crate::rng::make_rng;

#[derive(Debug, Clone, Serialize)]
pub struct Figure1Config {
    pub params: GaParams,
    /// Iterations between snapshots; defaults to [`default_stride`].
    pub stride: Option<u64>,
    /// Safety cap; the run normally ends when the optimum is created.
    pub max_iterations: u64,
    /// Index of the run under the same seed; selects the random stream.
    pub run: u64,
}

/// Relative frequencies of the even pairwise distances `0, 2, …, 2k` over
/// one run, one row per snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1Series {
    pub k: usize,
    pub iterations: Vec<u64>,
    /// Row-major, `k + 1` columns.
    pub frequencies: Vec<f64>,
    /// Length of the run.
    pub total_iterations: u64,
    pub optimum_found: bool,
    /// Snapshots with an odd or out-of-range distance, or a changed pair count.
    pub invariant_violations: u64,
}

impl Figure1Series {
    pub fn empty(k: usize) -> Self {
        Self {
            k,
            iterations: Vec::new(),
            frequencies: Vec::new(),
            total_iterations: 0,
            optimum_found: false,
            invariant_violations: 0,
        }
    }

    pub fn columns(&self) -> usize {
        self.k + 1
    }

    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.columns();
        &self.frequencies[i * c..(i + 1) * c]
    }

    pub fn push(&mut self, iteration: u64, row: &[f64]) {
        assert_eq!(row.len(), self.columns());
        self.iterations.push(iteration);
        self.frequencies.extend_from_slice(row);
    }

    /// First snapshot iteration at which distance `d` has frequency above
    /// `level`.
    pub fn first_passage(&self, d: usize, level: f64) -> Option<u64> {
        if d % 2 == 1 || d / 2 > self.k {
            return None;
        }
        (0..self.len())
            .find(|&i| self.row(i)[d / 2] > level)
            .map(|i| self.iterations[i])
    }

    /// Distance 0 drops below `low` within the first `window` fraction of
    /// the run and stays below `ceiling` afterwards.
    pub fn zero_distance_collapses(&self, low: f64, window: f64, ceiling: f64) -> bool {
        let limit = window * self.total_iterations as f64;
        let Some(first) = (0..self.len()).find(|&i| self.row(i)[0] < low) else {
            return false;
        };
        self.iterations[first] as f64 <= limit
            && (first..self.len()).all(|i| self.row(i)[0] < ceiling)
    }

    /// The given distances first exceed `level` in strictly increasing order.
    pub fn emerges_in_order(&self, distances: &[usize], level: f64) -> bool {
        let mut prev: Option<u64> = None;
        for &d in distances {
            let Some(t) = self.first_passage(d, level) else {
                return false;
            };
            if prev.is_some_and(|p| p >= t) {
                return false;
            }
            prev = Some(t);
        }
        true
    }
}

struct Recorder {
    stride: u64,
    series: Figure1Series,
    pairs: u64,
    changed: bool,
    last: Vec<f64>,
}

impl Telemetry for Recorder {
    fn stride(&self) -> u64 {
        self.stride
    }

    fn on_step(&mut self, before: &Population, trace: &StepTrace) -> ControlFlow<()> {
        self.changed |= !trace.offspring_rejected(before.mu());
        ControlFlow::Continue(())
    }

    fn snapshot(&mut self, pop: &Population) -> ControlFlow<()> {
        if self.changed || self.last.is_empty() {
            let h = hamming_histogram(pop);
            let k = self.series.k;
            let odd_or_far = h.has_odd_distance() || h.max_distance().is_some_and(|d| d > 2 * k);
            if odd_or_far || h.total_pairs() != self.pairs {
                self.series.invariant_violations += 1;
            }
            self.last = h.even_relative(k);
            self.changed = false;
        }
        self.series.push(pop.generation(), &self.last);
        ControlFlow::Continue(())
    }
}

/// One run from a monomorphic plateau population until the optimum is
/// created, sampling the distance histogram every `stride` iterations.
/// The population containing the optimum is not sampled.
pub fn run_figure1(config: &Figure1Config) -> Result<Figure1Series> {
    let params = config.params;
    params.validate()?;
    if config.max_iterations == 0 {
        return Err(invalid("max_iterations", 0, "a positive limit"));
    }
    let mut rng = make_rng(params.seed, config.run);
    let pop = Population::init_monomorphic_plateau(&params, &mut rng);
    let mu = params.mu as u64;
    let mut rec = Recorder {
        stride: config
            .stride
            .unwrap_or_else(|| default_stride(params.mu))
            .max(1),
        series: Figure1Series::empty(params.k),
        pairs: mu * (mu - 1) / 2,
        changed: false,
        last: Vec::new(),
    };
    let stops = [
        StopCondition::OptimumFound,
        StopCondition::MaxIterations(config.max_iterations),
    ];
    let result = run(pop, &params, &stops, &mut rng, &mut rec)?;
    let mut series = rec.series;
    series.total_iterations = result.iterations;
    series.optimum_found = result.stop_reason == StopReason::OptimumFound;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(seed: u64) -> Figure1Config {
        Figure1Config {
            params: GaParams::new(40, 3, 10, 1.0, 1.0, seed).unwrap(),
            stride: None,
            max_iterations: 5_000_000,
            run: 0,
        }
    }

    #[test]
    fn starts_at_distance_zero_and_rows_sum_to_one() {
        let s = run_figure1(&config(1)).unwrap();
        assert!(s.optimum_found);
        assert_eq!(s.iterations[0], 0);
        assert_eq!(s.row(0), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.invariant_violations, 0);
        assert_eq!(s.len() as u64, s.total_iterations);
        for i in 0..s.len() {
            assert!((s.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert_eq!(s, run_figure1(&config(1)).unwrap());
    }

    #[test]
    fn stride_thins_snapshots() {
        let mut c = config(2);
        c.stride = Some(7);
        let s = run_figure1(&c).unwrap();
        assert!(s.iterations.iter().all(|t| t % 7 == 0));
        assert_eq!(s.len() as u64, (s.total_iterations - 1) / 7 + 1);
    }

    #[test]
    fn shape_checks() {
        let mut s = Figure1Series::empty(2);
        s.total_iterations = 100;
        s.push(0, &[1.0, 0.0, 0.0]);
        s.push(5, &[0.5, 0.5, 0.0]);
        s.push(9, &[0.01, 0.6, 0.39]);
        s.push(50, &[0.1, 0.3, 0.6]);
        assert!(s.zero_distance_collapses(0.05, 0.1, 0.2));
        assert!(!s.zero_distance_collapses(0.05, 0.05, 0.2));
        assert!(!s.zero_distance_collapses(0.05, 0.1, 0.05));
        assert_eq!(s.first_passage(2, 0.1), Some(5));
        assert_eq!(s.first_passage(4, 0.1), Some(9));
        assert_eq!(s.first_passage(3, 0.1), None);
        assert!(s.emerges_in_order(&[2, 4], 0.1));
        assert!(!s.emerges_in_order(&[4, 2], 0.1));
        assert!(!s.emerges_in_order(&[2, 6], 0.1));
    }
}
