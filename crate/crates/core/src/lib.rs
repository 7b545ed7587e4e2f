//! Simulation and analysis toolkit for the steady-state (μ+1) genetic
//! algorithm on the Jump_k benchmark.
//!
//! * [`genotype`], [`fitness`], [`operators`]: packed bit strings, Jump_k and
//!   the two variation operators.
//! * [`ga`]: the step engine with event classification and trace recording.
//! * [`diversity`]: species census and pairwise Hamming-distance histograms.
//! * [`analysis`]: closed-form transition bounds, survival and runtime
//!   bounds, and the exact per-bit oracle for producing the optimum.
//! * [`experiments`]: seeded, repeatable protocols that confront the bounds
//!   with Monte Carlo estimates.
//!
//! All randomness flows from [`rng::make_rng`]: a run is a pure function of
//! its parameters, seed and stream index.

pub mod analysis;
pub mod diversity;
mod error;
pub mod experiments;
pub mod fitness;
pub mod ga;
pub mod genotype;
pub mod operators;
pub mod params;
pub mod rng;

pub use error::{Error, Result};
pub use fitness::{jump_fitness, Fitness};
pub use ga::{EventClass, Population, StepTrace, StopCondition};
pub use genotype::{hamming_distance, ones_count, Genotype};
pub use operators::{standard_bit_mutation, uniform_crossover};
pub use params::GaParams;
pub use rng::{make_rng, SimRng};
