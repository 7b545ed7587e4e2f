//! Seeded experiment protocols.
//!
//! Every replicate or grid cell draws from its own stream
//! `make_rng(seed, index)`, and results are collected in index order, so
//! serial and parallel execution give identical output.

mod comparison;
mod figure1;
mod optimum;
mod stats;
mod survival;
mod sweep;
mod takeover;
mod transition;

pub use comparison::{
    run_comparison, run_replicates, ArmSummary, ComparisonConfig, ComparisonSummary, RunRecord,
};
pub use figure1::{run_figure1, Figure1Config, Figure1Series};
pub use optimum::{estimate_optimum_frequency, OptimumFrequency};
pub use stats::{mean, median, proportion_stderr, MIN_ACCEPTED};
pub use survival::{
    run_survival, SurvivalConfig, SurvivalPoint, SurvivalReplicate, SurvivalSummary,
};
pub use sweep::{
    default_sweep_ys, run_bound_sweep, FittedConstant, SweepCell, SweepConfig, SweepResult,
};
pub use takeover::{
    run_takeover, takeover_scale, TakeoverConfig, TakeoverOutcome, TakeoverReplicate,
    TakeoverSummary,
};
pub use transition::{
    estimate_drift, estimate_transition, plateau_pair, ConditionedEstimate, DriftEstimate,
    PopulationSpec,
};
