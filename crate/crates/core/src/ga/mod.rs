//! The (μ+1) GA: population state, the single-iteration step engine and the
//! run loop with stop conditions and telemetry hooks.

mod population;
mod run;
mod step;

pub use population::Population;
pub use run::{default_stride, run, NoTelemetry, RunResult, StopCondition, StopReason, Telemetry};
pub use step::{
    classify_event, commit, ga_step, propose, EventClass, Parents, StepEngine, StepTrace,
};
