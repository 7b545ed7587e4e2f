//! Closed-form bounds for the plateau dynamics and the exact per-bit oracle
//! for the probability of producing the optimum.
//!
//! All functions are pure. Suppressed `O(·)` constants are never invented:
//! evaluators that carry one return its unscaled expression separately.

mod bounds;
mod oracle;
mod report;

pub use bounds::{
    crossover_decrease_lower_bound, crossover_increase_leading_term, drift_tail_bound,
    mutation_transition_bounds, optimum_construction_bound, optimum_construction_bound_ln,
    runtime_bound, runtime_constant, survival_constant, survival_drift_parameters, survival_tail,
    BoundInputs, DriftParameters, LeadingTerm, MutationBounds, RuntimeBound,
};
pub use oracle::{exact_optimum_probability, exact_optimum_probability_ln, ParentOverlap};
pub use report::{BoundReport, Relation};
