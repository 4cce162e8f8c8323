//! The planar min-norm scenario program used as a test bed for the bounds:
//! random half-plane constraints, a consistent decision rule, a norm-based
//! discard rule, closed-form risks and a Monte Carlo harness.

mod distribution;
mod geometry;
mod monte_carlo;

pub use distribution::{exact_risk, sample_constraint, Distribution};
pub use geometry::{
    discard_select, solve_min_norm, support_set, HalfPlaneConstraint, Vec2, DEGENERACY_TOL,
    FEASIBILITY_TOL,
};
pub use monte_carlo::{
    binomial_upper_limit, run_monte_carlo, run_trial, run_trials, MonteCarloReport, ProblemConfig,
    TrialOutcome,
};
