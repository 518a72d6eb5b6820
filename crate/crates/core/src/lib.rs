//! Exact linear-time Euclidean projection onto the upper-bounded simplex and
//! the box-constrained L1 ball.
//!
//! * [`projection`]: the upper-bounded simplex solvers (linear-time and
//!   sort-based) and the threshold/budget helpers.
//! * [`box_l1`]: reduction of general box-constrained L1 projection to the
//!   simplex form and back.
//! * [`oracles`]: brute-force, grid, KKT and duality-gap checkers.
//! * [`pg`]: projected-gradient logistic regression on synthetic data.
//! * [`select`]: median-of-medians selection.
//! * [`sum`]: compensated summation.

pub mod box_l1;
pub mod error;
pub mod instances;
pub mod oracles;
pub mod pg;
pub mod projection;
pub mod select;
pub mod sum;

pub use box_l1::{
    canonicalize, project_box_l1, solve_box_l1, BoxL1Problem, BoxL1Solution, CanonicalTransform,
    CoordTransform, IntervalCase,
};
pub use error::{Error, Result};
pub use oracles::{brute_force_project, duality_gap, kkt_check, GapReport, KktReport};
pub use pg::{
    generate_synthetic, logistic_objective_grad, projected_gradient, LogisticDataset, PGConfig,
    PGTrace, StepSize,
};
pub use projection::{
    effective_bounds, project_ub_simplex_linear, project_ub_simplex_sorted, x_from_theta,
    z_of_theta, BreakKind, Breakpoint, Multipliers, ProjectionProblem, ProjectionResult,
    ThetaSearchState,
};
pub use select::select_kth;

/// Default absolute tolerance for agreement and feasibility checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance from the `BOXPROJ_TOL` environment variable, falling back to
/// [`DEFAULT_TOL`] when unset or unparsable.
pub fn tolerance_from_env() -> f64 {
    std::env::var("BOXPROJ_TOL")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| *t > 0.0 && t.is_finite())
        .unwrap_or(DEFAULT_TOL)
}
