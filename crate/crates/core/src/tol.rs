//! Numeric tolerances and iteration limits used across the crate.
//!
//! All comparisons use absolute tolerances, chosen for double precision at
//! the scale of the shipped examples (distances and translation lengths of
//! order 1 to 10). Each constant documents the operation class it guards.

/// Default absolute tolerance for user-facing comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Residual allowed on determinants after projective normalization.
pub const DET_TOL: f64 = 1e-12;

/// Trace threshold separating elliptic, parabolic and hyperbolic classes.
pub const CLASS_TOL: f64 = 1e-10;

/// Relative threshold on quadratic discriminants (line classification).
pub const DISC_TOL: f64 = 1e-10;

/// Below this parameter size, `exp` and `log` switch to power series.
pub const SERIES_EPS: f64 = 1e-4;

/// Contraction solvers stop once the iteration step falls below this.
pub const SOLVER_TOL: f64 = 1e-10;

/// Iteration cap for contraction solvers.
pub const SOLVER_MAX_ITERS: usize = 10_000;

/// Longest word the enumeration utilities will produce.
pub const MAX_WORD_LEN: usize = 64;
