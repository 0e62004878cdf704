//! Numeric tolerances used across the crate, each with its origin.

/// Relative tolerance for cross-oracle equivalence (Ryser vs naive
/// permanent, DP vs naive Hamiltonian permanent, determinant vs Prüfer
/// enumeration, trace power vs walk enumeration).
///
/// Enumerated sums use compensated accumulation, so the error budget is
/// dominated by the per-term product rounding, well below this.
pub const REL_ORACLE: f64 = 1e-9;

/// Relative slack for comparisons that are mathematically exact identities
/// (Euler's formula, normalization sums, factor bookkeeping) but travel
/// through a handful of f64 operations.
pub const REL_IDENTITY: f64 = 1e-12;

/// Relative slack applied to the exact inequality suites (cycle-cap mass,
/// Lipschitz condition on measures, moment bounds). The inequalities hold
/// with real margin or exact equality; this absorbs accumulation-order
/// differences between the two sides.
pub const REL_INEQUALITY: f64 = 1e-9;

/// Tolerance on the total mass of a materialized probability measure.
pub const PROB_SUM: f64 = 1e-9;

/// Absolute log-domain margin for separation-threshold comparisons.
/// Comparisons within this margin are treated as ties and the verdict
/// falls back to `Inconclusive`.
pub const SEPARATOR_LOG_MARGIN: f64 = 1e-9;

/// Default Sinkhorn convergence tolerance: every row and column sum of the
/// scaled matrix within this distance of 1.
pub const SINKHORN_TOL: f64 = 1e-8;

/// Default Sinkhorn iteration budget. Strictly positive δ-bounded matrices
/// converge linearly and use a small fraction of this.
pub const SINKHORN_MAX_ITER: usize = 10_000;
