//! Numeric tolerances shared by checks, audits and reports.

/// Claims that hold in exact arithmetic (homogeneity, translation, axioms).
pub const EXACT: f64 = 1e-12;

/// Agreement band between two LP-based or LP-vs-closed-form routes.
pub const LP_BAND: f64 = 1e-9;

/// Residual tolerance for convex-structure inequalities and stability.
pub const CONVEXITY: f64 = 1e-9;

/// Default cap on the number of points a barycentric hull grid may hold.
pub const DEFAULT_HULL_BUDGET: usize = 250_000;

/// Default depth `N_max` of the dyadic pseudonorm.
pub const DEFAULT_DEPTH: u32 = 8;

/// Largest supported depth: every `p_H` stays an exact `f64`.
pub const MAX_DEPTH: u32 = 52;

/// Quantization slack of the depth-`n` pseudonorm, `2^-n`.
pub fn dyadic_slack(depth: u32) -> f64 {
    (-(depth as f64)).exp2()
}
