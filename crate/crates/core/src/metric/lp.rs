//! The scaling defect of `d(x, y) = Σ |y_i − x_i|^p · Δ` for `p < 1`.

use serde::Serialize;

use super::MetricError;
use crate::space::{SpaceModel, SpaceParams, Vector};
use crate::tolerances::EXACT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpViolation {
    pub p: f64,
    pub lambda: f64,
    /// `d(x, y)`.
    pub distance: f64,
    /// `d(λx, λy)`, evaluated directly.
    pub lhs: f64,
    /// `λ^p · d(x, y)`, the closed form of `lhs`.
    pub lhs_closed_form: f64,
    /// `λ · d(x, y)`.
    pub rhs_strong: f64,
    /// `lhs − rhs_strong` exceeds the exact-arithmetic tolerance.
    pub violated: bool,
}

fn lp_distance(p: f64, step: f64, x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (b - a).abs().powf(p)).sum::<f64>() * step
}

/// `lp_counterexample` on an `lp-grid` space with `p ∈ (0, 1]`, `λ ∈ (0, 1]`.
pub fn lp_counterexample(
    space: &SpaceModel,
    lambda: f64,
    x: &Vector,
    y: &Vector,
) -> Result<LpViolation, MetricError> {
    let SpaceParams::LpGrid { p, step } = *space.params() else {
        return Err(MetricError::NotLpGrid);
    };
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(MetricError::Lambda(lambda));
    }
    space.check(x)?;
    space.check(y)?;
    if x == y {
        return Err(MetricError::EqualPoints);
    }
    let distance = lp_distance(p, step, x.coords(), y.coords());
    let lhs = lp_distance(p, step, x.scale(lambda).coords(), y.scale(lambda).coords());
    let rhs_strong = lambda * distance;
    Ok(LpViolation {
        p,
        lambda,
        distance,
        lhs,
        lhs_closed_form: lambda.powf(p) * distance,
        rhs_strong,
        violated: lhs - rhs_strong > EXACT,
    })
}

/// Indicator of the grid points `start..end`, scaled by `height`.
pub fn step_function(dim: usize, start: usize, end: usize, height: f64) -> Vector {
    let coords = (0..dim).map(|i| if (start..end).contains(&i) { height } else { 0.0 }).collect();
    Vector::new(coords).expect("finite height")
}
