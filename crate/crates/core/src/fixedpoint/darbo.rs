//! Darbo-type iteration `M_{n+1} = thin(co F(M_n))` followed by plain point
//! iteration from the barycenter of the last set.

use serde::Serialize;

use super::character::estimate_upper_char;
use super::operator::{Operator, OperatorSpec};
use super::FixedPointError;
use crate::convexity::{diameter, HullGrid};
use crate::metric::FNormMetric;
use crate::mnc::{alpha_bounds, AlphaBounds, EpsGrid, NetBudget};
use crate::space::{PointCloud, Vector};
use crate::tolerances::{DEFAULT_HULL_BUDGET, LP_BAND};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DarboConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Hull-grid resolution used to resample `co F(M_n)`.
    pub resolution: usize,
    /// Farthest-point thinning target; `0` keeps `|M0|`.
    pub cloud_size: usize,
    pub budget: usize,
    /// Cap on the extraction phase.
    pub max_plain_steps: usize,
}

impl Default for DarboConfig {
    fn default() -> Self {
        DarboConfig {
            tol: 1e-6,
            max_iter: 60,
            resolution: 2,
            cloud_size: 0,
            budget: DEFAULT_HULL_BUDGET,
            max_plain_steps: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DarboStep {
    pub n: usize,
    pub cloud_size: usize,
    pub bounds: AlphaBounds,
    pub diameter: f64,
    /// Quantization slack of `bounds.upper` on the ε grid.
    pub grid_gap: f64,
    /// Largest distance from a point of this set to the hull of the previous
    /// one; reported, not asserted.
    pub nesting_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DarboTrace {
    pub config: DarboConfig,
    pub gamma_hat: f64,
    /// Largest distance from a point of `F(M0)` to `co(M0)`.
    pub invariance_margin: f64,
    pub iterations: Vec<DarboStep>,
    pub converged: bool,
    pub plain_steps: usize,
    pub x_star: Vector,
    pub residual: f64,
}

impl DarboTrace {
    /// `d(x*, F(x*))` evaluated afresh.
    pub fn recompute_residual(&self, metric: &FNormMetric, op: &OperatorSpec) -> Result<f64, FixedPointError> {
        let fx = op.compile()?.apply(&self.x_star)?;
        Ok(metric.dist(&self.x_star, &fx))
    }

    /// Worst `upper_{n+1} − (ratio·upper_n + grid_gap_{n+1})`.
    pub fn decay_margin(&self, ratio: f64) -> f64 {
        self.iterations
            .windows(2)
            .map(|w| w[1].bounds.upper_or_inf() - (ratio * w[0].bounds.upper_or_inf() + w[1].grid_gap))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn thin(metric: &FNormMetric, cloud: &PointCloud, size: usize) -> PointCloud {
    if cloud.len() <= size {
        return cloud.clone();
    }
    let idx = crate::mnc::net::farthest_first(metric, cloud, 0, size, |d| d == 0.0);
    PointCloud::from_points_unchecked(idx.iter().map(|&i| cloud.get(i).clone()).collect(), cloud.dim(), "thinned".into())
}

fn max_hull_distance(metric: &FNormMetric, generators: &PointCloud, points: &PointCloud) -> Result<f64, FixedPointError> {
    let mut worst = 0.0f64;
    for p in points.iter() {
        worst = worst.max(metric.distance_to_hull(generators.points(), p)?);
    }
    Ok(worst)
}

fn step(
    metric: &FNormMetric,
    cloud: &PointCloud,
    n: usize,
    grid: &EpsGrid,
    nesting_distance: Option<f64>,
) -> Result<DarboStep, FixedPointError> {
    let bounds = alpha_bounds(metric, cloud, grid, NetBudget::Centers(1))?;
    let upper = bounds.upper_or_inf();
    Ok(DarboStep {
        n,
        cloud_size: cloud.len(),
        grid_gap: upper - grid.step_below(upper),
        diameter: diameter(metric, cloud),
        bounds,
        nesting_distance,
    })
}

fn plain_iteration(metric: &FNormMetric, f: &Operator, start: Vector, tol: f64, max_steps: usize) -> Result<(Vector, usize), FixedPointError> {
    let mut x = start;
    for k in 0..max_steps {
        let fx = f.apply(&x)?;
        if metric.dist(&x, &fx) < tol {
            return Ok((x, k));
        }
        x = fx;
    }
    Ok((x, max_steps))
}

/// `darbo_solve` for a gauge-mode metric.
pub fn darbo_solve(
    metric: &FNormMetric,
    op: &OperatorSpec,
    m0: &PointCloud,
    config: &DarboConfig,
) -> Result<DarboTrace, FixedPointError> {
    let f = op.compile()?;
    if m0.dim() != f.dim() {
        return Err(FixedPointError::DimensionMismatch { expected: f.dim(), found: m0.dim() });
    }
    let image = f.apply_cloud(m0)?;
    let mut invariance_margin = 0.0f64;
    for (point, p) in image.iter().enumerate() {
        let distance = metric.distance_to_hull(m0.points(), p)?;
        if distance > LP_BAND {
            return Err(FixedPointError::Invariance { point, distance });
        }
        invariance_margin = invariance_margin.max(distance);
    }

    let diam0 = diameter(metric, m0);
    let top = 2.0 * diam0.max(config.tol);
    let levels = (8.0 * (top / (config.tol * 1e-3)).log2()).ceil() as usize;
    let grid = EpsGrid::geometric(top, 0.5f64.powf(0.125), levels.max(8));
    let gamma_hat = match estimate_upper_char(metric, op, std::slice::from_ref(m0), &grid) {
        Ok(e) => e.gamma,
        Err(FixedPointError::NoTrials) => 0.0,
        Err(e) => return Err(e),
    };
    if gamma_hat >= 1.0 {
        return Err(FixedPointError::NotContractive(gamma_hat));
    }

    let size = if config.cloud_size == 0 { m0.len() } else { config.cloud_size };
    let mut current = m0.clone();
    let mut iterations = vec![step(metric, &current, 0, &grid, None)?];
    let mut converged = iterations[0].diameter < config.tol;
    let mut n = 0;
    while !converged && n < config.max_iter {
        n += 1;
        let image = f.apply_cloud(&current)?;
        let hull = HullGrid::new(&image, config.resolution, config.budget)?;
        let next = thin(metric, &hull.cloud, size).with_label(format!("M{n}"));
        let nesting = max_hull_distance(metric, &current, &next)?;
        let s = step(metric, &next, n, &grid, Some(nesting))?;
        converged = s.diameter < config.tol;
        iterations.push(s);
        current = next;
    }

    let start = current.barycenter().expect("iterates are nonempty");
    let (x_star, plain_steps) = plain_iteration(metric, &f, start, config.tol, config.max_plain_steps)?;
    let residual = metric.dist(&x_star, &f.apply(&x_star)?);
    Ok(DarboTrace {
        config: config.clone(),
        gamma_hat,
        invariance_margin,
        iterations,
        converged: converged && residual < config.tol,
        plain_steps,
        x_star,
        residual,
    })
}
