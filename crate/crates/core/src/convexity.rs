//! Affine convex structures `W(x, y, t) = t·x + (1 − t)·y` and its
//! three-point analogue, barycentric hull grids, and checks of stability and
//! of properties (P) and (Q).

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{FNormMetric, MetricError, MetricMode};
use crate::mnc::{greedy_net, MncError};
use crate::sampling::vector_of_size;
use crate::space::{PointCloud, Vector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvexityError {
    #[error("t = {0} is outside [0, 1]")]
    Parameter(f64),
    #[error("weights {0:?} are not a probability vector")]
    Weights(Vec<f64>),
    #[error("vectors of dimension {0} and {1} cannot be combined")]
    DimensionMismatch(usize, usize),
    #[error("hull grid needs a nonempty cloud and a positive resolution")]
    EmptyHull,
    #[error("hull grid of {points} generators at resolution {resolution} has {size} points, over the budget of {budget}")]
    Budget { points: usize, resolution: usize, size: u128, budget: usize },
    #[error("eps = {0} must be positive")]
    Eps(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Mnc(#[from] MncError),
}

/// Nonnegative weights summing to 1, renormalized on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BarycentricWeights(Vec<f64>);

impl BarycentricWeights {
    pub fn new(t: Vec<f64>) -> Result<Self, ConvexityError> {
        let sum: f64 = t.iter().sum();
        if t.is_empty() || t.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(ConvexityError::Weights(t));
        }
        Ok(BarycentricWeights(t.iter().map(|w| w / sum).collect()))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn same_dim(a: &Vector, b: &Vector) -> Result<(), ConvexityError> {
    if a.dim() != b.dim() {
        return Err(ConvexityError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// `w_combine`.
pub fn w_combine(x: &Vector, y: &Vector, t: f64) -> Result<Vector, ConvexityError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(ConvexityError::Parameter(t));
    }
    same_dim(x, y)?;
    Ok(Vector::combination(x.dim(), [(t, x), (1.0 - t, y)]))
}

/// `k_combine`.
pub fn k_combine(x: &Vector, y: &Vector, z: &Vector, weights: &BarycentricWeights) -> Result<Vector, ConvexityError> {
    let [a, b, c] = weights.values() else {
        return Err(ConvexityError::Weights(weights.values().to_vec()));
    };
    same_dim(x, y)?;
    same_dim(x, z)?;
    Ok(Vector::combination(x.dim(), [(*a, x), (*b, y), (*c, z)]))
}

/// `check_tcs`: `d(u, W(x, y, t)) − [t·d(u, x) + (1 − t)·d(u, y)]`.
pub fn check_tcs(metric: &FNormMetric, u: &Vector, x: &Vector, y: &Vector, t: f64) -> Result<f64, ConvexityError> {
    let w = w_combine(x, y, t)?;
    let lhs = metric.distance(u, &w)?;
    Ok(lhs - (t * metric.dist(u, x) + (1.0 - t) * metric.dist(u, y)))
}

/// `check_tmcs`: the three-point analogue of [`check_tcs`].
pub fn check_tmcs(
    metric: &FNormMetric,
    u: &Vector,
    x: &Vector,
    y: &Vector,
    z: &Vector,
    weights: &BarycentricWeights,
) -> Result<f64, ConvexityError> {
    let k = k_combine(x, y, z, weights)?;
    let lhs = metric.distance(u, &k)?;
    let t = weights.values();
    Ok(lhs - (t[0] * metric.dist(u, x) + t[1] * metric.dist(u, y) + t[2] * metric.dist(u, z)))
}

/// Number of points of a resolution-`r` grid over `n` generators,
/// `C(n + r − 1, r)`, saturating.
pub fn hull_grid_size(n: usize, r: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 1..=r as u128 {
        acc = acc.saturating_mul(n as u128 - 1 + i) / i;
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

/// The grid `{Σ (k_i/r)·x_i : k_i >= 0, Σ k_i = r}` with its integer
/// barycentric coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullGrid {
    pub generators: PointCloud,
    pub resolution: usize,
    pub coefficients: Vec<Vec<u32>>,
    pub cloud: PointCloud,
}

impl HullGrid {
    pub fn new(generators: &PointCloud, resolution: usize, budget: usize) -> Result<Self, ConvexityError> {
        let n = generators.len();
        if n == 0 || resolution == 0 {
            return Err(ConvexityError::EmptyHull);
        }
        let size = hull_grid_size(n, resolution);
        if size > budget as u128 {
            return Err(ConvexityError::Budget { points: n, resolution, size, budget });
        }
        let mut coefficients = Vec::with_capacity(size as usize);
        let mut current = vec![0u32; n];
        compositions(resolution as u32, 0, &mut current, &mut coefficients);
        let r = resolution as f64;
        let points = coefficients
            .iter()
            .map(|k| {
                Vector::combination(
                    generators.dim(),
                    k.iter().zip(generators).filter(|(c, _)| **c > 0).map(|(&c, g)| (c as f64 / r, g)),
                )
            })
            .collect();
        let cloud = PointCloud::from_points_unchecked(
            points,
            generators.dim(),
            format!("co({})@{resolution}", generators.label()),
        );
        Ok(HullGrid { generators: generators.clone(), resolution, coefficients, cloud })
    }

    /// Index of the grid point with integer coordinates `k`.
    pub fn index_of(&self, k: &[u32]) -> Option<usize> {
        self.coefficients.binary_search_by(|c| k.cmp(c)).ok()
    }

    /// Upper bound `diam · n / r` on the distance from any point of the
    /// true hull to the grid.
    pub fn grid_gap(&self, metric: &FNormMetric) -> f64 {
        let n = self.generators.len();
        if n < 2 {
            return 0.0;
        }
        diameter(metric, &self.generators) * n as f64 / self.resolution as f64
    }
}

/// Compositions of `remaining` into the slots `slot..` in decreasing
/// lexicographic order, so the first generator's vertex comes first.
fn compositions(remaining: u32, slot: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        out.push(current.clone());
        current[slot] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        current[slot] = k;
        compositions(remaining - k, slot + 1, current, out);
    }
    current[slot] = 0;
}

/// `hull_sample`.
pub fn hull_sample(points: &PointCloud, resolution: usize, budget: usize) -> Result<PointCloud, ConvexityError> {
    Ok(HullGrid::new(points, resolution, budget)?.cloud)
}

pub fn diameter(metric: &FNormMetric, cloud: &PointCloud) -> f64 {
    let mut best: f64 = 0.0;
    for (i, a) in cloud.iter().enumerate() {
        for b in &cloud.points()[i + 1..] {
            best = best.max(metric.dist(a, b));
        }
    }
    best
}

/// Outcome of a sampled inequality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub check: String,
    pub samples: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub witness: Option<Vec<Vec<f64>>>,
    pub params: BTreeMap<String, f64>,
}

impl PropertyReport {
    pub fn new(check: &str, tolerance: f64) -> Self {
        PropertyReport {
            check: check.to_owned(),
            samples: 0,
            max_violation: f64::NEG_INFINITY,
            tolerance,
            witness: None,
            params: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, violation: f64, witness: impl FnOnce() -> Vec<Vec<f64>>) {
        self.samples += 1;
        if violation > self.max_violation {
            self.max_violation = violation;
            self.witness = Some(witness());
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.max_violation <= self.tolerance
    }
}

fn needs_gauge(metric: &FNormMetric) -> Result<(), ConvexityError> {
    if metric.mode() != MetricMode::Gauge {
        return Err(MetricError::NoVBase.into());
    }
    Ok(())
}

/// A point of `C_r = {x : d(x, C) < r}` near a random grid point of `C`.
fn point_near(rng: &mut impl Rng, metric: &FNormMetric, grid: &PointCloud, r: f64) -> Vector {
    let q = grid.get(rng.gen_range(0..grid.len()));
    let size = r * rng.gen_range(0.0..1.0);
    let v = vector_of_size(rng, grid.dim(), size, |x| metric.dist(&Vector::zeros(x.dim()), x));
    q + &v
}

/// `check_stability`: combinations of points of `C_r` stay within `r` of the
/// convex set `C = co(generators)`.
///
/// The distance to `C` is the exact LP minimum over the hull; the minimum
/// over the grid points is reported next to it together with the grid gap,
/// which brackets it from above.
pub fn check_stability(
    metric: &FNormMetric,
    hull: &HullGrid,
    r: f64,
    samples: usize,
    tol: f64,
    rng: &mut impl Rng,
) -> Result<PropertyReport, ConvexityError> {
    needs_gauge(metric)?;
    let grid_gap = hull.grid_gap(metric);
    let mut report = PropertyReport::new("stability", tol).param("r", r).param("grid_gap", grid_gap);
    let mut bracket: f64 = 0.0;
    for s in 0..samples {
        let a = point_near(rng, metric, &hull.cloud, r);
        let b = point_near(rng, metric, &hull.cloud, r);
        let t = match s % 50 {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen_range(0.0..=1.0),
        };
        let w = w_combine(&a, &b, t)?;
        let exact = metric.distance_to_hull(hull.generators.points(), &w)?;
        let on_grid = hull.cloud.iter().map(|c| metric.dist(c, &w)).fold(f64::INFINITY, f64::min);
        bracket = bracket.max(exact - on_grid).max(on_grid - exact - grid_gap);
        report.record(exact - r, || vec![a.coords().to_vec(), b.coords().to_vec(), vec![t]]);
    }
    Ok(report.param("bracket_excess", bracket))
}

/// Both readings of property (P), one report each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyP {
    /// `d(W(x1,y1,t), W(x2,y2,t)) <= t·d(x1,y1) + (1−t)·d(x2,y2)`.
    pub printed: PropertyReport,
    /// `d(W(x1,y1,t), W(x2,y2,t)) <= t·d(x1,x2) + (1−t)·d(y1,y2)`.
    pub conventional: PropertyReport,
}

/// `check_property_P` on tuples `([x1, y1, x2, y2], t)`.
pub fn check_property_p(
    metric: &FNormMetric,
    tuples: &[([Vector; 4], f64)],
    tol: f64,
) -> Result<PropertyP, ConvexityError> {
    needs_gauge(metric)?;
    let mut printed = PropertyReport::new("property-p.printed", tol);
    let mut conventional = PropertyReport::new("property-p.conventional", tol);
    for ([x1, y1, x2, y2], t) in tuples {
        let t = *t;
        let lhs = metric.distance(&w_combine(x1, y1, t)?, &w_combine(x2, y2, t)?)?;
        let witness = || {
            let mut w: Vec<Vec<f64>> = [x1, y1, x2, y2].iter().map(|v| v.coords().to_vec()).collect();
            w.push(vec![t]);
            w
        };
        printed.record(lhs - (t * metric.dist(x1, y1) + (1.0 - t) * metric.dist(x2, y2)), witness);
        conventional.record(lhs - (t * metric.dist(x1, x2) + (1.0 - t) * metric.dist(y1, y2)), witness);
    }
    Ok(PropertyP { printed, conventional })
}

/// One ε of a property (Q) run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QLevel {
    pub eps: f64,
    pub resolution: usize,
    pub grid_gap: f64,
    pub net_size: usize,
    /// Covering radius of the net on the grid.
    pub net_radius: f64,
    /// `net_radius + grid_gap`, a covering radius for the whole hull.
    pub hull_radius: f64,
    pub passed: bool,
}

/// `check_property_Q`: for each ε, a finite net of `co(F)` with covering
/// radius at most ε, built as an ε/2-net of a grid whose gap is at most ε/2.
pub fn check_property_q(
    metric: &FNormMetric,
    f: &PointCloud,
    eps_list: &[f64],
    budget: usize,
) -> Result<Vec<QLevel>, ConvexityError> {
    let diam = diameter(metric, f);
    let n = f.len() as f64;
    eps_list
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(ConvexityError::Eps(eps));
            }
            let resolution = ((2.0 * diam * n / eps).ceil() as usize).max(1);
            let hull = HullGrid::new(f, resolution, budget)?;
            let grid_gap = hull.grid_gap(metric);
            let net = greedy_net(metric, &hull.cloud, eps / 2.0)?;
            net.verify(metric, &hull.cloud)?;
            let net_radius = net.radius();
            let hull_radius = net_radius + grid_gap;
            Ok(QLevel {
                eps,
                resolution,
                grid_gap,
                net_size: net.len(),
                net_radius,
                hull_radius,
                passed: net.complete && hull_radius <= eps,
            })
        })
        .collect()
}
