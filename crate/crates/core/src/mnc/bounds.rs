//! Two-sided bounds on the Hausdorff measure of noncompactness of a cloud.
//!
//! A finite cloud always has a finite ε-net for every ε, so its measure is 0
//! and the only informative bounds come from capping the number of centers:
//! `α_K(M) = inf{ε : M has an ε-net in E with at most K centers}`. With
//! [`NetBudget::Unbounded`] the bounds reduce to the finite-set case.

use serde::{Deserialize, Serialize};

use super::net::{farthest_first, NetCertificate};
use super::MncError;
use crate::metric::FNormMetric;
use crate::space::{PointCloud, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetBudget {
    Unbounded,
    Centers(usize),
}

impl NetBudget {
    pub fn allows(self, count: usize) -> bool {
        match self {
            NetBudget::Unbounded => true,
            NetBudget::Centers(k) => count <= k,
        }
    }
}

/// A strictly decreasing list of positive radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct EpsGrid(Vec<f64>);

impl EpsGrid {
    pub fn new(values: Vec<f64>) -> Result<Self, MncError> {
        if values.is_empty()
            || values.iter().any(|e| !(e.is_finite() && *e > 0.0))
            || values.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(MncError::EpsGrid(values));
        }
        Ok(EpsGrid(values))
    }

    /// `count` values `max, max·(count−1)/count, …, max/count`.
    pub fn uniform(max: f64, count: usize) -> Self {
        Self::new((0..count).map(|i| max * (count - i) as f64 / count as f64).collect())
            .expect("uniform grid is decreasing")
    }

    /// `count` values `start · ratio^i`.
    pub fn geometric(start: f64, ratio: f64, count: usize) -> Self {
        assert!(ratio > 0.0 && ratio < 1.0);
        Self::new((0..count).map(|i| start * ratio.powi(i as i32)).collect())
            .expect("geometric grid is decreasing")
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn finest(&self) -> f64 {
        *self.0.last().expect("grid is nonempty")
    }

    /// Largest gap between consecutive values, counting the gap from the
    /// finest value down to 0.
    pub fn resolution(&self) -> f64 {
        self.0
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(self.finest(), f64::max)
    }

    /// Least grid value `>= x`, or `None` when `x` exceeds the coarsest.
    pub fn round_up(&self, x: f64) -> Option<f64> {
        self.0.iter().rev().copied().find(|&e| e >= x)
    }

    /// Largest grid value `<= x`, or 0.
    pub fn round_down(&self, x: f64) -> f64 {
        self.0.iter().copied().find(|&e| e <= x).unwrap_or(0.0)
    }

    /// Distance from grid value `e` down to the next smaller one (or to 0).
    pub fn step_below(&self, e: f64) -> f64 {
        match self.0.iter().position(|&v| v == e) {
            Some(i) if i + 1 < self.0.len() => e - self.0[i + 1],
            _ => e,
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self::new(self.0.iter().map(|e| lambda * e).collect()).expect("positive scale")
    }
}

/// Bounds `lower <= α_K(M) <= upper` with the witnesses that prove them.
///
/// `upper_exact` is the covering radius of `net`; `lower_exact` is half the
/// smallest pairwise distance inside `packing`, which holds `K + 1` points of
/// `M` (two of them must share a center of any `K`-center net). `upper` and
/// `lower` are those values rounded outward onto the ε grid; `upper` is
/// `None` when no grid value is large enough.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaBounds {
    pub budget: NetBudget,
    pub lower: f64,
    pub upper: Option<f64>,
    pub lower_exact: f64,
    pub upper_exact: f64,
    pub resolution: f64,
    pub eps_grid: EpsGrid,
    pub net: NetCertificate,
    pub packing: PointCloud,
}

impl AlphaBounds {
    /// `upper`, with `+inf` for the sentinel.
    pub fn upper_or_inf(&self) -> f64 {
        self.upper.unwrap_or(f64::INFINITY)
    }

    fn requantize(&mut self) {
        self.upper = self.eps_grid.round_up(self.upper_exact);
        self.lower = self.eps_grid.round_down(self.lower_exact);
        if let Some(u) = self.upper {
            self.net.eps = u;
            self.net.complete = self.net.radius() <= u;
        }
    }

    /// Replaces the upper witness when `centers` cover `cloud` more tightly
    /// within the budget.
    pub fn offer_centers(&mut self, metric: &FNormMetric, cloud: &PointCloud, centers: PointCloud) -> bool {
        if !self.budget.allows(centers.len()) || (centers.is_empty() && !cloud.is_empty()) {
            return false;
        }
        let net = NetCertificate::cover(metric, cloud, centers, self.net.eps);
        if net.radius() < self.upper_exact {
            self.upper_exact = net.radius();
            self.net = net;
            self.requantize();
            return true;
        }
        false
    }

    /// Replaces the lower witness when `witness` (points of `cloud`) is more
    /// widely spread. Returns an error if a witness point is not in `cloud`.
    pub fn offer_packing(&mut self, metric: &FNormMetric, cloud: &PointCloud, witness: PointCloud) -> Result<bool, MncError> {
        let NetBudget::Centers(k) = self.budget else {
            return Ok(false);
        };
        if witness.len() != k + 1 {
            return Ok(false);
        }
        if let Some(p) = witness.iter().find(|w| !cloud.iter().any(|p| p == *w)) {
            return Err(MncError::Certificate(format!("packing witness {:?} is not a cloud point", p.coords())));
        }
        let half = min_pairwise(metric, witness.points()) / 2.0;
        if half > self.lower_exact {
            self.lower_exact = half;
            self.packing = witness;
            self.requantize();
            return Ok(true);
        }
        Ok(false)
    }

    /// Re-checks both witnesses against `cloud`.
    pub fn verify(&self, metric: &FNormMetric, cloud: &PointCloud) -> Result<(), MncError> {
        self.net.verify(metric, cloud)?;
        if !self.budget.allows(self.net.len()) {
            return Err(MncError::Certificate(format!("net has {} centers, over budget", self.net.len())));
        }
        if self.net.radius() != self.upper_exact {
            return Err(MncError::Certificate("net radius differs from the recorded upper bound".into()));
        }
        if self.lower_exact > 0.0 {
            let NetBudget::Centers(k) = self.budget else {
                return Err(MncError::Certificate("positive lower bound without a center budget".into()));
            };
            if self.packing.len() != k + 1 || min_pairwise(metric, self.packing.points()) / 2.0 != self.lower_exact {
                return Err(MncError::Certificate("packing does not certify the lower bound".into()));
            }
        }
        if self.lower > self.upper_or_inf() {
            return Err(MncError::Certificate("lower bound exceeds upper bound".into()));
        }
        Ok(())
    }
}

pub(crate) fn min_pairwise(metric: &FNormMetric, points: &[Vector]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(metric.dist(a, b));
        }
    }
    best
}

fn cluster_radius(metric: &FNormMetric, center: &Vector, members: &[&Vector]) -> f64 {
    members.iter().fold(0.0, |acc: f64, p| acc.max(metric.dist(center, p)))
}

fn bbox_midpoint(members: &[&Vector]) -> Vector {
    let dim = members[0].dim();
    let coords = (0..dim)
        .map(|i| {
            let (lo, hi) = members
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.coords()[i]), hi.max(p.coords()[i])));
            0.5 * (lo + hi)
        })
        .collect();
    Vector::from_raw(coords)
}

/// Farthest-first seeding, then alternate nearest-center assignment with
/// moving each center to its cluster's bounding-box midpoint when that
/// shrinks the cluster radius.
fn k_center(metric: &FNormMetric, cloud: &PointCloud, k: usize) -> PointCloud {
    let label = format!("{k}-center");
    if cloud.len() <= k {
        return cloud.clone().with_label(label);
    }
    let first = farthest_first(metric, cloud, 0, 2, |_| false);
    let starts = if first.len() == 2 { vec![0, first[1]] } else { vec![0] };
    let mut best: Option<(f64, Vec<Vector>)> = None;
    for start in starts {
        let seeds = farthest_first(metric, cloud, start, k, |_| false);
        let mut centers: Vec<Vector> = seeds.iter().map(|&i| cloud.get(i).clone()).collect();
        let mut radius = f64::INFINITY;
        for _ in 0..32 {
            let owner: Vec<usize> = cloud
                .iter()
                .map(|p| nearest_index(metric, &centers, p))
                .collect();
            for (j, c) in centers.iter_mut().enumerate() {
                let members: Vec<&Vector> = cloud.iter().zip(&owner).filter(|(_, &o)| o == j).map(|(p, _)| p).collect();
                if members.is_empty() {
                    continue;
                }
                let mid = bbox_midpoint(&members);
                if cluster_radius(metric, &mid, &members) < cluster_radius(metric, c, &members) {
                    *c = mid;
                }
            }
            let r = cover_radius(metric, cloud, &centers);
            if r >= radius {
                break;
            }
            radius = r;
        }
        if best.as_ref().is_none_or(|(b, _)| radius < *b) {
            best = Some((radius, centers));
        }
    }
    let (_, centers) = best.expect("at least one start");
    PointCloud::from_points_unchecked(centers, cloud.dim(), label)
}

fn nearest_index(metric: &FNormMetric, centers: &[Vector], p: &Vector) -> usize {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let d = metric.dist(c, p);
        if d < best.1 {
            best = (j, d);
        }
    }
    best.0
}

fn cover_radius(metric: &FNormMetric, cloud: &PointCloud, centers: &[Vector]) -> f64 {
    cloud.iter().fold(0.0, |acc: f64, p| {
        acc.max(centers.iter().map(|c| metric.dist(c, p)).fold(f64::INFINITY, f64::min))
    })
}

/// `size` points of `cloud` spread by farthest-first insertion from the
/// diameter pair; the diameter pair itself when `size == 2`.
fn dispersion(metric: &FNormMetric, cloud: &PointCloud, size: usize) -> Vec<usize> {
    let n = cloud.len();
    let (mut a, mut b, mut diam) = (0, 0, f64::NEG_INFINITY);
    for i in 0..n {
        for j in i + 1..n {
            let d = metric.dist(cloud.get(i), cloud.get(j));
            if d > diam {
                (a, b, diam) = (i, j, d);
            }
        }
    }
    let mut chosen = vec![a, b];
    let mut gap: Vec<f64> = cloud
        .iter()
        .map(|p| metric.dist(cloud.get(a), p).min(metric.dist(cloud.get(b), p)))
        .collect();
    while chosen.len() < size {
        let (far, _) = gap
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        chosen.push(far);
        for (g, p) in gap.iter_mut().zip(cloud) {
            *g = g.min(metric.dist(cloud.get(far), p));
        }
    }
    chosen
}

/// `alpha_bounds`.
pub fn alpha_bounds(
    metric: &FNormMetric,
    cloud: &PointCloud,
    grid: &EpsGrid,
    budget: NetBudget,
) -> Result<AlphaBounds, MncError> {
    let empty = || PointCloud::empty(cloud.dim(), "packing");
    let mut bounds = match budget {
        NetBudget::Unbounded => {
            let mut net = None;
            for &eps in grid.values().iter().rev() {
                let candidate = super::net::greedy_net(metric, cloud, eps)?;
                if candidate.complete {
                    net = Some(candidate);
                    break;
                }
            }
            let net = net.unwrap_or(super::net::greedy_net(metric, cloud, grid.values()[0])?);
            AlphaBounds {
                budget,
                lower: 0.0,
                upper: None,
                lower_exact: 0.0,
                upper_exact: net.radius(),
                resolution: grid.resolution(),
                eps_grid: grid.clone(),
                net,
                packing: empty(),
            }
        }
        NetBudget::Centers(k) => {
            if k == 0 {
                return Err(MncError::Budget);
            }
            let centers = k_center(metric, cloud, k);
            let net = NetCertificate::cover(metric, cloud, centers, grid.values()[0]);
            let (lower_exact, packing) = if cloud.len() > k {
                let idx = dispersion(metric, cloud, k + 1);
                let pts: Vec<Vector> = idx.iter().map(|&i| cloud.get(i).clone()).collect();
                let half = min_pairwise(metric, &pts) / 2.0;
                (half, PointCloud::from_points_unchecked(pts, cloud.dim(), "packing".into()))
            } else {
                (0.0, empty())
            };
            AlphaBounds {
                budget,
                lower: 0.0,
                upper: None,
                lower_exact,
                upper_exact: net.radius(),
                resolution: grid.resolution(),
                eps_grid: grid.clone(),
                net,
                packing,
            }
        }
    };
    bounds.requantize();
    Ok(bounds)
}
