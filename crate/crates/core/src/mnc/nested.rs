//! Decreasing families of closed sets and a probe for a common point.

use serde::Serialize;

use super::bounds::{alpha_bounds, EpsGrid, NetBudget};
use super::net::greedy_net;
use super::MncError;
use crate::convexity::diameter;
use crate::metric::FNormMetric;
use crate::space::{PointCloud, Vector};

/// `M_n = ⋃_{j=n..=levels} (anchor + 2^-j · base)` for `n` in `range`.
pub fn dyadic_family(
    base: &PointCloud,
    anchor: &Vector,
    range: std::ops::Range<u32>,
    levels: u32,
) -> Vec<PointCloud> {
    range
        .map(|n| {
            let mut points = Vec::new();
            for j in n..=levels {
                let s = 2f64.powi(-(j as i32));
                points.extend(base.iter().map(|p| anchor + &p.scale(s)));
            }
            PointCloud::from_points_unchecked(points, base.dim(), format!("M{n}"))
        })
        .collect()
}

fn gap_to(metric: &FNormMetric, set: &PointCloud, p: &Vector) -> f64 {
    set.iter().map(|q| metric.dist(p, q)).fold(f64::INFINITY, f64::min)
}

/// A family checked to be nonincreasing: every point of a set lies within
/// `tol` of the set before it.
#[derive(Debug, Clone, PartialEq)]
pub struct DecreasingFamily {
    sets: Vec<PointCloud>,
}

impl DecreasingFamily {
    pub fn new(metric: &FNormMetric, sets: Vec<PointCloud>, tol: f64) -> Result<Self, MncError> {
        if sets.is_empty() || sets.iter().any(PointCloud::is_empty) {
            return Err(MncError::EmptyFamily);
        }
        for set in 1..sets.len() {
            for (point, p) in sets[set].iter().enumerate() {
                let distance = gap_to(metric, &sets[set - 1], p);
                if distance > tol {
                    return Err(MncError::NotNested { set, point, distance });
                }
            }
        }
        Ok(DecreasingFamily { sets })
    }

    pub fn sets(&self) -> &[PointCloud] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub point: Vector,
    /// `max_n dist(point, M_n)`.
    pub max_distance: f64,
    pub success: bool,
    pub distances: Vec<f64>,
    /// One-center covering radius of each set.
    pub alpha_upper: Vec<f64>,
}

/// Looks for a point within `eps` of every set. Candidates are the centers
/// of an `eps`-net of the last set and the midpoint of its bounding box.
pub fn nested_intersection_probe(
    metric: &FNormMetric,
    family: &DecreasingFamily,
    eps: f64,
) -> Result<ProbeResult, MncError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(MncError::Eps(eps));
    }
    let last = family.sets.last().expect("family is nonempty");
    let mut candidates: Vec<Vector> = greedy_net(metric, last, eps)?.centers.points().to_vec();
    let dim = last.dim();
    let lo: Vec<f64> = (0..dim).map(|i| last.iter().map(|p| p.coords()[i]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..dim).map(|i| last.iter().map(|p| p.coords()[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
    candidates.push(Vector::from_raw(lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect()));

    let mut best: Option<(Vector, Vec<f64>, f64)> = None;
    for c in candidates {
        let distances: Vec<f64> = family.sets.iter().map(|s| gap_to(metric, s, &c)).collect();
        let worst = distances.iter().copied().fold(0.0, f64::max);
        if best.as_ref().is_none_or(|b| worst < b.2) {
            best = Some((c, distances, worst));
        }
    }
    let (point, distances, max_distance) = best.expect("at least one candidate");

    let top = diameter(metric, &family.sets[0]).max(eps);
    let grid = EpsGrid::geometric(2.0 * top, 0.5, 64);
    let alpha_upper = family
        .sets
        .iter()
        .map(|s| alpha_bounds(metric, s, &grid, NetBudget::Centers(1)).map(|b| b.upper_exact))
        .collect::<Result<_, _>>()?;
    Ok(ProbeResult { point, max_distance, success: max_distance <= eps, distances, alpha_upper })
}
