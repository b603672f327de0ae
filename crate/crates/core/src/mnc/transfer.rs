//! From an η-net of `M` to an (η + ε)-net of its convex hull.
//!
//! A hull point `x = Σ (k_i/r)·m_i` is paired with `z = Σ (k_i/r)·c(i)`,
//! where `c(i)` is the center assigned to `m_i`. For a positively homogeneous
//! translation-invariant metric `d(x, z) <= Σ (k_i/r)·d(m_i, c(i)) <= η`, and
//! `z` is a point of the resolution-`r` grid over the centers. An ε-net of
//! that grid therefore covers the hull grid of `M` within `η + ε`.

use rand::Rng;
use serde::Serialize;

use super::net::{greedy_net, NetCertificate};
use super::MncError;
use crate::convexity::HullGrid;
use crate::metric::{FNormMetric, MetricError, MetricMode};
use crate::space::PointCloud;
use crate::tolerances::EXACT;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferCertificate {
    pub eta: f64,
    pub eps: f64,
    pub resolution: usize,
    /// `diam(centers) · |centers| / r`.
    pub grid_gap: f64,
    /// `η + ε`.
    pub tight_bound: f64,
    /// `η + ε + grid_gap`, the radius `net` is certified at.
    pub asserted_bound: f64,
    pub center_grid_size: usize,
    /// The net `K` of the center grid, re-assigned over the hull grid of `M`.
    pub net: NetCertificate,
    pub hinge_checks: usize,
    /// Worst `d(x, z) − η` over the checked hinge pairs.
    pub hinge_margin: f64,
}

impl TransferCertificate {
    pub fn covered_radius(&self) -> f64 {
        self.net.radius()
    }
}

fn hull(points: &PointCloud, resolution: usize, budget: usize) -> Result<HullGrid, MncError> {
    HullGrid::new(points, resolution, budget).map_err(|e| MncError::Hull(e.to_string()))
}

/// `net_transfer_co`; returns the certificate together with the hull grid
/// of `M` it covers.
#[allow(clippy::too_many_arguments)]
pub fn net_transfer_co(
    metric: &FNormMetric,
    cloud: &PointCloud,
    input: &NetCertificate,
    eps: f64,
    resolution: usize,
    budget: usize,
    hinge_samples: usize,
    rng: &mut impl Rng,
) -> Result<(TransferCertificate, HullGrid), MncError> {
    if metric.mode() != MetricMode::Gauge {
        return Err(MetricError::NoVBase.into());
    }
    input.verify(metric, cloud)?;
    if !input.complete {
        return Err(MncError::IncompleteNet(input.eps));
    }
    let eta = input.eps;
    let center_grid = hull(&input.centers, resolution, budget)?;
    let grid_gap = center_grid.grid_gap(metric);
    let k = greedy_net(metric, &center_grid.cloud, eps)?;
    let sample = hull(cloud, resolution, budget)?;
    let asserted_bound = eta + eps + grid_gap;
    let net = NetCertificate::cover(metric, &sample.cloud, k.centers, asserted_bound);

    let total = sample.cloud.len();
    let picks: Vec<usize> = if total <= hinge_samples {
        (0..total).collect()
    } else {
        (0..hinge_samples).map(|_| rng.gen_range(0..total)).collect()
    };
    let mut hinge_margin = f64::NEG_INFINITY;
    for &s in &picks {
        let mut zk = vec![0u32; input.centers.len()];
        for (i, &ki) in sample.coefficients[s].iter().enumerate() {
            zk[input.assignment[i].center] += ki;
        }
        let z = center_grid
            .index_of(&zk)
            .ok_or_else(|| MncError::Certificate(format!("hinge point of grid point {s} is off the center grid")))?;
        let d = metric.dist(sample.cloud.get(s), center_grid.cloud.get(z));
        hinge_margin = hinge_margin.max(d - eta);
    }
    if hinge_margin > EXACT {
        return Err(MncError::Certificate(format!("hinge distance exceeds eta by {hinge_margin}")));
    }
    let cert = TransferCertificate {
        eta,
        eps,
        resolution,
        grid_gap,
        tight_bound: eta + eps,
        asserted_bound,
        center_grid_size: center_grid.cloud.len(),
        net,
        hinge_checks: picks.len(),
        hinge_margin,
    };
    Ok((cert, sample))
}
