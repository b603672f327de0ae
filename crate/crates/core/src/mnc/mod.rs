//! Hausdorff measure of noncompactness on point clouds: certified nets,
//! packings, two-sided bounds, the hull net transfer and property checks.

pub mod bounds;
pub mod nested;
pub mod net;
pub mod properties;
pub mod transfer;

use thiserror::Error;

use crate::metric::MetricError;

pub use bounds::{alpha_bounds, AlphaBounds, EpsGrid, NetBudget};
pub use nested::{dyadic_family, nested_intersection_probe, DecreasingFamily, ProbeResult};
pub use net::{greedy_net, packing_lower, Assignment, NetCertificate, Packing};
pub use properties::{ball_refinement, check_mnc_properties, ItemCheck};
pub use transfer::{net_transfer_co, TransferCertificate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MncError {
    #[error("eps = {0} must be positive and finite")]
    Eps(f64),
    #[error("eps grid {0:?} must be nonempty, positive and strictly decreasing")]
    EpsGrid(Vec<f64>),
    #[error("a center budget must allow at least one center")]
    Budget,
    #[error("certificate check failed: {0}")]
    Certificate(String),
    #[error("input net is incomplete at eta = {0}")]
    IncompleteNet(f64),
    #[error("family is not nested: point {point} of set {set} is {distance} away from set {previous}", previous = set - 1)]
    NotNested { set: usize, point: usize, distance: f64 },
    #[error("family needs at least one nonempty set")]
    EmptyFamily,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("hull grid: {0}")]
    Hull(String),
}
