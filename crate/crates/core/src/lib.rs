//! Computational models of Fréchet spaces: translation-invariant metrics,
//! convex structures, Hausdorff measure-of-noncompactness bounds and
//! Darbo-type fixed-point iteration on finite point clouds.

pub mod convexity;
pub mod fixedpoint;
pub mod metric;
pub mod mnc;
pub mod report;
pub mod sampling;
pub mod space;
pub mod suite;
pub mod tolerances;

mod feasibility;

pub use feasibility::LpError;
pub use metric::{FNormMetric, MetricConfig, MetricError, MetricMode};
pub use space::{CloudFile, PointCloud, SpaceDescriptor, SpaceError, SpaceKind, SpaceModel, SpaceParams, Vector};
