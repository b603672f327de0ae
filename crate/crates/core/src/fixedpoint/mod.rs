//! Operators on cloud-represented sets: the upper characteristic of
//! noncompactness, condensing verdicts and a Darbo-type solver.

pub mod character;
pub mod darbo;
pub mod operator;

use thiserror::Error;

use crate::convexity::ConvexityError;
use crate::metric::MetricError;
use crate::mnc::MncError;

pub use character::{estimate_upper_char, sadovskii_check, SadovskiiReport, TrialVerdict, UpperCharEstimate, Verdict};
pub use darbo::{darbo_solve, DarboConfig, DarboStep, DarboTrace};
pub use operator::{apply_operator, OperatorSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixedPointError {
    #[error("operator: {0}")]
    Operator(String),
    #[error("operator acts on dimension {expected}, cloud has dimension {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("F maps point {point} of M0 outside co(M0) by {distance}")]
    Invariance { point: usize, distance: f64 },
    #[error("no trial set has a positive lower bound")]
    NoTrials,
    #[error("operator is not contractive on M0: estimated ratio {0}")]
    NotContractive(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Mnc(#[from] MncError),
    #[error(transparent)]
    Convexity(#[from] ConvexityError),
}
