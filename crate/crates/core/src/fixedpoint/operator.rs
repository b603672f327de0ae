//! Operator descriptions and their pointwise evaluation.

use serde::{Deserialize, Serialize};

use super::FixedPointError;
use crate::space::{PointCloud, Vector};

fn default_smoothing() -> f64 {
    0.04
}

/// A self-map of `R^dim`.
///
/// * `affine-contraction`: `F(x) = λ·x + c`.
/// * `contraction-plus-smoothing`: `F(x) = λ·x + κ·G·tanh(x) + c`, where
///   `G_ij ∝ exp(-((t_i − t_j)/w)²)` is row-normalised over the grid points
///   `t_i = (i + 1/2)/dim` and `κ` is `smoothing`.
/// * `custom-table`: `F(x) = A·x + c` with `A` given row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperatorSpec {
    AffineContraction {
        lambda: f64,
        shift: Vec<f64>,
    },
    ContractionPlusSmoothing {
        lambda: f64,
        shift: Vec<f64>,
        kernel_width: f64,
        #[serde(default = "default_smoothing")]
        smoothing: f64,
    },
    CustomTable {
        table: Vec<Vec<f64>>,
        shift: Vec<f64>,
    },
}

impl OperatorSpec {
    pub fn identity(dim: usize) -> Self {
        Self::translation(vec![0.0; dim])
    }

    pub fn translation(shift: Vec<f64>) -> Self {
        let dim = shift.len();
        let table = (0..dim).map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        OperatorSpec::CustomTable { table, shift }
    }

    pub fn constant(value: Vec<f64>) -> Self {
        let dim = value.len();
        OperatorSpec::CustomTable { table: vec![vec![0.0; dim]; dim], shift: value }
    }

    pub fn scaling(lambda: f64, dim: usize) -> Self {
        OperatorSpec::AffineContraction { lambda, shift: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorSpec::AffineContraction { shift, .. }
            | OperatorSpec::ContractionPlusSmoothing { shift, .. }
            | OperatorSpec::CustomTable { shift, .. } => shift.len(),
        }
    }

    /// Checks parameters and returns an evaluator.
    pub fn compile(&self) -> Result<Operator, FixedPointError> {
        let bad = |msg: &str| Err(FixedPointError::Operator(msg.to_owned()));
        let dim = self.dim();
        if dim == 0 {
            return bad("shift must be nonempty");
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        let (shift, linear) = match self {
            OperatorSpec::AffineContraction { lambda, shift } => {
                if !lambda.is_finite() || !finite(shift) {
                    return bad("lambda and shift must be finite");
                }
                (shift.clone(), Linear::Scale(*lambda))
            }
            OperatorSpec::ContractionPlusSmoothing { lambda, shift, kernel_width, smoothing } => {
                if !lambda.is_finite() || !finite(shift) || !smoothing.is_finite() {
                    return bad("lambda, smoothing and shift must be finite");
                }
                if !(*kernel_width > 0.0 && kernel_width.is_finite()) {
                    return bad("kernel_width must be positive");
                }
                let t: Vec<f64> = (0..dim).map(|i| (i as f64 + 0.5) / dim as f64).collect();
                let kernel = t
                    .iter()
                    .map(|ti| {
                        let row: Vec<f64> = t.iter().map(|tj| (-((ti - tj) / kernel_width).powi(2)).exp()).collect();
                        let sum: f64 = row.iter().sum();
                        row.into_iter().map(|g| smoothing * g / sum).collect()
                    })
                    .collect();
                (shift.clone(), Linear::Smoothing { lambda: *lambda, kernel })
            }
            OperatorSpec::CustomTable { table, shift } => {
                if table.len() != dim || table.iter().any(|row| row.len() != dim) {
                    return bad("table must be square with the shift's dimension");
                }
                if !finite(shift) || !table.iter().all(|row| finite(row)) {
                    return bad("table and shift must be finite");
                }
                (shift.clone(), Linear::Table(table.clone()))
            }
        };
        Ok(Operator { shift, linear })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Linear {
    Scale(f64),
    Smoothing { lambda: f64, kernel: Vec<Vec<f64>> },
    Table(Vec<Vec<f64>>),
}

/// A compiled operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    shift: Vec<f64>,
    linear: Linear,
}

impl Operator {
    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector, FixedPointError> {
        if x.dim() != self.dim() {
            return Err(FixedPointError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        let x = x.coords();
        let dot = |row: &[f64], v: &[f64]| row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let out: Vec<f64> = match &self.linear {
            Linear::Scale(l) => x.iter().zip(&self.shift).map(|(xi, c)| l * xi + c).collect(),
            Linear::Smoothing { lambda, kernel } => {
                let th: Vec<f64> = x.iter().map(|v| v.tanh()).collect();
                kernel
                    .iter()
                    .zip(x)
                    .zip(&self.shift)
                    .map(|((row, xi), c)| lambda * xi + dot(row, &th) + c)
                    .collect()
            }
            Linear::Table(a) => a.iter().zip(&self.shift).map(|(row, c)| dot(row, x) + c).collect(),
        };
        Vector::new(out).map_err(|e| FixedPointError::Operator(e.to_string()))
    }

    pub fn apply_cloud(&self, cloud: &PointCloud) -> Result<PointCloud, FixedPointError> {
        if cloud.dim() != self.dim() {
            return Err(FixedPointError::DimensionMismatch { expected: self.dim(), found: cloud.dim() });
        }
        let points = cloud.iter().map(|p| self.apply(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(PointCloud::from_points_unchecked(points, cloud.dim(), format!("F({})", cloud.label())))
    }
}

/// `apply_operator`: the pointwise image `F(M)`.
pub fn apply_operator(op: &OperatorSpec, cloud: &PointCloud) -> Result<PointCloud, FixedPointError> {
    op.compile()?.apply_cloud(cloud)
}
