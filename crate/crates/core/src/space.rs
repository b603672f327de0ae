//! Truncated Fréchet-space models: seminorm families, vectors and point clouds.
//!
//! Three families are supported:
//!
//! * `c-grid`: `p_k(x) = max |x_i|` over the first `⌈k·dim/m⌉` grid points, a
//!   discretised sup over `[0, k]`. The seminorms are nested.
//! * `seq-product`: `p_k(x) = Σ |x_i|` over block `k`, a product of ℓ¹ factors.
//! * `lp-grid`: the single functional `q(x) = Σ |x_i|^p · Δ`. For `p < 1` it is
//!   subadditive but only `p`-homogeneous, so the space is not locally convex.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("seminorm count must be at least 1")]
    NoSeminorms,
    #[error("dimension {dim} is smaller than the seminorm count {m}")]
    DimBelowSeminormCount { dim: usize, m: usize },
    #[error("exponent p = {0} is outside (0, 1]")]
    ExponentOutOfRange(f64),
    #[error("grid step must be positive and finite, got {0}")]
    NonPositiveStep(f64),
    #[error("blocks {blocks:?} do not split dimension {dim} into {m} nonempty blocks")]
    BadBlocks { blocks: Vec<usize>, dim: usize, m: usize },
    #[error("lp-grid carries a single functional, got m = {0}")]
    LpSeminormCount(usize),
    #[error("seminorm index {k} is outside 1..={m}")]
    IndexOutOfRange { k: usize, m: usize },
    #[error("vector of dimension {got} used in a space of dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("point cloud is empty")]
    EmptyCloud,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKind {
    CGrid,
    SeqProduct,
    LpGrid,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::CGrid => "c-grid",
            SpaceKind::SeqProduct => "seq-product",
            SpaceKind::LpGrid => "lp-grid",
        })
    }
}

/// Kind-specific parameters, serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum SpaceParams {
    CGrid { step: f64 },
    SeqProduct { blocks: Vec<usize> },
    LpGrid { p: f64, step: f64 },
}

impl SpaceParams {
    pub fn kind(&self) -> SpaceKind {
        match self {
            SpaceParams::CGrid { .. } => SpaceKind::CGrid,
            SpaceParams::SeqProduct { .. } => SpaceKind::SeqProduct,
            SpaceParams::LpGrid { .. } => SpaceKind::LpGrid,
        }
    }
}

/// The JSON space descriptor `{"kind": "...", "dim": n, "m": m, "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    #[serde(flatten)]
    pub params: SpaceParams,
    pub dim: usize,
    pub m: usize,
}

/// A convex seminorm in a form a linear program can consume.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SeminormShape {
    /// `max |x_i|` over `indices`.
    Sup { indices: std::ops::Range<usize> },
    /// `weight · Σ |x_i|` over `indices`.
    Sum { indices: std::ops::Range<usize>, weight: f64 },
}

/// A validated truncated space model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub struct SpaceModel {
    params: SpaceParams,
    dim: usize,
    m: usize,
}

impl TryFrom<SpaceDescriptor> for SpaceModel {
    type Error = SpaceError;

    fn try_from(d: SpaceDescriptor) -> Result<Self, Self::Error> {
        SpaceModel::new(d.params, d.dim, d.m)
    }
}

impl From<SpaceModel> for SpaceDescriptor {
    fn from(s: SpaceModel) -> Self {
        SpaceDescriptor { params: s.params, dim: s.dim, m: s.m }
    }
}

impl SpaceModel {
    /// Validates and builds a space (`make_space`).
    pub fn new(params: SpaceParams, dim: usize, m: usize) -> Result<Self, SpaceError> {
        if m == 0 {
            return Err(SpaceError::NoSeminorms);
        }
        if dim < m {
            return Err(SpaceError::DimBelowSeminormCount { dim, m });
        }
        match &params {
            SpaceParams::CGrid { step } => check_step(*step)?,
            SpaceParams::SeqProduct { blocks } => {
                if blocks.len() != m
                    || blocks.contains(&0)
                    || blocks.iter().sum::<usize>() != dim
                {
                    return Err(SpaceError::BadBlocks { blocks: blocks.clone(), dim, m });
                }
            }
            SpaceParams::LpGrid { p, step } => {
                if !(*p > 0.0 && *p <= 1.0) {
                    return Err(SpaceError::ExponentOutOfRange(*p));
                }
                check_step(*step)?;
                if m != 1 {
                    return Err(SpaceError::LpSeminormCount(m));
                }
            }
        }
        Ok(SpaceModel { params, dim, m })
    }

    pub fn c_grid(dim: usize, m: usize, step: f64) -> Result<Self, SpaceError> {
        Self::new(SpaceParams::CGrid { step }, dim, m)
    }

    pub fn seq_product(blocks: Vec<usize>) -> Result<Self, SpaceError> {
        let dim = blocks.iter().sum();
        let m = blocks.len();
        Self::new(SpaceParams::SeqProduct { blocks }, dim, m)
    }

    pub fn lp_grid(dim: usize, p: f64, step: f64) -> Result<Self, SpaceError> {
        Self::new(SpaceParams::LpGrid { p, step }, dim, 1)
    }

    pub fn kind(&self) -> SpaceKind {
        self.params.kind()
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seminorm_count(&self) -> usize {
        self.m
    }

    /// Grid step for the grid kinds; `1` for sequence products.
    pub fn step(&self) -> f64 {
        match self.params {
            SpaceParams::CGrid { step } | SpaceParams::LpGrid { step, .. } => step,
            SpaceParams::SeqProduct { .. } => 1.0,
        }
    }

    /// `false` only for `lp-grid` with `p < 1`.
    pub fn is_locally_convex(&self) -> bool {
        !matches!(self.params, SpaceParams::LpGrid { p, .. } if p < 1.0)
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        self.clone().into()
    }

    pub fn check(&self, x: &Vector) -> Result<(), SpaceError> {
        if x.dim() != self.dim {
            return Err(SpaceError::DimensionMismatch { expected: self.dim, got: x.dim() });
        }
        Ok(())
    }

    /// Value of the `k`-th seminorm (1-based) at `x` (`seminorm_eval`).
    pub fn seminorm(&self, k: usize, x: &Vector) -> Result<f64, SpaceError> {
        if k == 0 || k > self.m {
            return Err(SpaceError::IndexOutOfRange { k, m: self.m });
        }
        self.check(x)?;
        Ok(self.seminorm_unchecked(k, x.coords()))
    }

    pub(crate) fn seminorm_unchecked(&self, k: usize, x: &[f64]) -> f64 {
        match &self.params {
            SpaceParams::CGrid { .. } => {
                let len = self.c_grid_prefix(k);
                x[..len].iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
            }
            SpaceParams::SeqProduct { blocks } => {
                let start: usize = blocks[..k - 1].iter().sum();
                x[start..start + blocks[k - 1]].iter().map(|v| v.abs()).sum()
            }
            SpaceParams::LpGrid { p, step } => {
                x.iter().map(|v| v.abs().powf(*p)).sum::<f64>() * step
            }
        }
    }

    /// All seminorm values `p_1(x), …, p_m(x)`.
    pub(crate) fn seminorms_unchecked(&self, x: &[f64]) -> Vec<f64> {
        (1..=self.m).map(|k| self.seminorm_unchecked(k, x)).collect()
    }

    fn c_grid_prefix(&self, k: usize) -> usize {
        (k * self.dim).div_ceil(self.m)
    }

    /// LP-ready description of the seminorms; `None` when the space is not
    /// locally convex.
    pub(crate) fn convex_shapes(&self) -> Option<Vec<SeminormShape>> {
        if !self.is_locally_convex() {
            return None;
        }
        let shapes = match &self.params {
            SpaceParams::CGrid { .. } => (1..=self.m)
                .map(|k| SeminormShape::Sup { indices: 0..self.c_grid_prefix(k) })
                .collect(),
            SpaceParams::SeqProduct { blocks } => {
                let mut start = 0;
                blocks
                    .iter()
                    .map(|&b| {
                        let shape = SeminormShape::Sum { indices: start..start + b, weight: 1.0 };
                        start += b;
                        shape
                    })
                    .collect()
            }
            SpaceParams::LpGrid { step, .. } => {
                vec![SeminormShape::Sum { indices: 0..self.dim, weight: *step }]
            }
        };
        Some(shapes)
    }
}

fn check_step(step: f64) -> Result<(), SpaceError> {
    if step.is_finite() && step > 0.0 {
        Ok(())
    } else {
        Err(SpaceError::NonPositiveStep(step))
    }
}

/// A point of a truncated space. Arithmetic is coordinatewise; mixing
/// dimensions in the operator impls is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl TryFrom<Vec<f64>> for Vector {
    type Error = SpaceError;

    fn try_from(coords: Vec<f64>) -> Result<Self, Self::Error> {
        Vector::new(coords)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self, SpaceError> {
        if let Some(i) = coords.iter().position(|v| !v.is_finite()) {
            return Err(SpaceError::NonFinite(i));
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    pub fn constant(dim: usize, value: f64) -> Self {
        Vector(vec![value; dim])
    }

    /// Unit coordinate vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Vector(v)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|v| v.is_finite()));
        Vector(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, lambda: f64) -> Vector {
        Vector(self.0.iter().map(|v| lambda * v).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    /// `Σ w_j · v_j`, evaluated left to right.
    pub fn combination<'a, I>(dim: usize, terms: I) -> Vector
    where
        I: IntoIterator<Item = (f64, &'a Vector)>,
    {
        let mut out = vec![0.0; dim];
        for (w, v) in terms {
            assert_eq!(v.dim(), dim, "vector dimension mismatch");
            for (o, c) in out.iter_mut().zip(&v.0) {
                *o += w * c;
            }
        }
        Vector(out)
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|v| -v).collect())
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;

    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

/// A finite sample of a bounded set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    points: Vec<Vector>,
    label: String,
    #[serde(skip)]
    dim: usize,
}

impl PointCloud {
    /// Builds a nonempty cloud whose points share one dimension.
    pub fn new(points: Vec<Vector>, label: impl Into<String>) -> Result<Self, SpaceError> {
        let dim = points.first().ok_or(SpaceError::EmptyCloud)?.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(SpaceError::DimensionMismatch { expected: dim, got: p.dim() });
        }
        Ok(PointCloud { points, label: label.into(), dim })
    }

    /// An explicitly empty cloud.
    pub fn empty(dim: usize, label: impl Into<String>) -> Self {
        PointCloud { points: Vec::new(), label: label.into(), dim }
    }

    pub fn from_coords(rows: Vec<Vec<f64>>, label: impl Into<String>) -> Result<Self, SpaceError> {
        let points = rows.into_iter().map(Vector::new).collect::<Result<Vec<_>, _>>()?;
        Self::new(points, label)
    }

    pub(crate) fn from_points_unchecked(points: Vec<Vector>, dim: usize, label: String) -> Self {
        debug_assert!(points.iter().all(|p| p.dim() == dim));
        PointCloud { points, label, dim }
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Vector {
        &self.points[i]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vector> {
        self.points.iter()
    }

    pub fn check_space(&self, space: &SpaceModel) -> Result<(), SpaceError> {
        if self.dim != space.dim() {
            return Err(SpaceError::DimensionMismatch { expected: space.dim(), got: self.dim });
        }
        Ok(())
    }

    pub fn map(&self, f: impl FnMut(&Vector) -> Vector, label: impl Into<String>) -> PointCloud {
        let points: Vec<Vector> = self.points.iter().map(f).collect();
        let dim = points.first().map_or(self.dim, Vector::dim);
        PointCloud { points, label: label.into(), dim }
    }

    /// `z + M`.
    pub fn translate(&self, z: &Vector) -> PointCloud {
        self.map(|p| p + z, format!("{}+z", self.label))
    }

    /// `λ·M`.
    pub fn scale(&self, lambda: f64) -> PointCloud {
        self.map(|p| p.scale(lambda), format!("{}*{lambda}", self.label))
    }

    /// `M ∪ N` as the concatenation `M` then `N`, so `M`'s indices are kept.
    pub fn union(&self, other: &PointCloud) -> PointCloud {
        assert_eq!(self.dim, other.dim, "cloud dimension mismatch");
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        PointCloud { points, label: format!("{}|{}", self.label, other.label), dim: self.dim }
    }

    /// Pairwise Minkowski sum; point `(i, j)` sits at index `i·|N| + j`.
    pub fn minkowski_sum(&self, other: &PointCloud) -> PointCloud {
        assert_eq!(self.dim, other.dim, "cloud dimension mismatch");
        let points = self
            .points
            .iter()
            .flat_map(|a| other.points.iter().map(move |b| a + b))
            .collect();
        PointCloud { points, label: format!("{}+{}", self.label, other.label), dim: self.dim }
    }

    /// Arithmetic mean of the points.
    pub fn barycenter(&self) -> Option<Vector> {
        if self.points.is_empty() {
            return None;
        }
        let w = 1.0 / self.points.len() as f64;
        Some(Vector::combination(self.dim, self.points.iter().map(|p| (w, p))))
    }
}

impl<'a> IntoIterator for &'a PointCloud {
    type Item = &'a Vector;
    type IntoIter = std::slice::Iter<'a, Vector>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// `{"space": <descriptor>, "points": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudFile {
    pub space: SpaceModel,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CloudFile {
    pub fn new(space: SpaceModel, cloud: &PointCloud) -> Self {
        CloudFile {
            space,
            points: cloud.iter().map(|p| p.coords().to_vec()).collect(),
            label: Some(cloud.label().to_owned()),
        }
    }

    /// Validates dimensions and returns the space with its cloud.
    pub fn into_parts(self) -> Result<(SpaceModel, PointCloud), SpaceError> {
        let label = self.label.unwrap_or_else(|| "cloud".to_owned());
        let cloud = if self.points.is_empty() {
            PointCloud::empty(self.space.dim(), label)
        } else {
            PointCloud::from_coords(self.points, label)?
        };
        cloud.check_space(&self.space)?;
        Ok((self.space, cloud))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn make_space_examples() {
        let s = SpaceModel::c_grid(8, 4, 0.25).unwrap();
        assert_eq!((s.kind(), s.dim(), s.seminorm_count()), (SpaceKind::CGrid, 8, 4));
        assert!(s.is_locally_convex());

        let lp = SpaceModel::lp_grid(4, 0.5, 1.0).unwrap();
        assert!(!lp.is_locally_convex());

        let sp = SpaceModel::seq_product(vec![2, 2, 2]).unwrap();
        assert_eq!((sp.dim(), sp.seminorm_count()), (6, 3));
    }

    #[test]
    fn make_space_rejects_bad_input() {
        assert_eq!(
            SpaceModel::c_grid(2, 3, 1.0),
            Err(SpaceError::DimBelowSeminormCount { dim: 2, m: 3 })
        );
        assert_eq!(SpaceModel::lp_grid(4, 0.0, 1.0), Err(SpaceError::ExponentOutOfRange(0.0)));
        assert_eq!(SpaceModel::lp_grid(4, 1.5, 1.0), Err(SpaceError::ExponentOutOfRange(1.5)));
        assert_eq!(SpaceModel::c_grid(4, 2, 0.0), Err(SpaceError::NonPositiveStep(0.0)));
        assert_eq!(SpaceModel::c_grid(4, 2, -1.0), Err(SpaceError::NonPositiveStep(-1.0)));
        assert!(matches!(
            SpaceModel::new(SpaceParams::SeqProduct { blocks: vec![2, 3] }, 6, 2),
            Err(SpaceError::BadBlocks { .. })
        ));
        assert_eq!(
            SpaceModel::new(SpaceParams::LpGrid { p: 0.5, step: 1.0 }, 4, 2),
            Err(SpaceError::LpSeminormCount(2))
        );
    }

    #[test]
    fn seminorm_examples() {
        let s = SpaceModel::c_grid(8, 4, 0.25).unwrap();
        let two = Vector::constant(8, 2.0);
        for k in 1..=4 {
            assert_eq!(s.seminorm(k, &two).unwrap(), 2.0);
            assert_eq!(s.seminorm(k, &Vector::zeros(8)).unwrap(), 0.0);
        }
        let sp = SpaceModel::seq_product(vec![2, 2, 2]).unwrap();
        let x = v(&[1.0, -1.0, 0.0, 0.0, 3.0, 0.0]);
        assert_eq!(sp.seminorm(3, &x).unwrap(), 3.0);
        assert_eq!(sp.seminorm(1, &x).unwrap(), 2.0);
        let lp = SpaceModel::lp_grid(4, 0.5, 1.0).unwrap();
        assert_eq!(lp.seminorm(1, &Vector::zeros(4)).unwrap(), 0.0);
    }

    #[test]
    fn c_grid_prefixes_are_nested() {
        let s = SpaceModel::c_grid(8, 3, 1.0).unwrap();
        let lens: Vec<usize> = (1..=3).map(|k| s.c_grid_prefix(k)).collect();
        assert_eq!(lens, vec![3, 6, 8]);
        let x = v(&[0.0, 0.0, 0.0, 0.0, 5.0, 0.0, 0.0, 7.0]);
        assert_eq!(s.seminorms_unchecked(x.coords()), vec![0.0, 5.0, 7.0]);
    }

    #[test]
    fn seminorm_errors() {
        let s = SpaceModel::c_grid(4, 2, 1.0).unwrap();
        assert_eq!(
            s.seminorm(3, &Vector::zeros(4)),
            Err(SpaceError::IndexOutOfRange { k: 3, m: 2 })
        );
        assert_eq!(s.seminorm(0, &Vector::zeros(4)), Err(SpaceError::IndexOutOfRange { k: 0, m: 2 }));
        assert_eq!(
            s.seminorm(1, &Vector::zeros(3)),
            Err(SpaceError::DimensionMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn vector_rejects_non_finite() {
        assert_eq!(Vector::new(vec![1.0, f64::NAN]), Err(SpaceError::NonFinite(1)));
    }

    #[test]
    fn cloud_construction() {
        assert_eq!(PointCloud::new(vec![], "m"), Err(SpaceError::EmptyCloud));
        let e = PointCloud::empty(3, "nothing");
        assert!(e.is_empty());
        assert_eq!(e.dim(), 3);
        assert!(matches!(
            PointCloud::from_coords(vec![vec![1.0], vec![1.0, 2.0]], "m"),
            Err(SpaceError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minkowski_sum_layout() {
        let m = PointCloud::from_coords(vec![vec![0.0], vec![1.0]], "m").unwrap();
        let n = PointCloud::from_coords(vec![vec![10.0], vec![20.0], vec![30.0]], "n").unwrap();
        let s = m.minkowski_sum(&n);
        assert_eq!(s.len(), 6);
        assert_eq!(s.get(4).coords(), &[21.0]);
    }

    #[test]
    fn descriptor_json_shape() {
        let s = SpaceModel::seq_product(vec![2, 2, 2]).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"kind": "seq-product", "dim": 6, "m": 3, "params": {"blocks": [2, 2, 2]}})
        );
        let back: SpaceModel = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);

        let bad = serde_json::json!({"kind": "lp-grid", "dim": 4, "m": 1, "params": {"p": 2.0, "step": 1.0}});
        assert!(serde_json::from_value::<SpaceModel>(bad).is_err());
    }

    #[test]
    fn cloud_file_round_trip() {
        let text = r#"{"space": {"kind": "c-grid", "dim": 2, "m": 1, "params": {"step": 0.5}},
                       "points": [[0, 1], [2, 3]]}"#;
        let file: CloudFile = serde_json::from_str(text).unwrap();
        let (space, cloud) = file.into_parts().unwrap();
        assert_eq!(space.dim(), 2);
        assert_eq!(cloud.get(1).coords(), &[2.0, 3.0]);

        let wrong = r#"{"space": {"kind": "c-grid", "dim": 3, "m": 1, "params": {"step": 0.5}},
                        "points": [[0, 1]]}"#;
        let file: CloudFile = serde_json::from_str(wrong).unwrap();
        assert!(file.into_parts().is_err());
    }
}
