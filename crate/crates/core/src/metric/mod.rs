//! Translation-invariant metrics `d(x, y) = |y − x|` on a space model.
//!
//! * `standard`: `Σ_k 2^-k p_k/(1 + p_k)`, bounded but not scaling-compatible.
//! * `gauge`: `2^-n0 · gauge_U(x)` with `U` the caps box, positively homogeneous.
//! * `paper`: the least `p_H = Σ_{n∈H} 2^-n` with `x ∈ V_H = Σ_{n∈H} V_n`,
//!   where `V_n = 2^{n0-n} · U`.

pub mod audit;
pub mod dyadic;
pub mod lp;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::{self, CapsBox, LpError};
use crate::space::{SpaceError, SpaceModel, Vector};
use crate::tolerances::{DEFAULT_DEPTH, LP_BAND, MAX_DEPTH};

pub use audit::{audit_additive, audit_axioms, audit_scaling, AuditReport, RegionStats};
pub use dyadic::{least_dyadic_at_least, DyadicSum};
pub use lp::{lp_counterexample, step_function, LpViolation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("{mode} mode needs a locally convex space")]
    NotLocallyConvex { mode: MetricMode },
    #[error("expected {expected} caps, got {got}")]
    CapCount { expected: usize, got: usize },
    #[error("caps must be positive and finite")]
    NonPositiveCap,
    #[error("depth {depth} must lie in {min}..={max}")]
    Depth { depth: u32, min: u32, max: u32 },
    #[error("cap value must be positive and finite, got {0}")]
    CapValue(f64),
    #[error("index set must be a nonempty subset of 1..={depth}, got {indices:?}")]
    IndexSet { indices: Vec<u32>, depth: u32 },
    #[error("operation needs a gauge or paper mode metric")]
    NoVBase,
    #[error("membership routes disagree: gauge ratio {shortcut}, decomposition scale {decomposition}")]
    RouteDisagreement { shortcut: f64, decomposition: f64 },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("lambda {0} is outside (0, 1]")]
    Lambda(f64),
    #[error("counterexample needs an lp-grid space")]
    NotLpGrid,
    #[error("counterexample needs x != y")]
    EqualPoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricMode {
    Standard,
    Gauge,
    Paper,
}

impl MetricMode {
    pub const ALL: [MetricMode; 3] = [MetricMode::Standard, MetricMode::Gauge, MetricMode::Paper];

    pub fn name(self) -> &'static str {
        match self {
            MetricMode::Standard => "standard",
            MetricMode::Gauge => "gauge",
            MetricMode::Paper => "paper",
        }
    }
}

impl std::fmt::Display for MetricMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MetricMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(MetricMode::Standard),
            "gauge" => Ok(MetricMode::Gauge),
            "paper" => Ok(MetricMode::Paper),
            other => Err(format!("unknown metric mode {other:?}")),
        }
    }
}

/// Parameters of `build_fnorm`; missing caps default to all ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub mode: MetricMode,
    #[serde(default)]
    pub caps: Option<Vec<f64>>,
    #[serde(default)]
    pub n0: u32,
    #[serde(default = "default_depth")]
    pub depth: u32,
    #[serde(default = "default_cap_value")]
    pub cap_value: f64,
}

fn default_depth() -> u32 {
    DEFAULT_DEPTH
}

fn default_cap_value() -> f64 {
    1.0
}

impl MetricConfig {
    pub fn new(mode: MetricMode) -> Self {
        MetricConfig { mode, caps: None, n0: 0, depth: DEFAULT_DEPTH, cap_value: 1.0 }
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_caps(mut self, caps: Vec<f64>) -> Self {
        self.caps = Some(caps);
        self
    }

    pub fn with_n0(mut self, n0: u32) -> Self {
        self.n0 = n0;
        self
    }

    pub fn with_cap_value(mut self, cap_value: f64) -> Self {
        self.cap_value = cap_value;
        self
    }
}

/// Result of testing `x ∈ V_H` by both routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// `gauge_U(x) / (2^n0 · p_H)`.
    pub shortcut_ratio: f64,
    /// Least common scale of an LP decomposition over the `V_n`, `n ∈ H`.
    pub decomposition_scale: f64,
}

/// A realized translation-invariant metric.
#[derive(Debug, Clone)]
pub struct FNormMetric {
    mode: MetricMode,
    space: SpaceModel,
    caps: Vec<f64>,
    n0: u32,
    depth: u32,
    cap_value: f64,
}

impl FNormMetric {
    /// `build_fnorm`.
    pub fn build(space: &SpaceModel, config: &MetricConfig) -> Result<Self, MetricError> {
        let m = space.seminorm_count();
        let caps = config.caps.clone().unwrap_or_else(|| vec![1.0; m]);
        if caps.len() != m {
            return Err(MetricError::CapCount { expected: m, got: caps.len() });
        }
        if caps.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(MetricError::NonPositiveCap);
        }
        if config.mode != MetricMode::Standard && !space.is_locally_convex() {
            return Err(MetricError::NotLocallyConvex { mode: config.mode });
        }
        if config.mode == MetricMode::Paper {
            let min = config.n0 + 1;
            if config.depth < min || config.depth > MAX_DEPTH {
                return Err(MetricError::Depth { depth: config.depth, min, max: MAX_DEPTH });
            }
            if !(config.cap_value.is_finite() && config.cap_value > 0.0) {
                return Err(MetricError::CapValue(config.cap_value));
            }
        }
        Ok(FNormMetric {
            mode: config.mode,
            space: space.clone(),
            caps,
            n0: config.n0,
            depth: config.depth,
            cap_value: config.cap_value,
        })
    }

    pub fn standard(space: &SpaceModel) -> Self {
        Self::build(space, &MetricConfig::new(MetricMode::Standard))
            .expect("standard metric accepts every space")
    }

    /// Gauge mode with unit caps and `n0 = 0`.
    pub fn unit_gauge(space: &SpaceModel) -> Result<Self, MetricError> {
        Self::build(space, &MetricConfig::new(MetricMode::Gauge))
    }

    pub fn mode(&self) -> MetricMode {
        self.mode
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn caps(&self) -> &[f64] {
        &self.caps
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cap_value(&self) -> f64 {
        self.cap_value
    }

    pub fn config(&self) -> MetricConfig {
        MetricConfig {
            mode: self.mode,
            caps: Some(self.caps.clone()),
            n0: self.n0,
            depth: self.depth,
            cap_value: self.cap_value,
        }
    }

    /// Positively homogeneous modes, where `d(λx, λy) = λ d(x, y)`.
    pub fn is_homogeneous(&self) -> bool {
        self.mode == MetricMode::Gauge
    }

    /// `gauge_U(x) = max_k p_k(x)/c_k`; `None` in standard mode.
    pub fn gauge_u(&self, x: &Vector) -> Result<Option<f64>, MetricError> {
        self.space.check(x)?;
        Ok((self.mode != MetricMode::Standard).then(|| self.gauge_raw(x.coords())))
    }

    fn gauge_raw(&self, x: &[f64]) -> f64 {
        self.space
            .seminorms_unchecked(x)
            .iter()
            .zip(&self.caps)
            .fold(0.0, |acc: f64, (p, c)| acc.max(p / c))
    }

    /// `gauge_U(x) · 2^-n0`, the quantity the paper mode quantizes.
    fn scaled_gauge(&self, x: &[f64]) -> f64 {
        self.gauge_raw(x) * (-(self.n0 as f64)).exp2()
    }

    /// `fnorm_eval`.
    pub fn norm(&self, x: &Vector) -> Result<f64, MetricError> {
        self.space.check(x)?;
        Ok(self.norm_raw(x.coords()))
    }

    pub(crate) fn norm_raw(&self, x: &[f64]) -> f64 {
        match self.mode {
            MetricMode::Standard => self
                .space
                .seminorms_unchecked(x)
                .iter()
                .enumerate()
                .map(|(k, p)| (-(k as f64 + 1.0)).exp2() * p / (1.0 + p))
                .sum(),
            MetricMode::Gauge => self.scaled_gauge(x),
            MetricMode::Paper => {
                if x.iter().all(|&v| v == 0.0) {
                    return 0.0;
                }
                match least_dyadic_at_least(self.scaled_gauge(x), self.depth) {
                    Some(h) => h.value(),
                    None => self.cap_value,
                }
            }
        }
    }

    /// The index set realizing `|x|` in paper mode; `None` for `0`, for capped
    /// points and in the other modes.
    pub fn representation(&self, x: &Vector) -> Result<Option<DyadicSum>, MetricError> {
        self.space.check(x)?;
        if self.mode != MetricMode::Paper || x.is_zero() {
            return Ok(None);
        }
        Ok(least_dyadic_at_least(self.scaled_gauge(x.coords()), self.depth))
    }

    /// `true` when `|x|` is a dyadic sum rather than the cap value.
    pub fn is_inside(&self, x: &Vector) -> bool {
        match self.mode {
            MetricMode::Paper => {
                x.is_zero() || self.scaled_gauge(x.coords()) <= 1.0 - crate::tolerances::dyadic_slack(self.depth)
            }
            _ => true,
        }
    }

    /// `metric_eval`: `|y − x|`.
    pub fn distance(&self, x: &Vector, y: &Vector) -> Result<f64, MetricError> {
        self.space.check(x)?;
        self.space.check(y)?;
        Ok(self.dist(x, y))
    }

    /// Distance without space checks; panics on a dimension mismatch.
    pub fn dist(&self, x: &Vector, y: &Vector) -> f64 {
        self.dist_raw(x.coords(), y.coords())
    }

    pub(crate) fn dist_raw(&self, x: &[f64], y: &[f64]) -> f64 {
        assert_eq!(x.len(), y.len(), "vector dimension mismatch");
        let diff: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - a).collect();
        self.norm_raw(&diff)
    }

    pub(crate) fn caps_box(&self) -> Result<CapsBox, MetricError> {
        if self.mode == MetricMode::Standard {
            return Err(MetricError::NoVBase);
        }
        Ok(CapsBox::new(&self.space, &self.caps)?)
    }

    /// `member_VH`, returning both routes.
    pub fn membership(&self, h: &[u32], x: &Vector) -> Result<Membership, MetricError> {
        let cbox = self.caps_box()?;
        self.space.check(x)?;
        let sum = DyadicSum::from_indices(h, self.depth)
            .filter(|_| sorted_unique(h))
            .ok_or_else(|| MetricError::IndexSet { indices: h.to_vec(), depth: self.depth })?;
        let level = (self.n0 as f64).exp2() * sum.value();
        let shortcut_ratio = self.gauge_raw(x.coords()) / level;
        let scales: Vec<f64> = h.iter().map(|&n| (self.n0 as f64 - n as f64).exp2()).collect();
        let decomposition_scale = feasibility::decomposition_scale(&cbox, &scales, x.coords())?;
        let band = LP_BAND * shortcut_ratio.max(1.0);
        if (shortcut_ratio - decomposition_scale).abs() > band {
            return Err(MetricError::RouteDisagreement {
                shortcut: shortcut_ratio,
                decomposition: decomposition_scale,
            });
        }
        Ok(Membership { member: shortcut_ratio <= 1.0, shortcut_ratio, decomposition_scale })
    }

    /// `member_VH`.
    pub fn member_vh(&self, h: &[u32], x: &Vector) -> Result<bool, MetricError> {
        Ok(self.membership(h, x)?.member)
    }

    /// Exact gauge-mode distance from `x` to the convex hull of `generators`.
    pub fn distance_to_hull(&self, generators: &[Vector], x: &Vector) -> Result<f64, MetricError> {
        if self.mode != MetricMode::Gauge {
            return Err(MetricError::NoVBase);
        }
        let cbox = self.caps_box()?;
        let gens: Vec<&[f64]> = generators.iter().map(|g| g.coords()).collect();
        let (s, _) = feasibility::gauge_distance_to_hull(&cbox, &gens, x.coords())?;
        Ok(s * (-(self.n0 as f64)).exp2())
    }
}

fn sorted_unique(h: &[u32]) -> bool {
    h.windows(2).all(|w| w[0] < w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn unit_box_2d() -> SpaceModel {
        SpaceModel::c_grid(2, 1, 1.0).unwrap()
    }

    #[test]
    fn standard_metric_examples() {
        let line = SpaceModel::c_grid(1, 1, 1.0).unwrap();
        let d = FNormMetric::standard(&line);
        assert_eq!(d.distance(&v(&[0.0]), &v(&[1.0])).unwrap(), 0.25);
        assert_eq!(d.distance(&v(&[3.0]), &v(&[3.0])).unwrap(), 0.0);
        let lhs = d.distance(&v(&[0.0]), &v(&[1.0])).unwrap();
        let rhs = 0.5 * d.distance(&v(&[0.0]), &v(&[2.0])).unwrap();
        assert!((rhs - 1.0 / 6.0).abs() < 1e-15);
        assert!(lhs > rhs);
    }

    #[test]
    fn gauge_and_paper_examples() {
        let s = unit_box_2d();
        let gauge = FNormMetric::unit_gauge(&s).unwrap();
        let paper = FNormMetric::build(&s, &MetricConfig::new(MetricMode::Paper).with_depth(4)).unwrap();
        let o = v(&[0.0, 0.0]);
        let x = v(&[0.3, 0.0]);
        assert_eq!(gauge.distance(&o, &x).unwrap(), 0.3);
        assert_eq!(paper.distance(&o, &x).unwrap(), 0.3125);
        assert_eq!(paper.representation(&x).unwrap().unwrap().indices(), vec![2, 4]);
        assert_eq!(paper.norm(&o).unwrap(), 0.0);
        assert_eq!(paper.norm(&v(&[5.0, 0.0])).unwrap(), paper.cap_value());
        assert!(!paper.is_inside(&v(&[5.0, 0.0])));
    }

    #[test]
    fn gauge_with_caps_and_anchor() {
        let s = SpaceModel::c_grid(4, 2, 1.0).unwrap();
        let cfg = MetricConfig::new(MetricMode::Gauge).with_caps(vec![2.0, 1.0]).with_n0(1);
        let d = FNormMetric::build(&s, &cfg).unwrap();
        // p_1 = 3 over the first two points, p_2 = 3: max(3/2, 3/1) · 2^-1
        assert_eq!(d.norm(&v(&[3.0, 0.0, 0.0, 0.5])).unwrap(), 1.5);
    }

    #[test]
    fn build_rejects_bad_parameters() {
        let lp = SpaceModel::lp_grid(4, 0.5, 1.0).unwrap();
        assert_eq!(
            FNormMetric::unit_gauge(&lp).unwrap_err(),
            MetricError::NotLocallyConvex { mode: MetricMode::Gauge }
        );
        let s = unit_box_2d();
        assert!(matches!(
            FNormMetric::build(&s, &MetricConfig::new(MetricMode::Gauge).with_caps(vec![1.0, 1.0])),
            Err(MetricError::CapCount { .. })
        ));
        assert_eq!(
            FNormMetric::build(&s, &MetricConfig::new(MetricMode::Gauge).with_caps(vec![0.0])).unwrap_err(),
            MetricError::NonPositiveCap
        );
        assert!(matches!(
            FNormMetric::build(&s, &MetricConfig::new(MetricMode::Paper).with_n0(3).with_depth(3)),
            Err(MetricError::Depth { .. })
        ));
        // standard mode is an F-norm on every model
        assert!(FNormMetric::build(&lp, &MetricConfig::new(MetricMode::Standard)).is_ok());
    }

    #[test]
    fn paper_value_set_depth_four() {
        let s = unit_box_2d();
        let paper = FNormMetric::build(&s, &MetricConfig::new(MetricMode::Paper).with_depth(4)).unwrap();
        let allowed: Vec<f64> = (1..16).map(|j| j as f64 / 16.0).collect();
        for i in 0..200 {
            let x = v(&[i as f64 / 150.0, -(i as f64) / 400.0]);
            let value = paper.norm(&x).unwrap();
            assert!(value == 0.0 || value == paper.cap_value() || allowed.contains(&value), "{value}");
        }
    }

    #[test]
    fn member_vh_examples() {
        let s = unit_box_2d();
        let d = FNormMetric::build(&s, &MetricConfig::new(MetricMode::Paper).with_depth(4)).unwrap();
        assert!(d.member_vh(&[1, 2], &v(&[0.5, 0.1])).unwrap());
        assert!(!d.member_vh(&[1, 2], &v(&[0.8, 0.0])).unwrap());
        assert!(d.member_vh(&[4], &v(&[0.0, 0.0])).unwrap());
        assert!(matches!(d.member_vh(&[5], &v(&[0.0, 0.0])), Err(MetricError::IndexSet { .. })));
        assert!(matches!(d.member_vh(&[], &v(&[0.0, 0.0])), Err(MetricError::IndexSet { .. })));
        assert!(matches!(d.member_vh(&[2, 1], &v(&[0.0, 0.0])), Err(MetricError::IndexSet { .. })));
    }

    #[test]
    fn member_vh_on_block_spaces() {
        let s = SpaceModel::seq_product(vec![2, 2]).unwrap();
        let cfg = MetricConfig::new(MetricMode::Paper).with_caps(vec![1.0, 2.0]).with_n0(1).with_depth(5);
        let d = FNormMetric::build(&s, &cfg).unwrap();
        let x = v(&[0.4, -0.3, 1.0, 0.5]);
        // gauge = max(0.7, 1.5/2) = 0.75; V_{1,3} = 2·(1/2 + 1/8)·U
        let m = d.membership(&[1, 3], &x).unwrap();
        assert!(m.member);
        assert!((m.shortcut_ratio - 0.6).abs() < 1e-12);
    }

    #[test]
    fn distance_to_hull_needs_gauge_mode() {
        let s = unit_box_2d();
        let paper = FNormMetric::build(&s, &MetricConfig::new(MetricMode::Paper)).unwrap();
        assert_eq!(paper.distance_to_hull(&[v(&[0.0, 0.0])], &v(&[1.0, 0.0])).unwrap_err(), MetricError::NoVBase);
        let gauge = FNormMetric::unit_gauge(&s).unwrap();
        let d = gauge.distance_to_hull(&[v(&[0.0, 0.0]), v(&[1.0, 1.0])], &v(&[1.0, 0.0])).unwrap();
        assert!((d - 0.5).abs() < 1e-9);
    }
}
