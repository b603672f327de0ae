//! Named property suites and the shipped space descriptors they run on.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::convexity::{
    check_property_p, check_property_q, check_stability, check_tcs, check_tmcs, BarycentricWeights, HullGrid,
    PropertyReport,
};
use crate::fixedpoint::{darbo_solve, estimate_upper_char, sadovskii_check, DarboConfig, OperatorSpec, Verdict};
use crate::metric::{audit_additive, audit_axioms, audit_scaling, lp_counterexample, step_function, FNormMetric, MetricConfig, MetricMode};
use crate::mnc::{
    alpha_bounds, ball_refinement, check_mnc_properties, dyadic_family, greedy_net, nested_intersection_probe,
    net_transfer_co, packing_lower, DecreasingFamily, EpsGrid, NetBudget,
};
use crate::report::{CheckResult, Outcome, Report};
use crate::sampling::{ball_grid, box_grid, quadruples, rng, segment_grid, triples, uniform_cloud, uniform_vector, vector_of_size};
use crate::space::{PointCloud, SpaceDescriptor, SpaceKind, SpaceModel, Vector};
use crate::tolerances::{dyadic_slack, CONVEXITY, DEFAULT_DEPTH, DEFAULT_HULL_BUDGET, EXACT, LP_BAND};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Metric,
    Convexity,
    Mnc,
    HullInvariance,
    Fixedpoint,
    Counterexample,
    All,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Metric,
        SuiteName::Convexity,
        SuiteName::Mnc,
        SuiteName::HullInvariance,
        SuiteName::Fixedpoint,
        SuiteName::Counterexample,
        SuiteName::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::Metric => "metric",
            SuiteName::Convexity => "convexity",
            SuiteName::Mnc => "mnc",
            SuiteName::HullInvariance => "hull-invariance",
            SuiteName::Fixedpoint => "fixedpoint",
            SuiteName::Counterexample => "counterexample",
            SuiteName::All => "all",
        }
    }

    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteName {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| SuiteError::Malformed(format!("unknown suite {s:?}")))
    }
}

/// Anchor ids, one per statement the suites cover.
pub const ANCHORS: [&str; 9] = [
    "additive-inequality",
    "metric-characterization",
    "scaling-inequality",
    "lp-counterexample",
    "hausdorff-mnc",
    "mnc-proposition",
    "hull-invariance",
    "convex-structures",
    "condensing-fixed-points",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("{0}")]
    Malformed(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("check could not run: {0}")]
    Check(String),
}

fn check_err(e: impl fmt::Display) -> SuiteError {
    SuiteError::Check(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedSpace {
    pub name: String,
    pub space: SpaceModel,
}

const SHIPPED: [(&str, &str); 5] = [
    ("c-grid-8", include_str!("../data/spaces/c-grid-8.json")),
    ("seq-product-6", include_str!("../data/spaces/seq-product-6.json")),
    ("c-grid-32", include_str!("../data/spaces/c-grid-32.json")),
    ("lp-grid-p1", include_str!("../data/spaces/lp-grid-p1.json")),
    ("lp-grid-p05", include_str!("../data/spaces/lp-grid-p05.json")),
];

pub fn shipped_spaces() -> Vec<NamedSpace> {
    SHIPPED
        .iter()
        .map(|(name, text)| NamedSpace {
            name: (*name).to_owned(),
            space: serde_json::from_str(text).expect("shipped descriptor is valid"),
        })
        .collect()
}

/// Every `*.json` file of `dir`, in file-name order, as a space descriptor.
pub fn load_spaces(dir: &Path) -> Result<Vec<NamedSpace>, SuiteError> {
    let io = |source| SuiteError::Io { path: dir.display().to_string(), source };
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(SuiteError::Malformed(format!("{}: no space descriptors", dir.display())));
    }
    files
        .iter()
        .map(|path| {
            let text = std::fs::read_to_string(path)
                .map_err(|source| SuiteError::Io { path: path.display().to_string(), source })?;
            let space = serde_json::from_str(&text)
                .map_err(|e| SuiteError::Malformed(format!("{}: {e}", path.display())))?;
            let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(NamedSpace { name, space })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Seeded tuples per audit.
    pub samples: usize,
    pub depth: u32,
    pub budget: usize,
    /// Net-transfer ε.
    pub eps: f64,
    /// Fixed-point tolerance.
    pub tol: f64,
    /// Metric modes to audit; empty means all.
    pub modes: Vec<MetricMode>,
    /// Requested counterexample exponent and scale.
    pub p: f64,
    pub lambda: f64,
    /// Cloud pairs per space for the measure properties.
    pub pairs: usize,
    /// Clouds per space for the hull net transfer.
    pub clouds: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            samples: 1000,
            depth: DEFAULT_DEPTH,
            budget: DEFAULT_HULL_BUDGET,
            eps: 0.1,
            tol: 1e-6,
            modes: Vec::new(),
            p: 0.5,
            lambda: 0.25,
            pairs: 50,
            clouds: 50,
        }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<(), SuiteError> {
        let bad = |m: String| Err(SuiteError::Malformed(m));
        if !(self.p > 0.0 && self.p <= 1.0) {
            return bad(format!("p = {} must lie in (0, 1]", self.p));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return bad(format!("lambda = {} must lie in (0, 1]", self.lambda));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) || !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("eps and tol must be positive".into());
        }
        if self.samples == 0 || self.pairs == 0 || self.clouds == 0 {
            return bad("sample counts must be positive".into());
        }
        Ok(())
    }

    fn wants(&self, mode: MetricMode) -> bool {
        self.modes.is_empty() || self.modes.contains(&mode)
    }
}

fn stream(suite: SuiteName, space: usize, purpose: u64) -> u64 {
    (suite.stream() << 40) | ((space as u64) << 16) | purpose
}

/// One anchored check summarising `checks`: the worst `margin − tolerance`
/// over the asserted ones.
fn rollup(suite: SuiteName, id: &str, anchor: &str, checks: &[CheckResult]) -> CheckResult {
    let asserted: Vec<&CheckResult> =
        checks.iter().filter(|c| matches!(c.verdict, Outcome::Pass | Outcome::Fail)).collect();
    let worst = asserted.iter().max_by(|a, b| (a.margin - a.tolerance).total_cmp(&(b.margin - b.tolerance)));
    let margin = worst.map_or(f64::NEG_INFINITY, |c| c.margin - c.tolerance);
    let verdict = if asserted.iter().any(|c| c.failed()) { Outcome::Fail } else { Outcome::Pass };
    CheckResult::with_outcome(suite.name(), id, margin, 0.0, verdict)
        .anchor(anchor)
        .witness(worst.map(|c| c.id.clone()))
        .details(json!({ "checks": asserted.len() }))
}

fn property_check(suite: SuiteName, id: String, report: &PropertyReport) -> CheckResult {
    CheckResult::asserted(suite.name(), id, report.max_violation, report.tolerance)
        .witness(&report.witness)
        .details(json!({ "samples": report.samples, "params": report.params }))
}

fn gauge(space: &SpaceModel) -> Result<FNormMetric, SuiteError> {
    FNormMetric::unit_gauge(space).map_err(check_err)
}

fn convex_spaces(spaces: &[NamedSpace]) -> impl Iterator<Item = (usize, &NamedSpace)> {
    spaces.iter().enumerate().filter(|(_, s)| s.space.is_locally_convex())
}

// metric

fn metric_suite(cfg: &SuiteConfig, spaces: &[NamedSpace]) -> Result<Vec<CheckResult>, SuiteError> {
    const S: SuiteName = SuiteName::Metric;
    let mut out = Vec::new();
    let (mut additive, mut scaling, mut character) = (Vec::new(), Vec::new(), Vec::new());
    for (si, ns) in spaces.iter().enumerate() {
        let dim = ns.space.dim();
        for (mi, mode) in MetricMode::ALL.into_iter().enumerate() {
            if !cfg.wants(mode) || (mode != MetricMode::Standard && !ns.space.is_locally_convex()) {
                continue;
            }
            let metric = FNormMetric::build(&ns.space, &MetricConfig::new(mode).with_depth(cfg.depth))
                .map_err(check_err)?;
            let tag = format!("{}.{}", ns.name, mode.name());
            let mut r = rng(cfg.seed, stream(S, si, mi as u64));

            let a = audit_additive(&metric, &quadruples(&mut r, dim, cfg.samples, 0.5));
            let c = CheckResult::asserted(S.name(), format!("metric.additive.{tag}"), a.max_margin(), EXACT)
                .witness(&a.overall.witness)
                .details(json!({ "samples": a.samples(), "regions": a.regions }));
            additive.push(c.clone());
            out.push(c);

            for rep in audit_axioms(&metric, &triples(&mut r, dim, cfg.samples, 0.5)) {
                out.push(
                    CheckResult::asserted(S.name(), format!("metric.{}.{tag}", rep.check), rep.max_margin(), EXACT)
                        .witness(&rep.overall.witness)
                        .details(json!({ "samples": rep.samples() })),
                );
            }

            match mode {
                MetricMode::Standard => {
                    let pairs = crate::sampling::pairs(&mut r, dim, cfg.samples, 0.5);
                    let rep = audit_scaling(&metric, &pairs, &[0.1, 0.25, 0.5, 0.9]);
                    out.push(
                        CheckResult::info(S.name(), format!("metric.scaling.{tag}"), rep.max_margin())
                            .witness(&rep.overall.witness),
                    );
                }
                MetricMode::Gauge => {
                    let pairs = crate::sampling::pairs(&mut r, dim, cfg.samples, 0.5);
                    let rep = audit_scaling(&metric, &pairs, &[0.0, 0.1, 0.25, 0.5, 0.9, 1.0, 2.0, 10.0]);
                    let c = CheckResult::asserted(S.name(), format!("metric.scaling.{tag}"), rep.max_margin(), EXACT)
                        .witness(&rep.overall.witness)
                        .details(json!({ "samples": rep.samples() }));
                    scaling.push(c.clone());
                    out.push(c);
                }
                MetricMode::Paper => {
                    let (inside, capped) = paper_scaling(&metric, cfg, &tag, &mut r);
                    scaling.push(inside.clone());
                    out.push(inside.clone());
                    out.push(capped);
                    let (sandwich, routes) = paper_characterization(&metric, cfg, &tag, &mut r)?;
                    character.push(sandwich.clone());
                    character.push(routes.clone());
                    out.push(sandwich);
                    out.push(routes);
                }
            }
        }
    }
    out.push(rollup(S, "metric.additive", "additive-inequality", &additive));
    out.push(rollup(S, "metric.scaling", "scaling-inequality", &scaling));
    out.push(rollup(S, "metric.characterization", "metric-characterization", &character));
    Ok(out)
}

fn size_fn(metric: &FNormMetric) -> impl Fn(&Vector) -> f64 + '_ {
    move |v: &Vector| {
        metric.gauge_u(v).ok().flatten().unwrap_or(0.0) * (-(metric.n0() as f64)).exp2()
    }
}

/// Pairs whose difference has scaled gauge `g`, drawn from `range`.
fn pairs_at_size(
    metric: &FNormMetric,
    r: &mut impl Rng,
    n: usize,
    range: std::ops::Range<f64>,
) -> Vec<(Vector, Vector)> {
    let dim = metric.space().dim();
    let size = size_fn(metric);
    (0..n)
        .map(|_| {
            let x = uniform_vector(r, dim, 0.5);
            let g = r.gen_range(range.clone());
            let v = vector_of_size(r, dim, g, &size);
            let y = &x + &v;
            (x, y)
        })
        .collect()
}

fn paper_scaling(metric: &FNormMetric, cfg: &SuiteConfig, tag: &str, r: &mut impl Rng) -> (CheckResult, CheckResult) {
    let slack = dyadic_slack(metric.depth());
    let lambdas: Vec<f64> = (0..=4).map(|k| (-(k as f64)).exp2()).collect();
    let inside = pairs_at_size(metric, r, cfg.samples, 1e-3..1.0 - slack);
    let rep = audit_scaling(metric, &inside, &lambdas);
    let inside_check = CheckResult::asserted(SuiteName::Metric.name(), format!("metric.scaling.{tag}"), rep.max_margin(), slack)
        .witness(&rep.overall.witness)
        .details(json!({ "samples": rep.samples(), "regions": rep.regions }));
    let capped = pairs_at_size(metric, r, cfg.samples / 4 + 1, 1.0..3.0);
    let rep = audit_scaling(metric, &capped, &lambdas);
    let capped_check = CheckResult::info(SuiteName::Metric.name(), format!("metric.scaling-capped.{tag}"), rep.max_margin())
        .witness(&rep.overall.witness)
        .details(json!({ "samples": rep.samples(), "regions": rep.regions }));
    (inside_check, capped_check)
}

/// Sandwich `g <= |x| <= g + 2^-depth` and agreement of the two membership
/// routes for the representing index set.
fn paper_characterization(
    metric: &FNormMetric,
    cfg: &SuiteConfig,
    tag: &str,
    r: &mut impl Rng,
) -> Result<(CheckResult, CheckResult), SuiteError> {
    let slack = dyadic_slack(metric.depth());
    let dim = metric.space().dim();
    let size = size_fn(metric);
    let n = (cfg.samples / 10).max(1);
    let (mut sandwich, mut sandwich_w) = (f64::NEG_INFINITY, None);
    let (mut routes, mut routes_w) = (f64::NEG_INFINITY, None);
    for _ in 0..n {
        let g = r.gen_range(1e-3..1.0 - slack);
        let x = vector_of_size(r, dim, g, &size);
        let g = size(&x);
        let norm = metric.norm(&x).map_err(check_err)?;
        let m = (g - norm).max(norm - g - slack);
        if m > sandwich {
            sandwich = m;
            sandwich_w = Some(x.coords().to_vec());
        }
        let Some(h) = metric.representation(&x).map_err(check_err)? else {
            continue;
        };
        let margin = match metric.membership(&h.indices(), &x) {
            Ok(mem) => (mem.shortcut_ratio - mem.decomposition_scale).abs().max(mem.shortcut_ratio - 1.0),
            Err(crate::metric::MetricError::RouteDisagreement { shortcut, decomposition }) => {
                (shortcut - decomposition).abs()
            }
            Err(e) => return Err(check_err(e)),
        };
        if margin > routes {
            routes = margin;
            routes_w = Some((h.indices(), x.coords().to_vec()));
        }
    }
    Ok((
        CheckResult::asserted(SuiteName::Metric.name(), format!("metric.sandwich.{tag}"), sandwich, EXACT)
            .witness(sandwich_w)
            .details(json!({ "samples": n, "slack": slack })),
        CheckResult::asserted(SuiteName::Metric.name(), format!("metric.membership-routes.{tag}"), routes, LP_BAND)
            .witness(routes_w)
            .details(json!({ "samples": n })),
    ))
}

// counterexample

fn counterexample_suite(cfg: &SuiteConfig, spaces: &[NamedSpace]) -> Result<Vec<CheckResult>, SuiteError> {
    const S: SuiteName = SuiteName::Counterexample;
    let mut models: Vec<(String, SpaceModel)> = [0.25, 0.5, 0.75, 1.0]
        .into_iter()
        .map(|p| (format!("lp-{p}"), SpaceModel::lp_grid(4, p, 1.0).expect("valid lp grid")))
        .collect();
    models.extend(spaces.iter().filter(|s| s.space.kind() == SpaceKind::LpGrid).map(|s| (s.name.clone(), s.space.clone())));
    let mut out = Vec::new();
    let mut asserted = Vec::new();
    for (si, (name, space)) in models.iter().enumerate() {
        let dim = space.dim();
        let mut r = rng(cfg.seed, stream(S, si, 0));
        let mut pairs = vec![
            (Vector::zeros(dim), step_function(dim, 0, 1, 1.0)),
            (step_function(dim, 0, dim.div_ceil(2), 0.5), step_function(dim, dim / 2, dim, 2.0)),
        ];
        for _ in 0..8 {
            let a = r.gen_range(0..dim);
            let b = r.gen_range(a + 1..=dim);
            pairs.push((Vector::zeros(dim), step_function(dim, a, b, r.gen_range(0.1..3.0))));
        }
        let p = match space.params() {
            crate::space::SpaceParams::LpGrid { p, .. } => *p,
            _ => unreachable!("filtered to lp grids"),
        };
        let (mut closed, mut strict) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut witness = None;
        for lambda in [0.1, 0.25, 0.5, 0.9] {
            for (x, y) in &pairs {
                let v = lp_counterexample(space, lambda, x, y).map_err(check_err)?;
                closed = closed.max((v.lhs - v.lhs_closed_form).abs());
                // p < 1: λ^p·d − λ·d must be positive; p = 1: equality
                let m = if p < 1.0 { EXACT - (v.lhs - v.rhs_strong) } else { (v.lhs - v.rhs_strong).abs() - EXACT };
                if m > strict {
                    strict = m;
                    witness = Some(v);
                }
            }
        }
        let c = CheckResult::asserted(S.name(), format!("counterexample.closed-form.{name}"), closed, EXACT);
        asserted.push(c.clone());
        out.push(c);
        let id = if p < 1.0 { "violation" } else { "boundary" };
        let c = CheckResult::asserted(S.name(), format!("counterexample.{id}.{name}"), strict, 0.0).witness(witness);
        asserted.push(c.clone());
        out.push(c);
    }
    let space = SpaceModel::lp_grid(4, cfg.p, 1.0).map_err(check_err)?;
    let v = lp_counterexample(&space, cfg.lambda, &Vector::zeros(4), &step_function(4, 0, 1, 1.0)).map_err(check_err)?;
    out.push(
        CheckResult::info(S.name(), "counterexample.requested", v.lhs - v.rhs_strong).details(json!({
            "p": v.p,
            "lambda": v.lambda,
            "distance": v.distance,
            "lhs": v.lhs,
            "rhs": v.rhs_strong,
            "violated": v.violated,
        })),
    );
    out.push(rollup(S, "counterexample", "lp-counterexample", &asserted));
    Ok(out)
}

// convexity

fn random_weights(r: &mut impl Rng) -> BarycentricWeights {
    let raw: [f64; 3] = std::array::from_fn(|_| r.gen_range(0.0..1.0));
    let total: f64 = raw.iter().sum();
    BarycentricWeights::new(raw.iter().map(|w| w / total).collect()).expect("normalized weights")
}

fn convexity_suite(cfg: &SuiteConfig, spaces: &[NamedSpace]) -> Result<Vec<CheckResult>, SuiteError> {
    const S: SuiteName = SuiteName::Convexity;
    let mut out = Vec::new();
    for (si, ns) in convex_spaces(spaces) {
        let metric = gauge(&ns.space)?;
        let dim = ns.space.dim();
        let name = &ns.name;
        let mut r = rng(cfg.seed, stream(S, si, 0));

        let mut tcs = PropertyReport::new("tcs", CONVEXITY);
        let mut tmcs = PropertyReport::new("tmcs", CONVEXITY);
        for [u, x, y] in triples(&mut r, dim, cfg.samples, 1.0) {
            let t = r.gen_range(0.0..=1.0);
            let v = check_tcs(&metric, &u, &x, &y, t).map_err(check_err)?;
            tcs.record(v, || vec![u.coords().to_vec(), x.coords().to_vec(), y.coords().to_vec(), vec![t]]);
        }
        for [u, x, y, z] in quadruples(&mut r, dim, cfg.samples, 1.0) {
            let w = random_weights(&mut r);
            let v = check_tmcs(&metric, &u, &x, &y, &z, &w).map_err(check_err)?;
            tmcs.record(v, || {
                vec![u.coords().to_vec(), x.coords().to_vec(), y.coords().to_vec(), z.coords().to_vec(), w.values().to_vec()]
            });
        }
        out.push(property_check(S, format!("convexity.tcs.{name}"), &tcs));
        out.push(property_check(S, format!("convexity.tmcs.{name}"), &tmcs));

        let tuples: Vec<_> = quadruples(&mut r, dim, cfg.samples, 1.0)
            .into_iter()
            .map(|q| {
                let t = r.gen_range(0.0..=1.0);
                (q, t)
            })
            .collect();
        let p = check_property_p(&metric, &tuples, CONVEXITY).map_err(check_err)?;
        out.push(property_check(S, format!("convexity.property-p.conventional.{name}"), &p.conventional));
        out.push(
            CheckResult::info(S.name(), format!("convexity.property-p.printed.{name}"), p.printed.max_violation)
                .witness(&p.printed.witness),
        );

        let generators = uniform_cloud(&mut r, dim, 4, 1.0, "generators");
        let hull = HullGrid::new(&generators, 4, cfg.budget).map_err(check_err)?;
        for radius in [0.05, 0.1, 0.5] {
            let rep = check_stability(&metric, &hull, radius, cfg.samples, CONVEXITY, &mut r).map_err(check_err)?;
            out.push(property_check(S, format!("convexity.stability.r{radius}.{name}"), &rep));
        }

        let f = uniform_cloud(&mut r, dim, 3, 0.5, "F");
        let levels = check_property_q(&metric, &f, &[0.5, 0.25], cfg.budget).map_err(check_err)?;
        let worst = levels.iter().map(|l| l.hull_radius - l.eps).fold(f64::NEG_INFINITY, f64::max);
        let verdict = if levels.iter().all(|l| l.passed) { Outcome::Pass } else { Outcome::Fail };
        out.push(
            CheckResult::with_outcome(S.name(), format!("convexity.property-q.{name}"), worst, 0.0, verdict)
                .details(&levels),
        );
    }
    let anchored = rollup(S, "convexity", "convex-structures", &out);
    out.push(anchored);
    Ok(out)
}

// mnc

/// Shipped decreasing families `M_n = ⋃_{j>=n} (anchor + 2^-j·base)` on the
/// plane: balls around 0, segments from 0, and boxes with a common corner.
pub fn shipped_families(metric: &FNormMetric) -> Vec<(String, Vec<PointCloud>)> {
    let origin = Vector::zeros(2);
    let corner = Vector::new(vec![0.3, -0.2]).expect("finite");
    let ball = ball_grid(metric, &origin, 1.0, 5);
    let segment = segment_grid(&origin, &Vector::new(vec![1.0, 0.0]).expect("finite"), 8, "segment");
    let cube = box_grid(&[0.0, 0.0], &[1.0, 1.0], 4, "box");
    vec![
        ("balls".into(), dyadic_family(&ball, &origin, 0..6, 12)),
        ("segments".into(), dyadic_family(&segment, &origin, 0..6, 12)),
        ("boxes".into(), dyadic_family(&cube, &corner, 0..6, 12)),
    ]
}

fn mnc_suite(cfg: &SuiteConfig, spaces: &[NamedSpace]) -> Result<Vec<CheckResult>, SuiteError> {
    const S: SuiteName = SuiteName::Mnc;
    let mut out = Vec::new();
    let (mut duality, mut items_all) = (Vec::new(), Vec::new());
    let grid = EpsGrid::uniform(8.0, 800);
    for (si, ns) in convex_spaces(spaces) {
        let metric = gauge(&ns.space)?;
        let dim = ns.space.dim();
        let name = &ns.name;
        let mut r = rng(cfg.seed, stream(S, si, 0));
        let pairs: Vec<_> = (0..cfg.pairs)
            .map(|_| (uniform_cloud(&mut r, dim, 8, 1.0, "M"), uniform_cloud(&mut r, dim, 6, 1.0, "N")))
            .collect();
        for item in check_mnc_properties(&metric, &pairs, &grid, 2).map_err(check_err)? {
            let c = CheckResult::asserted(S.name(), format!("mnc.item.{}.{name}", item.item), item.margin, item.tolerance)
                .witness(item.witness_pair)
                .details(json!({ "relation": item.relation, "raw_margin": item.raw_margin, "pairs": item.pairs }));
            items_all.push(c.clone());
            out.push(c);
        }

        let (mut worst, mut witness) = (f64::NEG_INFINITY, None);
        for k in 0..10 {
            let m = uniform_cloud(&mut r, dim, 16, 1.0, "M");
            for eps in [0.5, 0.25] {
                let net = greedy_net(&metric, &m, eps).map_err(check_err)?;
                let packing = packing_lower(&metric, &m, eps).map_err(check_err)?;
                net.verify(&metric, &m).map_err(check_err)?;
                packing.verify(&metric, &m).map_err(check_err)?;
                let margin = packing.count() as f64 - net.len() as f64;
                if margin > worst {
                    worst = margin;
                    witness = Some((k, eps));
                }
            }
        }
        let c = CheckResult::asserted(S.name(), format!("mnc.duality.{name}"), worst, 0.0).witness(witness);
        duality.push(c.clone());
        out.push(c);
    }

    let grids: Vec<EpsGrid> = (1..=5).map(|j| EpsGrid::geometric(1.0, 0.5, j)).collect();
    let mut trend = Vec::new();
    let mut viii = Vec::new();
    for dim in 1..=3 {
        let space = SpaceModel::c_grid(dim, 1, 1.0).expect("valid c-grid");
        let metric = gauge(&space)?;
        let ball = ball_grid(&metric, &Vector::zeros(dim), 1.0, 5);
        let item = ball_refinement(&metric, &ball, &grids).map_err(check_err)?;
        viii.push(CheckResult::asserted(S.name(), format!("mnc.item.viii.c-grid-{dim}"), item.margin, item.tolerance));
        let cover = greedy_net(&metric, &ball, 0.25).map_err(check_err)?;
        trend.push(json!({ "dim": dim, "points": ball.len(), "centers_at_quarter": cover.len() }));
    }
    items_all.extend(viii.iter().cloned());
    out.extend(viii);
    out.push(CheckResult::info(S.name(), "mnc.item.viii.trend", f64::NAN).details(trend));

    let plane = gauge(&SpaceModel::c_grid(2, 1, 1.0).expect("valid c-grid"))?;
    for (name, sets) in shipped_families(&plane) {
        let family = DecreasingFamily::new(&plane, sets, 0.0).map_err(check_err)?;
        let probe = nested_intersection_probe(&plane, &family, 1e-3).map_err(check_err)?;
        let c = CheckResult::asserted(S.name(), format!("mnc.item.ix.{name}"), probe.max_distance, 1e-3)
            .witness(probe.point.coords())
            .details(json!({ "alpha_upper": probe.alpha_upper }));
        items_all.push(c.clone());
        out.push(c);
    }

    out.push(rollup(S, "mnc.definition", "hausdorff-mnc", &duality));
    out.push(rollup(S, "mnc.proposition", "mnc-proposition", &items_all));
    Ok(out)
}

// hull invariance

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullCase {
    pub points: usize,
    pub co_points: usize,
    /// `upper(M)`, the radius the input net is certified at.
    pub eta: f64,
    pub eps: f64,
    pub grid_gap: f64,
    pub lower_m: f64,
    pub lower_co: f64,
    /// Covering radius of the transferred net over the hull sample.
    pub upper_co: f64,
    pub transfer_centers: usize,
    pub tight_bound: f64,
    pub asserted_bound: f64,
    pub hinge_margin: f64,
}

/// Transfers the `k`-center net of `cloud` to its hull sample and brackets
/// both sides.
pub fn hull_invariance_case(
    metric: &FNormMetric,
    cloud: &PointCloud,
    k: usize,
    eps: f64,
    resolution: usize,
    budget: usize,
    r: &mut impl Rng,
) -> Result<HullCase, SuiteError> {
    let top = 2.0 * crate::convexity::diameter(metric, cloud) + 1.0;
    let grid = EpsGrid::uniform(top, 4000);
    let bm = alpha_bounds(metric, cloud, &grid, NetBudget::Centers(k)).map_err(check_err)?;
    let (cert, sample) =
        net_transfer_co(metric, cloud, &bm.net, eps, resolution, budget, 200, r).map_err(check_err)?;
    cert.net.verify(metric, &sample.cloud).map_err(check_err)?;
    let mut bc = alpha_bounds(metric, &sample.cloud, &grid, NetBudget::Centers(k)).map_err(check_err)?;
    bc.offer_packing(metric, &sample.cloud, bm.packing.clone()).map_err(check_err)?;
    bc.verify(metric, &sample.cloud).map_err(check_err)?;
    Ok(HullCase {
        points: cloud.len(),
        co_points: sample.cloud.len(),
        eta: cert.eta,
        eps,
        grid_gap: cert.grid_gap,
        lower_m: bm.lower,
        lower_co: bc.lower,
        upper_co: cert.covered_radius(),
        transfer_centers: cert.net.len(),
        tight_bound: cert.tight_bound,
        asserted_bound: cert.asserted_bound,
        hinge_margin: cert.hinge_margin,
    })
}

fn hull_invariance_suite(cfg: &SuiteConfig, spaces: &[NamedSpace]) -> Result<Vec<CheckResult>, SuiteError> {
    const S: SuiteName = SuiteName::HullInvariance;
    let mut targets: Vec<(usize, NamedSpace)> =
        convex_spaces(spaces).filter(|(_, s)| s.space.dim() <= 8).map(|(i, s)| (i, s.clone())).collect();
    if targets.is_empty() {
        let space = SpaceModel::c_grid(6, 3, 0.25).expect("valid c-grid");
        targets.push((usize::MAX >> 24, NamedSpace { name: "c-grid-6".into(), space }));
    }
    let mut out = Vec::new();
    for (si, ns) in &targets {
        let metric = gauge(&ns.space)?;
        let mut r = rng(cfg.seed, stream(S, *si, 0));
        let (mut upper, mut tight, mut lower) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        let (mut wu, mut wl) = (None, None);
        for c in 0..cfg.clouds {
            let n = r.gen_range(4..=40);
            let cloud = uniform_cloud(&mut r, ns.space.dim(), n, 1.0, "M");
            let case = hull_invariance_case(&metric, &cloud, 3, cfg.eps, 2, cfg.budget, &mut r)?;
            if case.upper_co - case.asserted_bound > upper {
                upper = case.upper_co - case.asserted_bound;
                wu = Some((c, case.clone()));
            }
            tight = tight.max(case.upper_co - case.tight_bound);
            if case.lower_m - case.lower_co > lower {
                lower = case.lower_m - case.lower_co;
                wl = Some((c, case));
            }
        }
        let name = &ns.name;
        out.push(CheckResult::asserted(S.name(), format!("hull.upper.{name}"), upper, 0.0).witness(wu));
        out.push(CheckResult::asserted(S.name(), format!("hull.lower.{name}"), lower, 0.0).witness(wl));
        out.push(CheckResult::info(S.name(), format!("hull.upper-tight.{name}"), tight));
    }
    let anchored = rollup(S, "hull", "hull-invariance", &out);
    out.push(anchored);
    Ok(out)
}

// fixedpoint

/// `F(x) = x/2 + 0.04·G·tanh(x) + c` with `c_i = 0.1·sin(i + 1)` and
/// kernel width `0.2`.
pub fn smoothing_operator(dim: usize) -> OperatorSpec {
    OperatorSpec::ContractionPlusSmoothing {
        lambda: 0.5,
        shift: (0..dim).map(|i| 0.1 * (i as f64 + 1.0).sin()).collect(),
        kernel_width: 0.2,
        smoothing: 0.04,
    }
}

/// `±radius·e_i`.
pub fn cross_polytope(dim: usize, radius: f64) -> PointCloud {
    let points = (0..dim)
        .flat_map(|i| [Vector::basis(dim, i).scale(radius), Vector::basis(dim, i).scale(-radius)])
        .collect();
    PointCloud::new(points, "cross-polytope").expect("nonempty")
}

fn fixedpoint_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    const S: SuiteName = SuiteName::Fixedpoint;
    let dim = 16;
    let space = SpaceModel::c_grid(dim, 4, 1.0 / dim as f64).expect("valid c-grid");
    let metric = gauge(&space)?;
    let op = smoothing_operator(dim);
    let config = DarboConfig { tol: cfg.tol, max_iter: 60, resolution: 2, budget: cfg.budget, ..DarboConfig::default() };
    let trace = darbo_solve(&metric, &op, &cross_polytope(dim, 4.0), &config).map_err(check_err)?;
    let residual = trace.recompute_residual(&metric, &op).map_err(check_err)?;
    let nesting = trace.iterations.iter().filter_map(|s| s.nesting_distance).fold(0.0, f64::max);
    let mut out = vec![
        CheckResult::asserted(S.name(), "fixedpoint.darbo.residual", residual, cfg.tol)
            .witness(trace.x_star.coords())
            .details(json!({ "plain_steps": trace.plain_steps, "gamma_hat": trace.gamma_hat })),
        CheckResult::asserted(S.name(), "fixedpoint.darbo.decay", trace.decay_margin(0.55), 0.0).details(
            trace.iterations.iter().map(|s| json!([s.n, s.bounds.upper, s.grid_gap, s.diameter])).collect::<Vec<_>>(),
        ),
        CheckResult::with_outcome(
            S.name(),
            "fixedpoint.darbo.iterations",
            (trace.iterations.len() - 1) as f64,
            60.0,
            if trace.converged { Outcome::Pass } else { Outcome::Fail },
        ),
        CheckResult::info(S.name(), "fixedpoint.darbo.nesting", nesting),
    ];

    let mut r = rng(cfg.seed, stream(S, 0, 0));
    let trials: Vec<PointCloud> = (0..10).map(|_| uniform_cloud(&mut r, dim, 12, 1.0, "trial")).collect();
    let grid = EpsGrid::geometric(8.0, 0.5f64.powf(0.125), 240);
    let half = estimate_upper_char(&metric, &OperatorSpec::scaling(0.5, dim), &trials, &grid).map_err(check_err)?;
    out.push(
        CheckResult::asserted(S.name(), "fixedpoint.upper-char.half", (half.gamma - 0.5).abs() - half.slack, 0.0)
            .details(&half),
    );
    for (id, op) in [("identity", OperatorSpec::identity(dim)), ("constant", OperatorSpec::constant(vec![0.5; dim]))] {
        let e = estimate_upper_char(&metric, &op, &trials, &grid).map_err(check_err)?;
        out.push(CheckResult::info(S.name(), format!("fixedpoint.upper-char.{id}"), e.gamma).details(&e));
    }
    let shift: Vec<f64> = (0..dim).map(|i| (i as f64).cos()).collect();
    for (id, op, expected) in [
        ("half", OperatorSpec::scaling(0.5, dim), Verdict::Condensing),
        ("identity", OperatorSpec::identity(dim), Verdict::NotCondensing),
        ("translation", OperatorSpec::translation(shift), Verdict::NotCondensing),
    ] {
        let rep = sadovskii_check(&metric, &op, &trials, &grid).map_err(check_err)?;
        let got = rep.overall();
        out.push(
            CheckResult::asserted(S.name(), format!("fixedpoint.sadovskii.{id}"), if got == expected { 0.0 } else { 1.0 }, 0.0)
                .details(json!({ "expected": expected, "verdict": got, "trials": rep.trials })),
        );
    }
    let anchored = rollup(S, "fixedpoint", "condensing-fixed-points", &out);
    out.push(anchored);
    Ok(out)
}

#[derive(Serialize)]
struct EchoedConfig<'a> {
    #[serde(flatten)]
    config: &'a SuiteConfig,
    spaces: Vec<(&'a str, SpaceDescriptor)>,
}

fn checks_for(name: SuiteName, cfg: &SuiteConfig, spaces: &[NamedSpace]) -> Result<Vec<CheckResult>, SuiteError> {
    match name {
        SuiteName::Metric => metric_suite(cfg, spaces),
        SuiteName::Convexity => convexity_suite(cfg, spaces),
        SuiteName::Mnc => mnc_suite(cfg, spaces),
        SuiteName::HullInvariance => hull_invariance_suite(cfg, spaces),
        SuiteName::Fixedpoint => fixedpoint_suite(cfg),
        SuiteName::Counterexample => counterexample_suite(cfg, spaces),
        SuiteName::All => {
            let mut all = Vec::new();
            for n in SuiteName::ALL.into_iter().filter(|n| *n != SuiteName::All) {
                all.extend(checks_for(n, cfg, spaces)?);
            }
            Ok(all)
        }
    }
}

/// `run_suite`.
pub fn run_suite(name: SuiteName, cfg: &SuiteConfig, spaces: &[NamedSpace]) -> Result<Report, SuiteError> {
    cfg.validate()?;
    if spaces.is_empty() {
        return Err(SuiteError::Malformed("no spaces to run on".into()));
    }
    let checks = checks_for(name, cfg, spaces)?;
    let mut seen = std::collections::BTreeSet::new();
    for c in &checks {
        if !seen.insert(c.id.as_str()) {
            return Err(SuiteError::Check(format!("duplicate check id {}", c.id)));
        }
    }
    let echoed = EchoedConfig {
        config: cfg,
        spaces: spaces.iter().map(|s| (s.name.as_str(), s.space.descriptor())).collect(),
    };
    Ok(Report::new(name.name(), cfg.seed, echoed, checks))
}
