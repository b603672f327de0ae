//! Violation searches for the scaling inequality, the additive inequality and
//! the metric axioms. Margins are `lhs − rhs`; a check holds when the worst
//! margin stays below its tolerance.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{FNormMetric, MetricMode};
use crate::space::Vector;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RegionStats {
    pub samples: usize,
    pub max_margin: Option<f64>,
    pub witness: Option<Vec<Vec<f64>>>,
}

impl RegionStats {
    fn record(&mut self, margin: f64, witness: impl FnOnce() -> Vec<Vec<f64>>) {
        self.samples += 1;
        if self.max_margin.is_none_or(|m| margin > m) {
            self.max_margin = Some(margin);
            self.witness = Some(witness());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub check: String,
    pub mode: MetricMode,
    pub overall: RegionStats,
    pub regions: BTreeMap<String, RegionStats>,
}

impl AuditReport {
    fn new(check: &str, mode: MetricMode) -> Self {
        AuditReport {
            check: check.to_owned(),
            mode,
            overall: RegionStats::default(),
            regions: BTreeMap::new(),
        }
    }

    fn record(&mut self, region: &str, margin: f64, witness: impl Fn() -> Vec<Vec<f64>>) {
        self.overall.record(margin, &witness);
        self.regions.entry(region.to_owned()).or_default().record(margin, witness);
    }

    /// Worst margin, or `-inf` for an empty audit.
    pub fn max_margin(&self) -> f64 {
        self.overall.max_margin.unwrap_or(f64::NEG_INFINITY)
    }

    pub fn region_margin(&self, region: &str) -> Option<f64> {
        self.regions.get(region).and_then(|r| r.max_margin)
    }

    pub fn samples(&self) -> usize {
        self.overall.samples
    }
}

fn coords(vs: &[&Vector]) -> Vec<Vec<f64>> {
    vs.iter().map(|v| v.coords().to_vec()).collect()
}

/// `audit_scaling`: worst `d(λx, λy) − λ d(x, y)`.
///
/// Paper-mode samples are split into `inside` (the difference lies in some
/// `V_H`) and `capped`; other modes use a single `all` region.
pub fn audit_scaling(metric: &FNormMetric, pairs: &[(Vector, Vector)], lambdas: &[f64]) -> AuditReport {
    let mut report = AuditReport::new("scaling", metric.mode());
    for (x, y) in pairs {
        let d = metric.dist(x, y);
        let region = match metric.mode() {
            MetricMode::Paper if metric.is_inside(&(y - x)) => "inside",
            MetricMode::Paper => "capped",
            _ => "all",
        };
        for &lambda in lambdas {
            let lx = x.scale(lambda);
            let ly = y.scale(lambda);
            let margin = metric.dist(&lx, &ly) - lambda * d;
            report.record(region, margin, || {
                let mut w = coords(&[x, y]);
                w.push(vec![lambda]);
                w
            });
        }
    }
    report
}

/// `audit_additive`: worst `d(x1 + x2, y1 + y2) − d(x1, y1) − d(x2, y2)`.
pub fn audit_additive(metric: &FNormMetric, quadruples: &[[Vector; 4]]) -> AuditReport {
    let mut report = AuditReport::new("additive", metric.mode());
    for [x1, y1, x2, y2] in quadruples {
        let lhs = metric.dist(&(x1 + x2), &(y1 + y2));
        let margin = lhs - metric.dist(x1, y1) - metric.dist(x2, y2);
        report.record("all", margin, || coords(&[x1, y1, x2, y2]));
    }
    report
}

/// Symmetry, triangle inequality, identity and translation invariance on
/// triples `(x, y, z)`; `z` doubles as the translation.
pub fn audit_axioms(metric: &FNormMetric, triples: &[[Vector; 3]]) -> Vec<AuditReport> {
    let mode = metric.mode();
    let mut symmetry = AuditReport::new("symmetry", mode);
    let mut triangle = AuditReport::new("triangle", mode);
    let mut identity = AuditReport::new("identity", mode);
    let mut translation = AuditReport::new("translation", mode);
    for [x, y, z] in triples {
        let dxy = metric.dist(x, y);
        let w = || coords(&[x, y, z]);
        symmetry.record("all", (dxy - metric.dist(y, x)).abs(), w);
        triangle.record("all", metric.dist(x, z) - dxy - metric.dist(y, z), w);
        // d(x, x) = 0, and d(x, y) > 0 for x != y
        let separation = if x == y || dxy > 0.0 { 0.0 } else { f64::INFINITY };
        identity.record("all", metric.dist(x, x).max(separation), w);
        translation.record("all", (metric.dist(&(z + x), &(z + y)) - dxy).abs(), w);
    }
    vec![symmetry, triangle, identity, translation]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricConfig;
    use crate::space::SpaceModel;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn standard_metric_fails_scaling() {
        let line = SpaceModel::c_grid(1, 1, 1.0).unwrap();
        let d = FNormMetric::standard(&line);
        let report = audit_scaling(&d, &[(v(&[0.0]), v(&[2.0]))], &[0.5]);
        assert!((report.max_margin() - (0.25 - 1.0 / 6.0)).abs() < 1e-15);
        assert_eq!(report.overall.witness.as_ref().unwrap()[2], vec![0.5]);
    }

    #[test]
    fn paper_capped_region_is_recorded() {
        let s = SpaceModel::c_grid(2, 1, 1.0).unwrap();
        let d = FNormMetric::build(&s, &MetricConfig::new(MetricMode::Paper).with_depth(4)).unwrap();
        let report = audit_scaling(&d, &[(v(&[0.0, 0.0]), v(&[3.0, 0.0]))], &[0.5]);
        // |1.5·e1| is capped at 1 while λ·|3·e1| = 0.5
        assert_eq!(report.region_margin("capped"), Some(0.5));
        assert_eq!(report.region_margin("inside"), None);
    }

    #[test]
    fn degenerate_additive_quadruple() {
        let s = SpaceModel::c_grid(2, 2, 1.0).unwrap();
        let d = FNormMetric::unit_gauge(&s).unwrap();
        let x = v(&[0.2, -0.1]);
        let report = audit_additive(&d, &[[x.clone(), x.clone(), v(&[1.0, 2.0]), v(&[0.5, 0.5])]]);
        assert!(report.max_margin().abs() < 1e-15);
    }

    #[test]
    fn axioms_on_a_small_sample() {
        let s = SpaceModel::seq_product(vec![1, 2]).unwrap();
        let d = FNormMetric::standard(&s);
        let triples = [[v(&[0.0, 1.0, 2.0]), v(&[1.0, 1.0, -1.0]), v(&[3.0, 0.0, 0.5])]];
        for report in audit_axioms(&d, &triples) {
            assert!(report.max_margin() <= 1e-12, "{}: {}", report.check, report.max_margin());
        }
    }
}
