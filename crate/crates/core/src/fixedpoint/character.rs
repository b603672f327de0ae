//! Bound-level estimates of `[F]_A` and condensing verdicts, both with a
//! one-center budget.

use serde::Serialize;

use super::operator::OperatorSpec;
use super::FixedPointError;
use crate::metric::FNormMetric;
use crate::mnc::{alpha_bounds, AlphaBounds, EpsGrid, NetBudget};
use crate::space::PointCloud;

/// Ties between exact bounds closer than this count as equal.
pub const VERDICT_TOL: f64 = 1e-9;

fn one_center(metric: &FNormMetric, cloud: &PointCloud, grid: &EpsGrid) -> Result<AlphaBounds, FixedPointError> {
    Ok(alpha_bounds(metric, cloud, grid, NetBudget::Centers(1))?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperCharEstimate {
    /// `max upper(F(M)) / lower(M)` over trials with `lower(M) > 0`.
    pub gamma: f64,
    /// `max upper(M) / lower(M) − 1` over the same trials.
    pub slack: f64,
    pub witness: usize,
    pub ratios: Vec<Option<f64>>,
    pub skipped: Vec<usize>,
}

/// `estimate_upper_char`: an upper estimate of the ratio on the tested sets,
/// not a proof of `[F]_A`.
pub fn estimate_upper_char(
    metric: &FNormMetric,
    op: &OperatorSpec,
    trials: &[PointCloud],
    grid: &EpsGrid,
) -> Result<UpperCharEstimate, FixedPointError> {
    let f = op.compile()?;
    let mut ratios = Vec::with_capacity(trials.len());
    let mut skipped = Vec::new();
    let mut best: Option<(f64, usize)> = None;
    let mut slack = 0.0f64;
    for (i, m) in trials.iter().enumerate() {
        let bm = one_center(metric, m, grid)?;
        if bm.lower <= 0.0 {
            skipped.push(i);
            ratios.push(None);
            continue;
        }
        let bf = one_center(metric, &f.apply_cloud(m)?, grid)?;
        let ratio = bf.upper_or_inf() / bm.lower;
        slack = slack.max(bm.upper_or_inf() / bm.lower - 1.0);
        if best.is_none_or(|(g, _)| ratio > g) {
            best = Some((ratio, i));
        }
        ratios.push(Some(ratio));
    }
    let (gamma, witness) = best.ok_or(FixedPointError::NoTrials)?;
    Ok(UpperCharEstimate { gamma, slack, witness, ratios, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Condensing,
    NotCondensing,
    Inconclusive,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialVerdict {
    pub trial: usize,
    pub verdict: Verdict,
    pub lower_set: f64,
    pub upper_set: f64,
    pub lower_image: f64,
    pub upper_image: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SadovskiiReport {
    pub trials: Vec<TrialVerdict>,
}

impl SadovskiiReport {
    /// The common verdict over nondegenerate trials, `Inconclusive` on mixed
    /// evidence.
    pub fn overall(&self) -> Verdict {
        let mut seen = self.trials.iter().map(|t| t.verdict).filter(|v| *v != Verdict::Degenerate);
        let Some(first) = seen.next() else {
            return Verdict::Degenerate;
        };
        if seen.all(|v| v == first) {
            first
        } else {
            Verdict::Inconclusive
        }
    }
}

/// `sadovskii_check`: condensing when `upper(F(M)) < lower(M)`, not
/// condensing when `lower(F(M)) >= upper(M)` up to [`VERDICT_TOL`], and
/// inconclusive when the intervals overlap otherwise. Uses the certified
/// exact bounds of each side.
pub fn sadovskii_check(
    metric: &FNormMetric,
    op: &OperatorSpec,
    trials: &[PointCloud],
    grid: &EpsGrid,
) -> Result<SadovskiiReport, FixedPointError> {
    let f = op.compile()?;
    let mut out = Vec::with_capacity(trials.len());
    for (trial, m) in trials.iter().enumerate() {
        let bm = one_center(metric, m, grid)?;
        let bf = one_center(metric, &f.apply_cloud(m)?, grid)?;
        let verdict = if bm.lower_exact <= 0.0 {
            Verdict::Degenerate
        } else if bf.upper_exact < bm.lower_exact {
            Verdict::Condensing
        } else if bf.lower_exact >= bm.upper_exact - VERDICT_TOL {
            Verdict::NotCondensing
        } else {
            Verdict::Inconclusive
        };
        out.push(TrialVerdict {
            trial,
            verdict,
            lower_set: bm.lower_exact,
            upper_set: bm.upper_exact,
            lower_image: bf.lower_exact,
            upper_image: bf.upper_exact,
        });
    }
    Ok(SadovskiiReport { trials: out })
}
