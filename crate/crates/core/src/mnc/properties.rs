//! Bound-level checks of the structural properties of the measure.
//!
//! Heuristic bounds are not monotone on their own, so each relation is
//! checked on best-known bounds: the witness the standard argument builds
//! (a restricted, translated, scaled, summed or united net or packing) is
//! offered to the bound it should improve and re-verified there. The margin
//! of the raw heuristic bounds is reported next to it.

use serde::Serialize;

use super::bounds::{alpha_bounds, AlphaBounds, EpsGrid, NetBudget};
use super::MncError;
use crate::metric::{FNormMetric, MetricError, MetricMode};
use crate::space::{PointCloud, Vector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemCheck {
    pub item: String,
    pub relation: String,
    /// Worst `lhs − rhs` over all pairs, on best-known bounds.
    pub margin: f64,
    /// The same relation on the bare heuristic bounds; not asserted.
    pub raw_margin: f64,
    pub tolerance: f64,
    pub pairs: usize,
    pub witness_pair: Option<usize>,
}

impl ItemCheck {
    fn new(item: &str, relation: &str, tolerance: f64) -> Self {
        ItemCheck {
            item: item.to_owned(),
            relation: relation.to_owned(),
            margin: f64::NEG_INFINITY,
            raw_margin: f64::NEG_INFINITY,
            tolerance,
            pairs: 0,
            witness_pair: None,
        }
    }

    fn record(&mut self, pair: usize, margin: f64, raw: f64) {
        self.pairs += 1;
        if margin > self.margin {
            self.margin = margin;
            self.witness_pair = Some(pair);
        }
        self.raw_margin = self.raw_margin.max(raw);
    }

    pub fn passed(&self) -> bool {
        self.margin <= self.tolerance
    }
}

/// `a − b` with `inf − inf = 0`.
fn diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        a - b
    }
}

fn indices_in(cloud: &PointCloud, points: &PointCloud) -> Vec<usize> {
    points
        .iter()
        .map(|w| cloud.iter().position(|p| p == w).expect("witness point belongs to its cloud"))
        .collect()
}

fn pick(cloud: &PointCloud, idx: impl IntoIterator<Item = usize>) -> PointCloud {
    PointCloud::from_points_unchecked(
        idx.into_iter().map(|i| cloud.get(i).clone()).collect(),
        cloud.dim(),
        "witness".into(),
    )
}

fn map_centers(b: &AlphaBounds, f: impl Fn(&Vector) -> Vector) -> PointCloud {
    b.net.centers.map(f, "centers")
}

struct Bounded<'a> {
    cloud: &'a PointCloud,
    bounds: AlphaBounds,
}

impl<'a> Bounded<'a> {
    fn new(metric: &FNormMetric, cloud: &'a PointCloud, grid: &EpsGrid, budget: NetBudget) -> Result<Self, MncError> {
        Ok(Bounded { cloud, bounds: alpha_bounds(metric, cloud, grid, budget)? })
    }

    fn upper(&self) -> f64 {
        self.bounds.upper_or_inf()
    }

    fn lower(&self) -> f64 {
        self.bounds.lower
    }
}

/// Items (i)–(vii) over pairs `(M, N)` with center budget `k`.
///
/// * (i) `M ⊆ M ∪ N`; (ii) `M` against `M` with every point repeated, its
///   closure on a finite grid; (iii) `z + M` with `z` the first point of `N`;
///   (iv) `2·M` on the doubled grid (gauge mode only); (v) finite clouds
///   have `upper` at the finest grid value without a center budget;
///   (vi) `M + N` with budget `k²` for the sum inequality and `k` for the
///   difference inequality; (vii) `M ∪ N` with budget `2k` for the upper
///   relation and `k` for the lower one.
pub fn check_mnc_properties(
    metric: &FNormMetric,
    pairs: &[(PointCloud, PointCloud)],
    grid: &EpsGrid,
    k: usize,
) -> Result<Vec<ItemCheck>, MncError> {
    if metric.mode() != MetricMode::Gauge {
        return Err(MetricError::NoVBase.into());
    }
    let tol = 2.0 * grid.resolution();
    let budget = NetBudget::Centers(k);
    let mut items = vec![
        ItemCheck::new("i.upper", "upper(M) <= upper(M u N)", tol),
        ItemCheck::new("i.lower", "lower(M) <= lower(M u N)", tol),
        ItemCheck::new("ii", "bounds(closure M) = bounds(M)", tol),
        ItemCheck::new("iii", "bounds(z + M) = bounds(M)", tol),
        ItemCheck::new("iv", "bounds(2M)/2 = bounds(M)", tol),
        ItemCheck::new("v", "upper_unbounded(M) <= finest eps", tol),
        ItemCheck::new("vi.sum", "upper(M + N) <= upper(M) + upper(N)", tol),
        ItemCheck::new("vi.difference", "|lower(M) - lower(N)| <= lower(M + N)", tol),
        ItemCheck::new("vii.upper", "upper(M u N) <= max(upper(M), upper(N))", tol),
        ItemCheck::new("vii.lower", "max(lower(M), lower(N)) <= lower(M u N)", tol),
    ];
    for (p, (m, n)) in pairs.iter().enumerate() {
        let bm = Bounded::new(metric, m, grid, budget)?;
        let bn = Bounded::new(metric, n, grid, budget)?;

        // (i)
        let union = m.union(n);
        let mut a = Bounded::new(metric, m, grid, budget)?;
        let mut b = Bounded::new(metric, &union, grid, budget)?;
        let raw = (diff(a.upper(), b.upper()), a.lower() - b.lower());
        a.bounds.offer_centers(metric, m, b.bounds.net.centers.clone());
        let idx = indices_in(m, &a.bounds.packing);
        b.bounds.offer_packing(metric, &union, pick(&union, idx))?;
        items[0].record(p, diff(a.upper(), b.upper()), raw.0);
        items[1].record(p, a.lower() - b.lower(), raw.1);

        // (ii)
        let closure = m.union(m);
        let mut c = Bounded::new(metric, &closure, grid, budget)?;
        let mut a = Bounded::new(metric, m, grid, budget)?;
        let raw = diff(c.upper(), a.upper()).abs().max((c.lower() - a.lower()).abs());
        exchange(metric, &mut a, &mut c, |v| v.clone(), |v| v.clone())?;
        let margin = diff(c.upper(), a.upper()).abs().max((c.lower() - a.lower()).abs());
        items[2].record(p, margin, raw);

        // (iii)
        let z = n.get(0).clone();
        let shifted = m.translate(&z);
        let mut t = Bounded::new(metric, &shifted, grid, budget)?;
        let mut a = Bounded::new(metric, m, grid, budget)?;
        let raw = diff(t.upper(), a.upper()).abs().max((t.lower() - a.lower()).abs());
        let zz = z.clone();
        exchange(metric, &mut a, &mut t, |v| v + &z, |v| v - &zz)?;
        let margin = diff(t.upper(), a.upper()).abs().max((t.lower() - a.lower()).abs());
        items[3].record(p, margin, raw);

        // (iv)
        let lambda = 2.0;
        let scaled = m.scale(lambda);
        let scaled_grid = grid.scaled(lambda);
        let mut s = Bounded::new(metric, &scaled, &scaled_grid, budget)?;
        let mut a = Bounded::new(metric, m, grid, budget)?;
        let raw = diff(s.upper() / lambda, a.upper()).abs().max((s.lower() / lambda - a.lower()).abs());
        exchange(metric, &mut a, &mut s, |v| v.scale(lambda), |v| v.scale(1.0 / lambda))?;
        let margin = diff(s.upper() / lambda, a.upper()).abs().max((s.lower() / lambda - a.lower()).abs());
        items[4].record(p, margin, raw);

        // (v)
        let free = alpha_bounds(metric, m, grid, NetBudget::Unbounded)?;
        let v = free.upper_or_inf() - grid.finest();
        items[5].record(p, v, v);

        // (vi)
        let sum = m.minkowski_sum(n);
        let mut bs = Bounded::new(metric, &sum, grid, NetBudget::Centers(k * k))?;
        let raw = diff(bs.upper(), bm.upper() + bn.upper());
        let sums = bm.bounds.net.centers.minkowski_sum(&bn.bounds.net.centers);
        bs.bounds.offer_centers(metric, &sum, sums);
        items[6].record(p, diff(bs.upper(), bm.upper() + bn.upper()), raw);

        let mut bd = Bounded::new(metric, &sum, grid, budget)?;
        let raw = (bm.lower() - bn.lower()).abs() - bd.lower();
        let width = n.len();
        let im = indices_in(m, &bm.bounds.packing);
        bd.bounds.offer_packing(metric, &sum, pick(&sum, im.iter().map(|i| i * width)))?;
        let inn = indices_in(n, &bn.bounds.packing);
        bd.bounds.offer_packing(metric, &sum, pick(&sum, inn.iter().copied()))?;
        items[7].record(p, (bm.lower() - bn.lower()).abs() - bd.lower(), raw);

        // (vii)
        let mut bu = Bounded::new(metric, &union, grid, NetBudget::Centers(2 * k))?;
        let cap = bm.upper().max(bn.upper());
        let raw = diff(bu.upper(), cap);
        bu.bounds.offer_centers(metric, &union, bm.bounds.net.centers.union(&bn.bounds.net.centers));
        items[8].record(p, diff(bu.upper(), cap), raw);

        let mut bl = Bounded::new(metric, &union, grid, budget)?;
        let floor = bm.lower().max(bn.lower());
        let raw = floor - bl.lower();
        bl.bounds.offer_packing(metric, &union, pick(&union, im.iter().copied()))?;
        bl.bounds.offer_packing(metric, &union, pick(&union, inn.iter().map(|j| m.len() + j)))?;
        items[9].record(p, floor - bl.lower(), raw);

        for b in [&bm, &bn, &bs, &bd, &bu, &bl] {
            b.bounds.verify(metric, b.cloud)?;
        }
    }
    Ok(items)
}

/// Offers each side's witnesses to the other through a point map `f` and its
/// inverse `g`. Packings are carried by index, since both clouds list the
/// images of the same points in the same order.
fn exchange(
    metric: &FNormMetric,
    a: &mut Bounded<'_>,
    b: &mut Bounded<'_>,
    f: impl Fn(&Vector) -> Vector,
    g: impl Fn(&Vector) -> Vector,
) -> Result<(), MncError> {
    let forward = map_centers(&a.bounds, &f);
    let backward = map_centers(&b.bounds, &g);
    b.bounds.offer_centers(metric, b.cloud, forward);
    a.bounds.offer_centers(metric, a.cloud, backward);
    let len = a.cloud.len();
    let same = move |i: usize| i % len;
    let ia: Vec<usize> = indices_in(a.cloud, &a.bounds.packing);
    let ib: Vec<usize> = indices_in(b.cloud, &b.bounds.packing);
    b.bounds.offer_packing(metric, b.cloud, pick(b.cloud, ia.iter().copied()))?;
    a.bounds.offer_packing(metric, a.cloud, pick(a.cloud, ib.into_iter().map(same)))?;
    Ok(())
}

/// Item (viii) at truncation: without a center budget the upper bound of a
/// ball grid sits at the finest value of each successively refined grid.
pub fn ball_refinement(
    metric: &FNormMetric,
    ball: &PointCloud,
    grids: &[EpsGrid],
) -> Result<ItemCheck, MncError> {
    let mut item = ItemCheck::new("viii", "upper_unbounded(ball) <= finest eps of each grid", 0.0);
    let mut previous = f64::INFINITY;
    for (j, grid) in grids.iter().enumerate() {
        let b = alpha_bounds(metric, ball, grid, NetBudget::Unbounded)?;
        let upper = b.upper_or_inf();
        let margin = (upper - grid.finest()).max(diff(upper, previous).max(0.0));
        item.record(j, margin, margin);
        previous = upper;
    }
    Ok(item)
}
