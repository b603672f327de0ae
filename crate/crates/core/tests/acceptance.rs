//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are always printed; exits nonzero on any failure.

use std::time::{Duration, Instant};

use rand::Rng;

use frechet_mnc::convexity::{check_property_p, check_stability, check_tcs, check_tmcs, BarycentricWeights, HullGrid};
use frechet_mnc::fixedpoint::{darbo_solve, estimate_upper_char, sadovskii_check, DarboConfig, OperatorSpec, Verdict};
use frechet_mnc::metric::{audit_additive, audit_scaling, lp_counterexample, step_function};
use frechet_mnc::mnc::{
    alpha_bounds, ball_refinement, check_mnc_properties, greedy_net, nested_intersection_probe, packing_lower,
    DecreasingFamily, EpsGrid, NetBudget,
};
use frechet_mnc::sampling::{ball_grid, pairs, quadruples, rng, triples, uniform_cloud, uniform_vector};
use frechet_mnc::suite::{
    cross_polytope, hull_invariance_case, run_suite, shipped_families, shipped_spaces, smoothing_operator,
    SuiteConfig, SuiteName,
};
use frechet_mnc::tolerances::DEFAULT_HULL_BUDGET;
use frechet_mnc::{FNormMetric, MetricConfig, MetricMode, PointCloud, SpaceModel, Vector};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn metric(space: &SpaceModel, mode: MetricMode, depth: u32) -> FNormMetric {
    FNormMetric::build(space, &MetricConfig::new(mode).with_depth(depth)).expect("metric builds")
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

// 1

fn additive() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut runs = 0;
    for (si, ns) in shipped_spaces().iter().enumerate() {
        for mode in MetricMode::ALL {
            if mode != MetricMode::Standard && !ns.space.is_locally_convex() {
                continue;
            }
            let d = metric(&ns.space, mode, 8);
            let q = quadruples(&mut rng(42, si as u64), ns.space.dim(), 1000, 0.5);
            worst = worst.max(audit_additive(&d, &q).max_margin());
            runs += 1;
        }
    }
    outcome(worst <= 1e-12, format!("worst margin {worst:.3e} over {runs} space/mode runs"))
}

// 2

fn scaling() -> Outcome {
    let (mut gauge_worst, mut paper_worst) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut capped = Vec::new();
    let slack = 2f64.powi(-8);
    for (si, ns) in shipped_spaces().iter().enumerate().filter(|(_, s)| s.space.is_locally_convex()) {
        let dim = ns.space.dim();
        let mut r = rng(42, 100 + si as u64);
        let g = metric(&ns.space, MetricMode::Gauge, 8);
        for (x, y) in pairs(&mut r, dim, 1000, 0.5) {
            let lambda = r.gen_range(1e-3..=1.0);
            let lhs = g.dist(&x.scale(lambda), &y.scale(lambda));
            gauge_worst = gauge_worst.max(lhs - lambda * g.dist(&x, &y));
        }
        let p = metric(&ns.space, MetricMode::Paper, 8);
        let lambdas: Vec<f64> = (0..=4).map(|k| 2f64.powi(-k)).collect();
        let mut inside = Vec::new();
        while inside.len() < 1000 {
            let x = uniform_vector(&mut r, dim, 1.0);
            let mut y = uniform_vector(&mut r, dim, 1.0);
            let gap = g.norm(&(&y - &x)).unwrap();
            if gap == 0.0 {
                continue;
            }
            if gap > 1.0 - slack {
                let shrink = (1.0 - slack) / gap * r.gen_range(0.05..1.0);
                y = &x + &(&y - &x).scale(shrink);
            }
            inside.push((x, y));
        }
        let rep = audit_scaling(&p, &inside, &lambdas);
        paper_worst = paper_worst.max(rep.region_margin("inside").unwrap_or(f64::NEG_INFINITY));
        let wide = audit_scaling(&p, &pairs(&mut r, dim, 1000, 1.0), &lambdas);
        capped.push(format!("{}:{:?}", ns.name, wide.region_margin("capped")));
    }
    outcome(
        gauge_worst <= 1e-12 && paper_worst <= slack,
        format!("gauge {gauge_worst:.3e}, paper inside {paper_worst:.3e}; capped (reported) {}", capped.join(" ")),
    )
}

// 3

/// Least `Σ_{n∈H} 2^-n >= target` over every nonempty `H ⊆ {1..depth}`.
fn exhaustive_least(target: f64, depth: u32) -> Option<f64> {
    let mut best: Option<f64> = None;
    for mask in 1u32..(1 << depth) {
        let v: f64 = (1..=depth).filter(|n| mask >> (depth - n) & 1 == 1).map(|n| 2f64.powi(-(n as i32))).sum();
        if v >= target && best.is_none_or(|b| v < b) {
            best = Some(v);
        }
    }
    best
}

fn sandwich() -> Outcome {
    let space = SpaceModel::c_grid(8, 4, 0.25).unwrap();
    let mut r = rng(42, 300);
    let (mut mismatches, mut outside, mut checked) = (0, 0, 0);
    for depth in [4u32, 8, 12, 16] {
        let p = metric(&space, MetricMode::Paper, depth);
        let g = metric(&space, MetricMode::Gauge, depth);
        let limit = 1.0 - 2f64.powi(-(depth as i32));
        let mut n = 0;
        while n < 100 {
            let x = uniform_vector(&mut r, 8, 1.0);
            let gauge = g.norm(&x).unwrap();
            if gauge == 0.0 || gauge > limit {
                continue;
            }
            n += 1;
            checked += 1;
            let value = p.norm(&x).unwrap();
            if !(gauge <= value && value <= gauge + 2f64.powi(-(depth as i32))) {
                outside += 1;
            }
            if exhaustive_least(gauge, depth) != Some(value) {
                mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0 && outside == 0,
        format!("{checked} points at depths 4..16: {outside} outside the band, {mismatches} enumeration mismatches"),
    )
}

// 4

fn counterexample() -> Outcome {
    let mut worst_closed = 0.0f64;
    let mut bad = Vec::new();
    for p in [0.25, 0.5, 0.75, 1.0] {
        let space = SpaceModel::lp_grid(6, p, 0.5).unwrap();
        let x = Vector::zeros(6);
        let y = step_function(6, 1, 4, 0.8);
        for lambda in [0.1, 0.25, 0.5, 0.9] {
            let v = lp_counterexample(&space, lambda, &x, &y).unwrap();
            let direct: f64 = y.coords().iter().map(|c| (lambda * c).abs().powf(p)).sum::<f64>() * 0.5;
            worst_closed = worst_closed.max((v.lhs - lambda.powf(p) * v.distance).abs()).max((v.lhs - direct).abs());
            let expected_strict = p < 1.0;
            let gap_ok = if expected_strict {
                lambda.powf(p) - lambda > 0.0 && v.violated
            } else {
                !v.violated && (v.lhs - v.rhs_strong).abs() <= 1e-12
            };
            if !gap_ok {
                bad.push(format!("p={p} λ={lambda}"));
            }
        }
    }
    outcome(
        worst_closed <= 1e-12 && bad.is_empty(),
        format!("closed-form error {worst_closed:.3e}; wrong verdicts {bad:?}"),
    )
}

// 5

fn convexity() -> Outcome {
    let mut worst: Vec<(String, f64)> = Vec::new();
    for (si, ns) in shipped_spaces().iter().enumerate().filter(|(_, s)| s.space.is_locally_convex()) {
        let d = metric(&ns.space, MetricMode::Gauge, 8);
        let dim = ns.space.dim();
        let mut r = rng(42, 500 + si as u64);
        let mut tcs = f64::NEG_INFINITY;
        for [u, x, y] in triples(&mut r, dim, 1000, 1.0) {
            let t = r.gen_range(0.0..=1.0);
            tcs = tcs.max(check_tcs(&d, &u, &x, &y, t).unwrap());
        }
        let mut tmcs = f64::NEG_INFINITY;
        for [u, x, y, z] in quadruples(&mut r, dim, 1000, 1.0) {
            let a: f64 = r.gen_range(0.0..=1.0);
            let b: f64 = r.gen_range(0.0..=1.0 - a);
            let w = BarycentricWeights::new(vec![a, b, 1.0 - a - b]).unwrap();
            tmcs = tmcs.max(check_tmcs(&d, &u, &x, &y, &z, &w).unwrap());
        }
        let tuples: Vec<_> = quadruples(&mut r, dim, 1000, 1.0).into_iter().map(|q| (q, r.gen_range(0.0..=1.0))).collect();
        let p = check_property_p(&d, &tuples, 1e-9).unwrap().conventional.max_violation;
        let gens = uniform_cloud(&mut r, dim, 4, 1.0, "generators");
        let hull = HullGrid::new(&gens, 4, DEFAULT_HULL_BUDGET).unwrap();
        let mut stab = f64::NEG_INFINITY;
        for radius in [0.05, 0.1, 0.5] {
            stab = stab.max(check_stability(&d, &hull, radius, 1000, 1e-9, &mut r).unwrap().max_violation);
        }
        worst.push((format!("{}:tcs", ns.name), tcs));
        worst.push((format!("{}:tmcs", ns.name), tmcs));
        worst.push((format!("{}:P", ns.name), p));
        worst.push((format!("{}:stability", ns.name), stab));
    }
    let max = worst.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
    let culprit = worst.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|w| w.0.clone()).unwrap_or_default();
    outcome(max <= 1e-9, format!("worst residual {max:.3e} ({culprit})"))
}

// 6

/// Chebyshev radius of the points selected by `mask`.
fn radius(points: &[Vec<f64>], mask: usize) -> f64 {
    let dim = points[0].len();
    let mut worst = 0.0f64;
    for i in 0..dim {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (j, p) in points.iter().enumerate() {
            if mask >> j & 1 == 1 {
                lo = lo.min(p[i]);
                hi = hi.max(p[i]);
            }
        }
        worst = worst.max(0.5 * (hi - lo));
    }
    worst
}

/// Exact sup-norm `K`-center radius by dynamic programming over subsets;
/// entry `k − 1` holds the optimum with `k` centers.
fn brute_alphas(points: &[Vec<f64>], kmax: usize) -> Vec<f64> {
    let n = points.len();
    let full = (1usize << n) - 1;
    let rad: Vec<f64> = (0..=full).map(|m| if m == 0 { 0.0 } else { radius(points, m) }).collect();
    let mut best = rad.clone();
    let mut out = vec![best[full]];
    for _ in 1..kmax {
        let mut next = vec![f64::INFINITY; full + 1];
        next[0] = 0.0;
        for m in 1..=full {
            let low = m & m.wrapping_neg();
            let rest = m ^ low;
            let mut sub = rest;
            loop {
                let part = sub | low;
                next[m] = next[m].min(rad[part].max(best[m ^ part]));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        best = next;
        out.push(best[full]);
    }
    out
}

fn hull_invariance() -> Outcome {
    let space = SpaceModel::c_grid(6, 3, 0.25).unwrap();
    let d = metric(&space, MetricMode::Gauge, 8);
    let mut r = rng(42, 600);
    let (mut upper_excess, mut lower_excess) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut sup_mismatch = 0.0f64;
    let mut direction_failures = Vec::new();
    let mut brute_runs = 0;
    for c in 0..50 {
        let n = if c < 20 { r.gen_range(4..=12) } else { r.gen_range(13..=40) };
        let cloud = uniform_cloud(&mut r, 6, n, 1.0, "M");
        let case = hull_invariance_case(&d, &cloud, 3, 0.1, 2, DEFAULT_HULL_BUDGET, &mut r).unwrap();
        upper_excess = upper_excess.max(case.upper_co - (case.eta + case.eps + case.grid_gap));
        lower_excess = lower_excess.max(case.lower_m - case.lower_co);
        if n > 12 {
            continue;
        }
        brute_runs += 1;
        let pts: Vec<Vec<f64>> = cloud.iter().map(|p| p.coords().to_vec()).collect();
        for a in &pts {
            for b in &pts {
                sup_mismatch = sup_mismatch.max((d.dist(&Vector::new(a.clone()).unwrap(), &Vector::new(b.clone()).unwrap()) - sup(a, b)).abs());
            }
        }
        let alphas = brute_alphas(&pts, n);
        if !(case.lower_m <= alphas[2] + 1e-12 && alphas[2] <= case.eta + 1e-12) {
            direction_failures.push(format!("cloud {c}: alpha_3 {} vs [{}, {}]", alphas[2], case.lower_m, case.eta));
        }
        for eps in [0.25, 0.5, 0.75] {
            let min_size = alphas.iter().position(|&a| a <= eps).map_or(n, |k| k + 1);
            let greedy = greedy_net(&d, &cloud, eps).unwrap().len();
            let packing = packing_lower(&d, &cloud, eps).unwrap().count();
            if !(packing <= min_size && min_size <= greedy) {
                direction_failures.push(format!("cloud {c} eps {eps}: {packing} <= {min_size} <= {greedy} fails"));
            }
        }
    }
    outcome(
        upper_excess <= 0.0 && lower_excess <= 0.0 && direction_failures.is_empty() && sup_mismatch <= 1e-15,
        format!(
            "upper excess {upper_excess:.3e}, lower excess {lower_excess:.3e}, {brute_runs} brute-force clouds, {} direction failures {:?}",
            direction_failures.len(),
            direction_failures.first()
        ),
    )
}

// 7

fn proposition() -> Outcome {
    let space = SpaceModel::c_grid(8, 4, 0.25).unwrap();
    let d = metric(&space, MetricMode::Gauge, 8);
    let mut r = rng(42, 700);
    let pairs: Vec<_> =
        (0..50).map(|_| (uniform_cloud(&mut r, 8, 8, 1.0, "M"), uniform_cloud(&mut r, 8, 6, 1.0, "N"))).collect();
    let grid = EpsGrid::uniform(8.0, 800);
    let items = check_mnc_properties(&d, &pairs, &grid, 2).unwrap();
    let mut failed: Vec<String> = items.iter().filter(|i| !i.passed()).map(|i| i.item.clone()).collect();
    for want in ["i.upper", "i.lower", "iii", "iv", "v", "vi.sum", "vii.upper"] {
        if !items.iter().any(|i| i.item == want) {
            failed.push(format!("{want} missing"));
        }
    }
    for (j, (m, _)) in pairs.iter().enumerate() {
        let b = alpha_bounds(&d, m, &grid, NetBudget::Unbounded).unwrap();
        if b.upper_or_inf() > grid.finest() {
            failed.push(format!("v oracle pair {j}"));
        }
    }

    let grids: Vec<EpsGrid> = (1..=5).map(|j| EpsGrid::geometric(1.0, 0.5, j)).collect();
    for dim in 1..=3 {
        let s = SpaceModel::c_grid(dim, 1, 1.0).unwrap();
        let m = metric(&s, MetricMode::Gauge, 8);
        let ball = ball_grid(&m, &Vector::zeros(dim), 1.0, 5);
        if !ball_refinement(&m, &ball, &grids).unwrap().passed() {
            failed.push(format!("viii dim {dim}"));
        }
    }

    let plane = metric(&SpaceModel::c_grid(2, 1, 1.0).unwrap(), MetricMode::Gauge, 8);
    let mut probes = Vec::new();
    for (name, sets) in shipped_families(&plane) {
        let family = DecreasingFamily::new(&plane, sets.clone(), 0.0).unwrap();
        let probe = nested_intersection_probe(&plane, &family, 1e-3).unwrap();
        let reach = sets
            .iter()
            .map(|s| s.iter().map(|q| sup(q.coords(), probe.point.coords())).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        if !probe.success || reach > 1e-3 {
            failed.push(format!("ix {name}"));
        }
        probes.push(format!("{name} {reach:.1e}"));
    }
    outcome(failed.is_empty(), format!("{} items on 50 pairs, probes [{}]; failed {failed:?}", items.len(), probes.join(", ")))
}

// 8

/// `F(x) = λx + G·tanh(x) + c` built from the operator's parameters.
fn smoothing_oracle(op: &OperatorSpec) -> impl Fn(&[f64]) -> Vec<f64> {
    let OperatorSpec::ContractionPlusSmoothing { lambda, shift, kernel_width, smoothing } = op.clone() else {
        panic!("smoothing operator expected");
    };
    let dim = shift.len();
    let t: Vec<f64> = (0..dim).map(|i| (i as f64 + 0.5) / dim as f64).collect();
    let mut g = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        let row: Vec<f64> = (0..dim).map(|j| (-((t[i] - t[j]) / kernel_width).powi(2)).exp()).collect();
        let total: f64 = row.iter().sum();
        for j in 0..dim {
            g[i][j] = smoothing * row[j] / total;
        }
    }
    move |x: &[f64]| {
        (0..dim)
            .map(|i| lambda * x[i] + (0..dim).map(|j| g[i][j] * x[j].tanh()).sum::<f64>() + shift[i])
            .collect()
    }
}

fn darbo() -> Outcome {
    let dim = 16;
    let space = SpaceModel::c_grid(dim, 4, 1.0 / dim as f64).unwrap();
    let d = metric(&space, MetricMode::Gauge, 8);
    let op = smoothing_operator(dim);
    let config = DarboConfig { tol: 1e-6, max_iter: 60, ..DarboConfig::default() };
    let trace = darbo_solve(&d, &op, &cross_polytope(dim, 4.0), &config).unwrap();
    let f = smoothing_oracle(&op);
    let x = trace.x_star.coords();
    let residual = sup(x, &f(x));
    let mut worst_decay = f64::NEG_INFINITY;
    for w in trace.iterations.windows(2) {
        let bound = 0.55 * w[0].bounds.upper_or_inf() + w[1].grid_gap;
        worst_decay = worst_decay.max(w[1].bounds.upper_or_inf() - bound);
    }
    let mut y = vec![0.0; dim];
    for _ in 0..1000 {
        y = f(&y);
    }
    let gap = sup(x, &y);
    let iterations = trace.iterations.len() - 1;
    outcome(
        trace.converged && residual < 1e-6 && iterations <= 60 && worst_decay <= 0.0 && gap <= 1e-5,
        format!("residual {residual:.3e}, {iterations} iterations, decay margin {worst_decay:.3e}, oracle gap {gap:.3e}"),
    )
}

// 9

fn condensing() -> Outcome {
    let dim = 8;
    let space = SpaceModel::c_grid(dim, 4, 0.5).unwrap();
    let d = metric(&space, MetricMode::Gauge, 8);
    let mut r = rng(42, 900);
    let trials: Vec<PointCloud> = (0..10).map(|_| uniform_cloud(&mut r, dim, 12, 1.0, "trial")).collect();
    let grid = EpsGrid::geometric(8.0, 0.5f64.powf(0.125), 240);
    let est = estimate_upper_char(&d, &OperatorSpec::scaling(0.5, dim), &trials, &grid).unwrap();
    let mut slack = 0.0f64;
    let mut bracket_ok = true;
    for m in &trials {
        let b = alpha_bounds(&d, m, &grid, NetBudget::Centers(1)).unwrap();
        slack = slack.max(b.upper_or_inf() / b.lower - 1.0);
        let pts: Vec<Vec<f64>> = m.iter().map(|p| p.coords().to_vec()).collect();
        let exact = radius(&pts, (1 << pts.len()) - 1);
        bracket_ok &= b.lower <= exact + 1e-12 && exact <= b.upper_or_inf() + 1e-12;
    }
    let in_band = (est.gamma - 0.5).abs() <= slack;
    let shift: Vec<f64> = (0..dim).map(|i| 0.3 * (i as f64).cos()).collect();
    let mut verdicts = Vec::new();
    let mut classified = true;
    for (op, expected) in [
        (OperatorSpec::scaling(0.5, dim), Verdict::Condensing),
        (OperatorSpec::identity(dim), Verdict::NotCondensing),
        (OperatorSpec::translation(shift), Verdict::NotCondensing),
    ] {
        let got = sadovskii_check(&d, &op, &trials, &grid).unwrap().overall();
        classified &= got == expected;
        verdicts.push(format!("{got:?}"));
    }
    outcome(
        in_band && bracket_ok && classified && (slack - est.slack).abs() <= 1e-12,
        format!("gamma {:.4} with slack {slack:.4}; verdicts {verdicts:?}", est.gamma),
    )
}

// 10

fn determinism() -> Outcome {
    let cfg = SuiteConfig::default();
    let spaces = shipped_spaces();
    let a = run_suite(SuiteName::All, &cfg, &spaces).unwrap();
    let b = run_suite(SuiteName::All, &cfg, &spaces).unwrap();
    let (ja, jb) = (a.to_canonical_json(), b.to_canonical_json());
    let anchors = a.anchors.len();
    outcome(
        ja == jb && a.passed() && anchors == 9,
        format!("{} checks, {} bytes, {anchors} anchors, identical {}", a.checks.len(), ja.len(), ja == jb),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "additive inequality", additive, Some(Duration::from_secs(5))),
        (2, "scaling inequality", scaling, Some(Duration::from_secs(10))),
        (3, "dyadic sandwich", sandwich, None),
        (4, "lp counterexample", counterexample, None),
        (5, "convex structures", convexity, None),
        (6, "hull invariance", hull_invariance, Some(Duration::from_secs(60))),
        (7, "measure properties", proposition, None),
        (8, "darbo solver", darbo, Some(Duration::from_secs(30))),
        (9, "condensing checks", condensing, None),
        (10, "determinism", determinism, Some(Duration::from_secs(180))),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (n, name, run, limit) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let ok = out.ok && in_time;
        let budget = limit.map_or(String::new(), |l| format!(" of {}s", l.as_secs()));
        println!(
            "criterion {n:>2} {name}: {} ({}; {:.2}s{budget})",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
        failures += usize::from(!ok);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
