use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use frechet_mnc::convexity::{
    check_property_p, check_property_q, check_stability, check_tcs, check_tmcs, BarycentricWeights, HullGrid,
    PropertyReport,
};
use frechet_mnc::fixedpoint::{darbo_solve, sadovskii_check, DarboConfig, OperatorSpec, Verdict};
use frechet_mnc::metric::{audit_additive, audit_axioms, audit_scaling, lp_counterexample, step_function};
use frechet_mnc::mnc::{alpha_bounds, greedy_net, net_transfer_co, EpsGrid, NetBudget};
use frechet_mnc::report::{CheckResult, Outcome, Report};
use frechet_mnc::sampling::{pairs, quadruples, rng, triples, uniform_cloud};
use frechet_mnc::suite::{load_spaces, run_suite, shipped_spaces, NamedSpace, SuiteConfig, SuiteName};
use frechet_mnc::tolerances::{dyadic_slack, CONVEXITY, DEFAULT_HULL_BUDGET, EXACT};
use frechet_mnc::{CloudFile, FNormMetric, MetricConfig, MetricMode, PointCloud, SpaceModel, Vector};

#[derive(Parser)]
#[command(name = "fmnc", version, about = "Metrics, MNC bounds and fixed-point checks on truncated Frechet-space models")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest hull grid a command may build.
    #[arg(long, global = true, env = "FMNC_BUDGET", default_value_t = DEFAULT_HULL_BUDGET)]
    budget: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a space descriptor.
    Space {
        #[command(subcommand)]
        action: SpaceAction,
    },
    /// Evaluate or audit a metric.
    Metric {
        #[command(subcommand)]
        action: MetricAction,
    },
    /// Convex-structure checks in gauge mode.
    Convexity {
        #[command(subcommand)]
        action: ConvexityAction,
    },
    /// Bounds on the noncompactness measure of a cloud.
    Alpha {
        #[command(subcommand)]
        action: AlphaAction,
    },
    /// Fixed-point solver and condensing checks.
    Fixpoint {
        #[command(subcommand)]
        action: FixpointAction,
    },
    /// Scaling defect of the lp-grid distance.
    Counterexample {
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0.25)]
        lambda: f64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Run a named property suite.
    Suite {
        /// metric, convexity, mnc, hull-invariance, fixedpoint, counterexample or all.
        #[arg(value_parser = parse_suite)]
        name: SuiteName,
        /// Directory of space descriptors; the shipped spaces when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Metric modes to audit (repeatable); all modes when absent.
        #[arg(long, value_parser = parse_mode)]
        mode: Vec<MetricMode>,
        #[arg(long, default_value_t = 8)]
        depth: u32,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0.25)]
        lambda: f64,
    },
}

#[derive(Subcommand)]
enum SpaceAction {
    Describe {
        #[arg(long)]
        space: PathBuf,
    },
    Seminorm {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
    },
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long, value_parser = parse_mode, default_value = "gauge")]
    mode: MetricMode,
    #[arg(long, default_value_t = 8)]
    depth: u32,
    #[arg(long, default_value_t = 0)]
    n0: u32,
    #[arg(long, value_delimiter = ',')]
    caps: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    cap_value: f64,
}

impl MetricArgs {
    fn config(&self) -> MetricConfig {
        let mut c = MetricConfig::new(self.mode).with_depth(self.depth).with_n0(self.n0).with_cap_value(self.cap_value);
        if let Some(caps) = &self.caps {
            c = c.with_caps(caps.clone());
        }
        c
    }
}

#[derive(Subcommand)]
enum MetricAction {
    Eval {
        #[arg(long)]
        space: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        y: Vec<f64>,
    },
    Audit {
        /// Space descriptor; every shipped space when absent.
        #[arg(long)]
        space: Option<PathBuf>,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Tcs,
    Tmcs,
    Stability,
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Subcommand)]
enum ConvexityAction {
    Check {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum AlphaAction {
    Bounds {
        /// Overrides the space recorded in the cloud file.
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        eps_grid: Vec<f64>,
        /// Center budget; unbounded when absent.
        #[arg(long)]
        centers: Option<usize>,
    },
    CoTransfer {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 8)]
        resolution: usize,
    },
}

#[derive(Subcommand)]
enum FixpointAction {
    Darbo {
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        m0: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 60)]
        max_iter: usize,
        #[arg(long, default_value_t = 2)]
        resolution: usize,
    },
    Sadovskii {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        trials: PathBuf,
        #[arg(long, value_delimiter = ',')]
        eps_grid: Option<Vec<f64>>,
    },
}

/// Why a command could not produce a report.
#[derive(Debug)]
enum Failure {
    /// Malformed input or I/O; exit 2.
    Input(String),
    /// A check could not run on valid input; exit 1.
    Run(String),
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn run(e: impl std::fmt::Display) -> Failure {
    Failure::Run(e.to_string())
}

fn parse_suite(s: &str) -> Result<SuiteName, String> {
    s.parse().map_err(|e: frechet_mnc::suite::SuiteError| e.to_string())
}

fn parse_mode(s: &str) -> Result<MetricMode, String> {
    s.parse()
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_cloud(path: &Path) -> Result<(SpaceModel, PointCloud), Failure> {
    let file: CloudFile = read_json(path)?;
    file.into_parts().map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn vector(space: &SpaceModel, coords: Vec<f64>, name: &str) -> Result<Vector, Failure> {
    let v = Vector::new(coords).map_err(|e| Failure::Input(format!("--{name}: {e}")))?;
    space.check(&v).map_err(|e| Failure::Input(format!("--{name}: {e}")))?;
    Ok(v)
}

fn space_override(space: Option<&Path>, from_cloud: SpaceModel) -> Result<SpaceModel, Failure> {
    match space {
        None => Ok(from_cloud),
        Some(path) => {
            let s: SpaceModel = read_json(path)?;
            if s != from_cloud {
                return Err(Failure::Input(format!("{} does not match the cloud's space", path.display())));
            }
            Ok(s)
        }
    }
}

fn property(suite: &str, id: String, report: &PropertyReport) -> CheckResult {
    CheckResult::asserted(suite, id, report.max_violation, report.tolerance)
        .witness(&report.witness)
        .details(json!({ "samples": report.samples, "params": report.params }))
}

fn space_cmd(g: &Global, action: SpaceAction) -> Result<Report, Failure> {
    match action {
        SpaceAction::Describe { space } => {
            let s: SpaceModel = read_json(&space)?;
            let c = CheckResult::info("space", "space.describe", s.seminorm_count() as f64).details(json!({
                "descriptor": s.descriptor(),
                "seminorm_count": s.seminorm_count(),
                "locally_convex": s.is_locally_convex(),
            }));
            Ok(Report::new("space", g.seed, json!({ "space": space }), vec![c]))
        }
        SpaceAction::Seminorm { space, k, x } => {
            let s: SpaceModel = read_json(&space)?;
            let x = vector(&s, x, "x")?;
            let value = s.seminorm(k, &x).map_err(input)?;
            let c = CheckResult::info("space", "space.seminorm", value).details(json!({ "k": k, "value": value }));
            Ok(Report::new("space", g.seed, json!({ "space": s, "k": k }), vec![c]))
        }
    }
}

fn metric_cmd(g: &Global, action: MetricAction) -> Result<Report, Failure> {
    match action {
        MetricAction::Eval { space, metric, x, y } => {
            let s: SpaceModel = read_json(&space)?;
            let d = FNormMetric::build(&s, &metric.config()).map_err(input)?;
            let x = vector(&s, x, "x")?;
            let y = vector(&s, y, "y")?;
            let value = d.distance(&x, &y).map_err(input)?;
            let c = CheckResult::info("metric", "metric.eval", value).details(json!({
                "distance": value,
                "inside": d.is_inside(&(&y - &x)),
            }));
            Ok(Report::new("metric", g.seed, json!({ "space": s, "metric": d.config() }), vec![c]))
        }
        MetricAction::Audit { space, metric, samples } => {
            let spaces = match space {
                Some(path) => vec![NamedSpace { name: "input".into(), space: read_json(&path)? }],
                None => shipped_spaces(),
            };
            let mut checks = Vec::new();
            for (i, ns) in spaces.iter().enumerate() {
                if metric.mode != MetricMode::Standard && !ns.space.is_locally_convex() {
                    continue;
                }
                let d = FNormMetric::build(&ns.space, &metric.config()).map_err(input)?;
                let mut r = rng(g.seed, i as u64);
                let dim = ns.space.dim();
                let tag = format!("{}.{}", ns.name, metric.mode.name());
                let a = audit_additive(&d, &quadruples(&mut r, dim, samples, 0.5));
                checks.push(
                    CheckResult::asserted("metric", format!("metric.additive.{tag}"), a.max_margin(), EXACT)
                        .witness(&a.overall.witness),
                );
                for rep in audit_axioms(&d, &triples(&mut r, dim, samples, 0.5)) {
                    checks.push(
                        CheckResult::asserted("metric", format!("metric.{}.{tag}", rep.check), rep.max_margin(), EXACT)
                            .witness(&rep.overall.witness),
                    );
                }
                let lambdas: Vec<f64> = (0..=4).map(|k| (-(k as f64)).exp2()).collect();
                let rep = audit_scaling(&d, &pairs(&mut r, dim, samples, 0.5), &lambdas);
                let id = format!("metric.scaling.{tag}");
                let c = match metric.mode {
                    MetricMode::Gauge => CheckResult::asserted("metric", id, rep.max_margin(), EXACT),
                    MetricMode::Paper => match rep.region_margin("inside") {
                        Some(m) => CheckResult::asserted("metric", id, m, dyadic_slack(d.depth())),
                        None => CheckResult::info("metric", id, f64::NAN),
                    },
                    MetricMode::Standard => CheckResult::info("metric", id, rep.max_margin()),
                };
                checks.push(c.witness(&rep.overall.witness).details(json!({ "region_breakdown": rep.regions })));
            }
            if checks.is_empty() {
                return Err(Failure::Input(format!("{} mode needs a locally convex space", metric.mode)));
            }
            Ok(Report::new("metric", g.seed, json!({ "metric": metric.config(), "samples": samples }), checks))
        }
    }
}

fn convexity_cmd(g: &Global, which: Which, space: &Path, samples: usize) -> Result<Report, Failure> {
    let s: SpaceModel = read_json(space)?;
    let d = FNormMetric::unit_gauge(&s).map_err(input)?;
    let dim = s.dim();
    let mut r = rng(g.seed, 0);
    let mut checks = Vec::new();
    match which {
        Which::Tcs => {
            let mut rep = PropertyReport::new("tcs", CONVEXITY);
            for [u, x, y] in triples(&mut r, dim, samples, 1.0) {
                let t = rand::Rng::gen_range(&mut r, 0.0..=1.0);
                let v = check_tcs(&d, &u, &x, &y, t).map_err(run)?;
                rep.record(v, || vec![u.coords().to_vec(), x.coords().to_vec(), y.coords().to_vec(), vec![t]]);
            }
            checks.push(property("convexity", "convexity.tcs".into(), &rep));
        }
        Which::Tmcs => {
            let mut rep = PropertyReport::new("tmcs", CONVEXITY);
            for [u, x, y, z] in quadruples(&mut r, dim, samples, 1.0) {
                let raw: Vec<f64> = (0..3).map(|_| rand::Rng::gen_range(&mut r, 0.0..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let w = BarycentricWeights::new(raw.iter().map(|a| a / total).collect()).map_err(run)?;
                let v = check_tmcs(&d, &u, &x, &y, &z, &w).map_err(run)?;
                rep.record(v, || vec![u.coords().to_vec(), w.values().to_vec()]);
            }
            checks.push(property("convexity", "convexity.tmcs".into(), &rep));
        }
        Which::Stability => {
            let gens = uniform_cloud(&mut r, dim, 4, 1.0, "generators");
            let hull = HullGrid::new(&gens, 4, g.budget).map_err(run)?;
            for radius in [0.05, 0.1, 0.5] {
                let rep = check_stability(&d, &hull, radius, samples, CONVEXITY, &mut r).map_err(run)?;
                checks.push(property("convexity", format!("convexity.stability.r{radius}"), &rep));
            }
        }
        Which::P => {
            let tuples: Vec<_> = quadruples(&mut r, dim, samples, 1.0)
                .into_iter()
                .map(|q| (q, rand::Rng::gen_range(&mut r, 0.0..=1.0)))
                .collect();
            let p = check_property_p(&d, &tuples, CONVEXITY).map_err(run)?;
            checks.push(property("convexity", "convexity.property-p.conventional".into(), &p.conventional));
            checks.push(
                CheckResult::info("convexity", "convexity.property-p.printed", p.printed.max_violation)
                    .witness(&p.printed.witness),
            );
        }
        Which::Q => {
            let f = uniform_cloud(&mut r, dim, 3, 0.5, "F");
            let levels = check_property_q(&d, &f, &[0.5, 0.25], g.budget).map_err(run)?;
            for l in levels {
                let verdict = if l.passed { Outcome::Pass } else { Outcome::Fail };
                checks.push(
                    CheckResult::with_outcome("convexity", format!("convexity.property-q.eps{}", l.eps), l.hull_radius - l.eps, 0.0, verdict)
                        .details(&l),
                );
            }
        }
    }
    Ok(Report::new("convexity", g.seed, json!({ "space": s, "samples": samples }), checks))
}

fn alpha_cmd(g: &Global, action: AlphaAction) -> Result<Report, Failure> {
    match action {
        AlphaAction::Bounds { space, cloud, eps_grid, centers } => {
            let (s, m) = read_cloud(&cloud)?;
            let s = space_override(space.as_deref(), s)?;
            let d = FNormMetric::unit_gauge(&s).map_err(input)?;
            let grid = EpsGrid::new(eps_grid).map_err(input)?;
            let budget = match centers {
                Some(k) => NetBudget::Centers(k),
                None => NetBudget::Unbounded,
            };
            let b = alpha_bounds(&d, &m, &grid, budget).map_err(input)?;
            let verified = b.verify(&d, &m);
            let c = CheckResult::with_outcome(
                "alpha",
                "alpha.bounds",
                b.lower - b.upper_or_inf(),
                0.0,
                if verified.is_ok() { Outcome::Pass } else { Outcome::Fail },
            )
            .witness(verified.err().map(|e| e.to_string()))
            .details(&b);
            Ok(Report::new("alpha", g.seed, json!({ "space": s, "budget": budget }), vec![c]))
        }
        AlphaAction::CoTransfer { cloud, eta, eps, resolution } => {
            let (s, m) = read_cloud(&cloud)?;
            let d = FNormMetric::unit_gauge(&s).map_err(input)?;
            let net = greedy_net(&d, &m, eta).map_err(input)?;
            let mut r = rng(g.seed, 0);
            let (cert, sample) = net_transfer_co(&d, &m, &net, eps, resolution, g.budget, 500, &mut r).map_err(input)?;
            let verified = cert.net.verify(&d, &sample.cloud);
            let radius = cert.covered_radius();
            let verdict = if verified.is_ok() && radius <= cert.asserted_bound { Outcome::Pass } else { Outcome::Fail };
            let c = CheckResult::with_outcome("alpha", "alpha.co-transfer", radius - cert.asserted_bound, 0.0, verdict)
                .witness(verified.err().map(|e| e.to_string()))
                .details(&cert);
            Ok(Report::new(
                "alpha",
                g.seed,
                json!({ "space": s, "eta": eta, "eps": eps, "resolution": resolution, "budget": g.budget }),
                vec![c],
            ))
        }
    }
}

#[derive(Deserialize)]
struct TrialsFile {
    space: SpaceModel,
    trials: Vec<Vec<Vec<f64>>>,
}

fn fixpoint_cmd(g: &Global, action: FixpointAction) -> Result<Report, Failure> {
    match action {
        FixpointAction::Darbo { space, op, m0, tol, max_iter, resolution } => {
            let spec: OperatorSpec = read_json(&op)?;
            let (s, m) = read_cloud(&m0)?;
            let s = space_override(space.as_deref(), s)?;
            let d = FNormMetric::unit_gauge(&s).map_err(input)?;
            let config = DarboConfig { tol, max_iter, resolution, budget: g.budget, ..DarboConfig::default() };
            let trace = darbo_solve(&d, &spec, &m, &config).map_err(run)?;
            let residual = trace.recompute_residual(&d, &spec).map_err(run)?;
            let verdict = if trace.converged && residual < tol { Outcome::Pass } else { Outcome::Fail };
            let c = CheckResult::with_outcome("fixpoint", "fixpoint.darbo", residual, tol, verdict)
                .witness(trace.x_star.coords())
                .details(&trace);
            Ok(Report::new("fixpoint", g.seed, json!({ "space": s, "operator": spec, "darbo": config }), vec![c]))
        }
        FixpointAction::Sadovskii { op, trials, eps_grid } => {
            let spec: OperatorSpec = read_json(&op)?;
            let file: TrialsFile = read_json(&trials)?;
            let clouds = file
                .trials
                .into_iter()
                .map(|rows| {
                    let c = PointCloud::from_coords(rows, "trial").map_err(input)?;
                    c.check_space(&file.space).map_err(input)?;
                    Ok(c)
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let d = FNormMetric::unit_gauge(&file.space).map_err(input)?;
            let grid = match eps_grid {
                Some(v) => EpsGrid::new(v).map_err(input)?,
                None => EpsGrid::geometric(64.0, 0.5f64.powf(0.125), 320),
            };
            let rep = sadovskii_check(&d, &spec, &clouds, &grid).map_err(run)?;
            let overall = rep.overall();
            let verdict = match overall {
                Verdict::Inconclusive => Outcome::Inconclusive,
                _ => Outcome::Info,
            };
            let c = CheckResult::with_outcome("fixpoint", "fixpoint.sadovskii", f64::NAN, f64::NAN, verdict)
                .witness(overall)
                .details(&rep);
            Ok(Report::new("fixpoint", g.seed, json!({ "space": file.space, "operator": spec }), vec![c]))
        }
    }
}

fn counterexample_cmd(g: &Global, p: f64, lambda: f64, dim: usize) -> Result<Report, Failure> {
    let s = SpaceModel::lp_grid(dim, p, 1.0).map_err(input)?;
    let v = lp_counterexample(&s, lambda, &Vector::zeros(dim), &step_function(dim, 0, 1, 1.0)).map_err(input)?;
    let closed = CheckResult::asserted("counterexample", "counterexample.closed-form", (v.lhs - v.lhs_closed_form).abs(), EXACT);
    let c = CheckResult::info("counterexample", "counterexample", v.lhs - v.rhs_strong).details(json!({
        "p": v.p,
        "lambda": v.lambda,
        "distance": v.distance,
        "lhs": v.lhs,
        "rhs": v.rhs_strong,
        "violated": v.violated,
    }));
    Ok(Report::new("counterexample", g.seed, json!({ "space": s, "lambda": lambda }), vec![closed, c]))
}

#[allow(clippy::too_many_arguments)]
fn suite_cmd(
    g: &Global,
    name: SuiteName,
    input_dir: Option<PathBuf>,
    samples: usize,
    modes: Vec<MetricMode>,
    depth: u32,
    eps: f64,
    tol: f64,
    p: f64,
    lambda: f64,
) -> Result<Report, Failure> {
    let spaces = match input_dir {
        Some(dir) => load_spaces(&dir).map_err(input)?,
        None => shipped_spaces(),
    };
    let cfg = SuiteConfig { seed: g.seed, samples, depth, budget: g.budget, eps, tol, modes, p, lambda, ..SuiteConfig::default() };
    run_suite(name, &cfg, &spaces).map_err(|e| match e {
        frechet_mnc::suite::SuiteError::Check(m) => Failure::Run(m),
        other => Failure::Input(other.to_string()),
    })
}

fn dispatch(cli: Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Space { action } => space_cmd(g, action),
        Command::Metric { action } => metric_cmd(g, action),
        Command::Convexity { action: ConvexityAction::Check { which, space, samples } } => {
            convexity_cmd(g, which, &space, samples)
        }
        Command::Alpha { action } => alpha_cmd(g, action),
        Command::Fixpoint { action } => fixpoint_cmd(g, action),
        Command::Counterexample { p, lambda, dim } => counterexample_cmd(g, p, lambda, dim),
        Command::Suite { name, input, samples, mode, depth, eps, tol, p, lambda } => {
            suite_cmd(g, name, input, samples, mode, depth, eps, tol, p, lambda)
        }
    }
}

fn emit(g: &Global, report: &Report) -> Result<(), Failure> {
    let text = match g.format {
        Format::Json => report.to_canonical_json(),
        Format::Csv => report.to_csv(),
    };
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let global = Global { seed: cli.global.seed, out: cli.global.out.clone(), format: cli.global.format, budget: cli.global.budget };
    let report = match dispatch(cli) {
        Ok(r) => r,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    if let Err(Failure::Input(m) | Failure::Run(m)) = emit(&global, &report) {
        eprintln!("error: {m}");
        return ExitCode::from(2);
    }
    for c in report.checks.iter().filter(|c| c.verdict == Outcome::Inconclusive) {
        eprintln!("inconclusive: {}", c.id);
    }
    match report.first_failure() {
        None => ExitCode::SUCCESS,
        Some(c) => {
            eprintln!(
                "fail: {} margin {:e} > tolerance {:e}; witness {}",
                c.id,
                c.margin,
                c.tolerance,
                serde_json::to_string(&c.witness).unwrap_or_default()
            );
            ExitCode::from(1)
        }
    }
}
