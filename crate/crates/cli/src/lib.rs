//! The `cyclehom` command line.
//!
//! Every subcommand prints one JSON document on standard output and
//! diagnostics on standard error. Exit status is 0 on success, 2 for usage
//! errors and 1 for anything that fails at run time.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclehom::algebra::{build_recovery_system, decompose_linear_combination, RecoveryBudget};
use cyclehom::detection::{detect_cycle_degenerate, detect_directed_cycle, DetectOptions};
use cyclehom::general::{detect_cycle_general_directed, hom_cycle_general_counted};
use cyclehom::generate::{degenerate_graph, gnp, preferential_dag};
use cyclehom::graph::{degeneracy_ordering, read_graph, Digraph, Graph};
use cyclehom::matmul::{comb_exponent, cost_model_ck_with_budget, CostParams, DEFAULT_GRID_BUDGET};
use cyclehom::ops::OpCounter;
use cyclehom::oracle::{hom_count_brute_limited, trace_power, BruteLimits};
use cyclehom::pipeline::{hom_cycle_degenerate_with, Engine, HomOptions};
use cyclehom::Error;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub mod report;

use report::{AlgebraReport, BenchReport, CostModelReport, DegeneracyReport, DetectReport, RunReport};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "CYCLEHOM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "cyclehom", version, about = "Exact cycle homomorphism counting and cycle detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count closed walks of a given length (homomorphisms from a cycle).
    HomCount(HomCountArgs),
    /// Decide whether a simple cycle of a given length exists.
    Detect(DetectArgs),
    /// Print a degeneracy ordering.
    Degeneracy(InputArgs),
    /// Maximize the matrix engine's predicted exponent over a grid.
    CostModel(CostModelArgs),
    /// Recover individual homomorphism counts from a linear combination.
    Algebra(AlgebraArgs),
    /// Count on generated graphs of growing size and report timings.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Edge-list file, or `-` for standard input.
    #[arg(long)]
    pub input: PathBuf,
    /// Read edges as arcs.
    #[arg(long)]
    pub directed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Comb,
    Matmul,
    Auto,
    /// Dense closed-walk propagation; small graphs only.
    Brute,
}

impl EngineArg {
    fn name(self) -> &'static str {
        match self {
            EngineArg::Comb => "comb",
            EngineArg::Matmul => "matmul",
            EngineArg::Auto => "auto",
            EngineArg::Brute => "brute",
        }
    }
}

#[derive(Args, Debug)]
pub struct HomCountArgs {
    /// Cycle length.
    #[arg(long = "cycle")]
    pub cycle: usize,
    #[command(flatten)]
    pub input: InputArgs,
    /// Use the general-graph engine instead of the degenerate pipeline.
    #[arg(long)]
    pub general: bool,
    #[arg(long, value_enum, default_value_t = EngineArg::Comb)]
    pub engine: EngineArg,
    /// Exponent used by the planner and by `auto`.
    #[arg(long, default_value_t = 3.0)]
    pub omega: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DetectMethod {
    /// Gadget reduction for digraphs, transversal counting for graphs.
    Degenerate,
    /// Color coding with the general-graph engine (digraphs only).
    General,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    /// Cycle length.
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub input: InputArgs,
    /// Repetitions; derived from `--delta` when absent.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Acceptable probability of missing an existing cycle.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = DetectMethod::Degenerate)]
    pub method: DetectMethod,
}

#[derive(Args, Debug)]
pub struct CostModelArgs {
    /// Number of sources of the alternating cycle.
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 3.0)]
    pub omega: f64,
    #[arg(long = "grid-step", default_value_t = 0.01)]
    pub grid_step: f64,
    /// Maximum number of grid points to evaluate.
    #[arg(long, default_value_t = DEFAULT_GRID_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct AlgebraArgs {
    /// Pattern digraph files, one per flag.
    #[arg(long = "pattern", required = true)]
    pub patterns: Vec<PathBuf>,
    /// Coefficient of each pattern (integer or fraction like `3/2`).
    #[arg(long = "coefficient", required = true, allow_hyphen_values = true)]
    pub coefficients: Vec<String>,
    /// Target digraph.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Probe size assignments to try.
    #[arg(long, default_value_t = 2000)]
    pub attempts: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Random graphs of bounded degeneracy.
    Degenerate,
    /// Preferential-attachment DAGs, read as digraphs.
    Preferential,
    /// Erdős–Rényi graphs with a fixed average degree.
    Gnp,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Family::Degenerate)]
    pub family: Family,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [256usize, 512, 1024, 2048])]
    pub sizes: Vec<usize>,
    #[arg(long = "cycle", default_value_t = 6)]
    pub cycle: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Comb)]
    pub engine: EngineArg,
    /// Use the general-graph engine.
    #[arg(long)]
    pub general: bool,
    /// Degeneracy bound, or out-degree for preferential DAGs.
    #[arg(long, default_value_t = 3)]
    pub degeneracy: usize,
    /// Average degree for `gnp`.
    #[arg(long = "avg-degree", default_value_t = 4.0)]
    pub avg_degree: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Failure {
        let usage = matches!(
            error.downcast_ref::<Error>(),
            Some(Error::Usage(_) | Error::InvalidParameter(_))
        );
        Failure { code: if usage { 2 } else { 1 }, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        anyhow::Error::new(e).into()
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Error::Usage(msg.into()).into()
}

/// Parses `args` (program name first), runs the command, and writes the
/// report to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command).and_then(|v| write_json(out, &v).map_err(Failure::from)) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}

/// Sizes the global thread pool from [`THREADS_ENV`] when set.
pub fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn write_json(out: &mut dyn Write, v: &serde_json::Value) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn to_value<T: Serialize>(r: T) -> Result<serde_json::Value, Failure> {
    Ok(serde_json::to_value(r).context("serializing report")?)
}

fn execute(cmd: &Command) -> Result<serde_json::Value, Failure> {
    match cmd {
        Command::HomCount(a) => to_value(hom_count(a)?),
        Command::Detect(a) => to_value(detect(a)?),
        Command::Degeneracy(a) => to_value(degeneracy(a)?),
        Command::CostModel(a) => to_value(cost_model(a)?),
        Command::Algebra(a) => to_value(algebra(a)?),
        Command::Bench(a) => to_value(bench(a)?),
    }
}

fn load(path: &Path, directed: bool) -> Result<Graph, Failure> {
    let g = if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading standard input")?;
        cyclehom::graph::parse_graph(&text, directed)
    } else {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        read_graph(file, directed)
    };
    Ok(g.with_context(|| format!("reading {}", path.display()))?)
}

fn degeneracy_of(g: &Graph) -> Result<usize, Failure> {
    Ok(degeneracy_ordering(&g.underlying_undirected())?.degeneracy)
}

/// Counts closed walks of length `l` in `g` with the requested engine.
pub fn count_cycles(g: &Graph, l: usize, engine: EngineArg, general: bool, omega: f64) -> Result<RunReport, Failure> {
    let cost = CostParams::new(omega, 0.01)?;
    let ops = OpCounter::new();
    let start = Instant::now();
    let (count, engine_name, instrumented) = if general {
        (hom_cycle_general_counted(g, l, &ops)?, "general", true)
    } else {
        match engine {
            EngineArg::Brute => {
                if l < 3 {
                    return Err(usage(format!("cycle length must be at least 3, got {l}")));
                }
                (trace_power(g, l)?, "brute", false)
            }
            e => {
                let engine = match e {
                    EngineArg::Matmul => Engine::Matmul,
                    EngineArg::Auto => Engine::Auto,
                    _ => Engine::Comb,
                };
                let opts = HomOptions { engine, cost };
                (hom_cycle_degenerate_with(g, l, &opts, &ops)?, e.name(), true)
            }
        }
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunReport {
        count: count.to_string(),
        n: g.vertex_count(),
        m: g.edge_count(),
        directed: g.is_directed(),
        degeneracy: degeneracy_of(g)?,
        engine: engine_name.to_string(),
        cycle: l,
        elapsed_ms,
        op_counter: instrumented.then(|| ops.get()),
        seed: None,
    })
}

fn hom_count(a: &HomCountArgs) -> Result<RunReport, Failure> {
    let g = load(&a.input.input, a.input.directed)?;
    count_cycles(&g, a.cycle, a.engine, a.general, a.omega)
}

fn detect(a: &DetectArgs) -> Result<DetectReport, Failure> {
    if !(a.delta > 0.0 && a.delta < 1.0) {
        return Err(usage(format!("delta must lie in (0, 1), got {}", a.delta)));
    }
    if a.reps == Some(0) {
        return Err(usage("reps must be positive"));
    }
    let g = load(&a.input.input, a.input.directed)?;
    let opts = DetectOptions { reps: a.reps, seed: a.seed, delta: a.delta, engine: Engine::Comb };
    let reps = opts.repetitions(a.k);
    let start = Instant::now();
    let (found, method) = match a.method {
        DetectMethod::General => {
            if !g.is_directed() {
                return Err(usage("--method general needs --directed"));
            }
            (detect_cycle_general_directed(&g, a.k, reps, a.seed)?, "general")
        }
        DetectMethod::Degenerate if g.is_directed() => (detect_directed_cycle(&g, a.k, &opts)?, "gadget"),
        DetectMethod::Degenerate => (detect_cycle_degenerate(&g, a.k, &opts)?, "transversal"),
    };
    Ok(DetectReport {
        found,
        k: a.k,
        n: g.vertex_count(),
        m: g.edge_count(),
        directed: g.is_directed(),
        method: method.to_string(),
        reps,
        seed: a.seed,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn degeneracy(a: &InputArgs) -> Result<DegeneracyReport, Failure> {
    let g = load(&a.input, a.directed)?;
    let ord = degeneracy_ordering(&g.underlying_undirected())?;
    let labels = g.labels();
    Ok(DegeneracyReport {
        n: g.vertex_count(),
        m: g.edge_count(),
        degeneracy: ord.degeneracy,
        order: ord.order.iter().map(|&v| labels[v].clone()).collect(),
    })
}

fn cost_model(a: &CostModelArgs) -> Result<CostModelReport, Failure> {
    let cp = CostParams::new(a.omega, a.grid_step)?;
    let start = Instant::now();
    let v = cost_model_ck_with_budget(a.k, &cp, a.budget)?;
    let comb = comb_exponent(a.k);
    Ok(CostModelReport {
        k: a.k,
        omega: a.omega,
        grid_step: a.grid_step,
        value: v.value,
        argmax: v.argmax,
        points: v.points,
        comb_exponent: comb,
        dk: v.value.min(comb),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn to_digraph(g: &Graph) -> Result<Digraph, Failure> {
    Ok(Digraph::from_arcs(g.vertex_count(), &g.edges())?)
}

fn algebra(a: &AlgebraArgs) -> Result<AlgebraReport, Failure> {
    if a.patterns.len() != a.coefficients.len() {
        return Err(usage(format!(
            "{} patterns but {} coefficients",
            a.patterns.len(),
            a.coefficients.len()
        )));
    }
    let patterns = a
        .patterns
        .iter()
        .map(|p| to_digraph(&load(p, true)?))
        .collect::<Result<Vec<_>, _>>()?;
    let coefficients = a
        .coefficients
        .iter()
        .map(|c| c.trim().parse::<BigRational>().map_err(|_| usage(format!("bad coefficient `{c}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let target = to_digraph(&load(&a.input, true)?)?;
    let start = Instant::now();
    let sys = build_recovery_system(&patterns, &coefficients, a.seed, RecoveryBudget { attempts: a.attempts })?;
    let limits = BruteLimits { pattern_vertices: 12, target_vertices: 4096 };
    let oracle = |t: &Digraph| -> cyclehom::Result<BigRational> {
        let mut s = BigRational::default();
        for (h, c) in patterns.iter().zip(&coefficients) {
            let v = hom_count_brute_limited(h, t, limits)?;
            s += c * BigRational::from_integer(v.to_biguint().into());
        }
        Ok(s)
    };
    let counts = decompose_linear_combination(&sys, oracle, &target)?;
    let mut probes = vec![Vec::new(); sys.probes.len()];
    for (i, p) in sys.probes.iter().enumerate() {
        probes[sys.order[i]] = p.sizes.clone();
    }
    Ok(AlgebraReport {
        counts: counts.iter().map(ToString::to_string).collect(),
        probe_sizes: probes,
        attempts: sys.attempts,
        seed: a.seed,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn bench(a: &BenchArgs) -> Result<BenchReport, Failure> {
    if a.sizes.is_empty() {
        return Err(usage("at least one size is required"));
    }
    let mut runs = Vec::with_capacity(a.sizes.len());
    for (i, &n) in a.sizes.iter().enumerate() {
        let seed = a.seed.wrapping_add(i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = match a.family {
            Family::Degenerate => degenerate_graph(n, a.degeneracy, &mut rng),
            Family::Preferential => preferential_dag(n, a.degeneracy, &mut rng).to_graph()?,
            Family::Gnp => {
                let p = if n > 1 { (a.avg_degree / (n - 1) as f64).min(1.0) } else { 0.0 };
                gnp(n, p, false, &mut rng)
            }
        };
        let mut r = count_cycles(&g, a.cycle, a.engine, a.general, 3.0)?;
        r.seed = Some(seed);
        runs.push(r);
    }
    Ok(BenchReport { family: format!("{:?}", a.family).to_lowercase(), runs })
}
