use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use kmcds::bench::{run_bench, write_csv, BenchGrid, GraphKind};
use kmcds::connectivity::{certify, connectivity_failure, is_m_dominating};
use kmcds::format::{instance_to_json, parse_instance, parse_node_list, parse_rational, to_json};
use kmcds::generate::{gen_gnp, gen_unit_disk, WeightRange};
use kmcds::oracle::{opt_kmcds, ORACLE_CAP};
use kmcds::rooted::Backend;
use kmcds::solver::RootRule;
use kmcds::{solve, Error, Instance, NodeSet, SolverConfig, Variant};

const THREADS_ENV: &str = "KMCDS_THREADS";

/// Minimum-weight k-connected m-dominating sets: generate instances, solve,
/// compute exact optima, verify node sets and run benchmark sweeps.
///
/// Exit status: 0 on success, 2 when the instance is infeasible or a
/// verification fails, 1 on any other error. The worker thread count can be
/// fixed through the KMCDS_THREADS environment variable.
#[derive(Parser)]
#[command(name = "kmcds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Solve an instance and write the solution report as JSON.
    Solve(SolveArgs),
    /// Compute an exact optimum by subset enumeration (small instances only).
    Oracle(OracleArgs),
    /// Check a node set against an instance with the independent verifiers.
    Verify(VerifyArgs),
    /// Sweep a grid of generated instances and emit CSV and JSON tables.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Gnp,
    UnitDisk,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    General,
    UnitDisk,
    GuessRoot,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::General => Variant::General,
            VariantArg::UnitDisk => Variant::UnitDisk,
            VariantArg::GuessRoot => Variant::GuessRoot,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    FlowUnion,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum RootRuleArg {
    MinWeight,
    Enumerate,
}

#[derive(Args)]
struct WeightArgs {
    /// Smallest node weight (inclusive).
    #[arg(long, default_value_t = 1)]
    wmin: u64,
    /// Largest node weight (inclusive).
    #[arg(long, default_value_t = 10)]
    wmax: u64,
}

#[derive(Args)]
struct GenArgs {
    /// Random graph model.
    #[arg(long, value_enum, default_value = "gnp")]
    kind: KindArg,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Edge probability for the gnp model.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Connection radius for the unit-disk model, as an integer, p/q or decimal.
    #[arg(long, default_value = "1/2")]
    radius: String,
    #[command(flatten)]
    weights: WeightArgs,
    /// Connectivity requirement k.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Domination requirement m (at least k).
    #[arg(long)]
    m: Option<usize>,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// Pipeline variant.
    #[arg(long, value_enum, default_value = "general")]
    variant: VariantArg,
    /// Rooted-connectivity backend.
    #[arg(long, value_enum, default_value = "flow-union")]
    backend: BackendArg,
    /// How the attachment set R is chosen from the dominating set.
    #[arg(long, value_enum, default_value = "min-weight")]
    root_rule: RootRuleArg,
    /// Disable the final redundant-node pruning pass.
    #[arg(long)]
    no_prune: bool,
    /// Largest dominating set for which `--root-rule enumerate` tries every k-subset.
    #[arg(long, default_value_t = 12)]
    root_enumeration_cap: usize,
}

impl SolverArgs {
    fn config(&self, timings: bool) -> SolverConfig {
        SolverConfig {
            variant: self.variant.into(),
            backend: match self.backend {
                BackendArg::FlowUnion => Backend::FlowUnion,
                BackendArg::Exact => Backend::Exact,
            },
            root_rule: match self.root_rule {
                RootRuleArg::MinWeight => RootRule::MinWeight,
                RootRuleArg::Enumerate => RootRule::Enumerate,
            },
            prune: !self.no_prune,
            root_enumeration_cap: self.root_enumeration_cap,
            record_timings: timings,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
    /// Include per-stage wall-clock timings in the report (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file (JSON).
    instance: PathBuf,
    /// File holding the node set: a JSON array, or a solve/oracle output.
    #[arg(long, conflicts_with = "nodes", required_unless_present = "nodes")]
    solution: Option<PathBuf>,
    /// Node set as a comma-separated list of ids.
    #[arg(long, value_delimiter = ',')]
    nodes: Option<Vec<usize>>,
}

#[derive(Args)]
struct BenchArgs {
    /// Random graph model.
    #[arg(long, value_enum, default_value = "gnp")]
    kind: KindArg,
    /// Node counts, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "10,14")]
    sizes: Vec<usize>,
    /// Values of k, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    ks: Vec<usize>,
    /// Offsets m - k, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    m_offsets: Vec<usize>,
    /// Variants to run, comma-separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "general")]
    variants: Vec<VariantArg>,
    /// Instances per grid cell.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// Seed of the first instance in each cell.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge probability for the gnp model.
    #[arg(long, default_value_t = 0.6)]
    p: f64,
    /// Connection radius for the unit-disk model.
    #[arg(long, default_value = "1/2")]
    radius: String,
    #[command(flatten)]
    weights: WeightArgs,
    /// Run the exact oracle on instances with at most this many nodes.
    #[arg(long, default_value_t = 14)]
    oracle_cap: usize,
    #[command(flatten)]
    solver: SolverArgs,
    /// CSV output file; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// JSON output file.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn radius(text: &str) -> anyhow::Result<kmcds::Rational> {
    parse_rational(text).with_context(|| format!("bad radius `{text}`"))
}

fn run_gen(args: GenArgs) -> anyhow::Result<ExitCode> {
    let weights = WeightRange::new(args.weights.wmin, args.weights.wmax)?;
    let m = args.m.unwrap_or(args.k);
    let inst = match args.kind {
        KindArg::Gnp => gen_gnp(args.n, args.p, weights, args.k, m, args.seed)?,
        KindArg::UnitDisk => gen_unit_disk(args.n, radius(&args.radius)?, weights, args.k, m, args.seed)?,
    };
    emit(args.output.as_deref(), &instance_to_json(&inst))?;
    Ok(ExitCode::SUCCESS)
}

fn run_solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let report = solve(&inst, &args.solver.config(args.timings))?;
    emit(args.output.as_deref(), &to_json(&report))?;
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(args: OracleArgs) -> anyhow::Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    match opt_kmcds(&inst)? {
        Some(result) => {
            emit(args.output.as_deref(), &to_json(&result))?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            eprintln!("infeasible: no subset of the {} nodes is a solution (cap {ORACLE_CAP})", inst.node_count());
            Ok(ExitCode::from(2))
        }
    }
}

fn run_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let inst = load_instance(&args.instance)?;
    let ids = match (&args.solution, &args.nodes) {
        (Some(path), _) => parse_node_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))?,
        (None, Some(nodes)) => nodes.clone(),
        (None, None) => bail!("either --solution or --nodes is required"),
    };
    let n = inst.node_count();
    if let Some(&bad) = ids.iter().find(|&&v| v >= n) {
        bail!("node {bad} is out of range for an instance with {n} nodes");
    }
    let set: NodeSet = ids.into_iter().collect();
    let g = inst.graph();
    let (k, m) = (inst.k(), inst.m());

    let domination = is_m_dominating(g, &set, m);
    let violators = domination.violators(m);
    let failure = connectivity_failure(&g.induced_subgraph(&set), k);
    let pass = violators.is_empty() && failure.is_none();
    let certificate = if pass { Some(certify(g, &set, k, m)?) } else { None };
    let outcome = json!({
        "pass": pass,
        "k": k,
        "m": m,
        "set": set,
        "weight": inst.weight_of(&set),
        "domination_violators": violators,
        "connectivity_failure": failure,
        "certificate": certificate,
    });
    emit(None, &to_json(&outcome))?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run_bench_cmd(args: BenchArgs) -> anyhow::Result<ExitCode> {
    let kind = match args.kind {
        KindArg::Gnp => GraphKind::Gnp { p: args.p },
        KindArg::UnitDisk => GraphKind::UnitDisk {
            radius: radius(&args.radius)?,
        },
    };
    let grid = BenchGrid {
        kind,
        sizes: args.sizes,
        ks: args.ks,
        m_offsets: args.m_offsets,
        variants: args.variants.into_iter().map(Variant::from).collect(),
        seeds: args.seeds,
        base_seed: args.seed,
        weights: WeightRange::new(args.weights.wmin, args.weights.wmax)?,
        oracle_cap: args.oracle_cap,
        config: args.solver.config(false),
    };
    let rows = run_bench(&grid)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    emit(args.csv.as_deref(), std::str::from_utf8(&csv)?)?;
    if let Some(path) = &args.json {
        emit(Some(path), &to_json(&rows))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value.parse().with_context(|| format!("{THREADS_ENV} must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    configure_threads()?;
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Solve(args) => run_solve(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench_cmd(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            let infeasible = err.chain().any(|cause| cause.downcast_ref::<Error>().is_some_and(Error::is_infeasible));
            eprintln!("error: {err:#}");
            if let Some(Error::Infeasible { witness, .. }) = err.downcast_ref::<Error>() {
                eprintln!("witness: {witness:?}");
            }
            if infeasible {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
