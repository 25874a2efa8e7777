//! Command-line front end: `count` solves one instance, `gen` synthesizes
//! benchmark instances, `bench` runs and scores external solver commands.
//!
//! `count` prints the decimal path count alone on stdout; all diagnostics go
//! to stderr as `error: <tag>[: detail]` with a nonzero exit code.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use pathcount::dispatch::{self, AlgoChoice, SolveOptions};
use pathcount::fbs::{DEFAULT_ORDER_EFFORT, DEFAULT_STATE_CAP};
use pathcount::gen::{self, Family, GenSpec, LengthPolicy};
use pathcount::harness::{self, BenchmarkParams, SolverSpec};
use pathcount::instance::{serialize_instance, Instance, ProblemKind};
use pathcount::SolverError;

#[derive(Parser)]
#[command(name = "pathcount", version, about = "Exact length-bounded simple-path counting")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count qualifying paths of an instance file; prints the decimal count.
    Count(CountArgs),
    /// Generate a synthetic instance in extended-DIMACS format.
    Gen(GenArgs),
    /// Run and score solver commands over a benchmark directory.
    Bench {
        #[command(subcommand)]
        cmd: BenchCmd,
    },
}

#[derive(Args)]
struct CountArgs {
    /// Instance file in extended-DIMACS format.
    instance: PathBuf,
    /// Engine choice; `auto` dispatches on instance features.
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Wallclock budget in seconds; 0 disables the limit.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    /// Randomized restarts when searching for an edge order.
    #[arg(long, default_value_t = DEFAULT_ORDER_EFFORT)]
    order_effort: u32,
    /// Cap on live DP states before the frontier engine gives up.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Bt,
    Fbs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertices (complete family).
    #[arg(long, default_value_t = 8)]
    n: u32,
    #[arg(long, default_value_t = 3)]
    rows: u32,
    #[arg(long, default_value_t = 3)]
    cols: u32,
    #[arg(long, default_value_t = 4)]
    cliques: u32,
    #[arg(long, default_value_t = 5)]
    clique_size: u32,
    /// Edges per junction between cliques.
    #[arg(long, default_value_t = 1)]
    bridges: u32,
    /// Produce a single-pair instance (most distant terminals).
    #[arg(long, conflicts_with = "pca")]
    pcs: bool,
    /// Produce an all-pairs instance.
    #[arg(long)]
    pca: bool,
    /// Apply the random remove/rewire perturbation pass.
    #[arg(long)]
    perturb: bool,
    /// Geometric decay of the length draw over [diameter, n].
    #[arg(long, default_value_t = 0.7)]
    len_ratio: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Complete,
    Grid,
    PathLike,
    TreeLike,
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Run each configured solver on every instance in a directory.
    Run(BenchRunArgs),
    /// Turn a runs CSV into a JSON score report.
    Report(BenchReportArgs),
}

#[derive(Args)]
struct BenchRunArgs {
    /// Directory of instance files.
    dir: PathBuf,
    /// TOML file: `[[solvers]] id = "...", command = ["prog", "arg", ...]`.
    #[arg(long)]
    solvers: PathBuf,
    /// Per-run wallclock budget in seconds.
    #[arg(long, default_value_t = 600.0)]
    budget: f64,
    /// Concurrent solver processes; 1 keeps timings honest.
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    /// Output CSV: solver,benchmark,status,answer,wall_time_ms.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchReportArgs {
    /// Runs CSV produced by `bench run`.
    runs: PathBuf,
    /// Instance directory; enables parameter/time correlations.
    #[arg(long)]
    instances: Option<PathBuf>,
    /// Budget the runs were made under, in seconds.
    #[arg(long, default_value_t = 600.0)]
    budget: f64,
    /// Output JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    tag: &'static str,
    detail: String,
}

impl Failure {
    fn new(tag: &'static str, detail: impl Into<String>) -> Self {
        Self { tag, detail: detail.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Count(args) => cmd_count(args),
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Bench { cmd: BenchCmd::Run(args) } => cmd_bench_run(args),
        Cmd::Bench { cmd: BenchCmd::Report(args) } => cmd_bench_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if f.detail.is_empty() {
                eprintln!("error: {}", f.tag);
            } else {
                eprintln!("error: {}: {}", f.tag, f.detail);
            }
            ExitCode::FAILURE
        }
    }
}

fn cmd_count(args: CountArgs) -> Result<(), Failure> {
    let inst = Instance::from_path(&args.instance)
        .map_err(|e| Failure::new("parse", e.to_string()))?;
    let opts = SolveOptions {
        algo: match args.algo {
            Algo::Auto => AlgoChoice::Auto,
            Algo::Bt => AlgoChoice::Bt,
            Algo::Fbs => AlgoChoice::Fbs,
        },
        timeout: (args.timeout > 0.0).then(|| Duration::from_secs_f64(args.timeout)),
        order_effort: args.order_effort,
        state_cap: args.state_cap,
        cross_check: false,
        ..SolveOptions::default()
    };
    let count = dispatch::solve(&inst, &opts).map_err(|e| {
        let tag = match e {
            SolverError::Timeout => "timeout",
            SolverError::MemoryBudgetExceeded { .. } => "memory-budget-exceeded",
            SolverError::BudgetExceeded { .. } => "budget-exceeded",
            SolverError::Cancelled => "cancelled",
            SolverError::OrderMismatch { .. } => "order-mismatch",
        };
        Failure::new(tag, e.to_string())
    })?;
    println!("{count}");
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let family = match args.family {
        FamilyArg::Complete => Family::Complete { n: args.n },
        FamilyArg::Grid => Family::Grid { rows: args.rows, cols: args.cols },
        FamilyArg::PathLike => Family::PathLike {
            cliques: args.cliques,
            clique_size: args.clique_size,
            bridges: args.bridges,
        },
        FamilyArg::TreeLike => Family::TreeLike {
            cliques: args.cliques,
            clique_size: args.clique_size,
            bridges: args.bridges,
        },
    };
    if !args.pcs && !args.pca {
        return Err(Failure::new("usage", "pass --pcs or --pca"));
    }
    let spec = GenSpec {
        family,
        seed: args.seed,
        perturb: args.perturb,
        length: LengthPolicy { ratio: args.len_ratio },
        kind: if args.pcs { ProblemKind::SinglePair } else { ProblemKind::AllPairs },
    };
    let inst = gen::generate_instance(&spec).map_err(|e| Failure::new("gen", e.to_string()))?;
    let text = serialize_instance(&inst);
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new("io", e.to_string()))?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Deserialize)]
struct SolversFile {
    solvers: Vec<SolverEntry>,
}

#[derive(Deserialize)]
struct SolverEntry {
    id: String,
    command: Vec<String>,
}

fn cmd_bench_run(args: BenchRunArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.solvers).map_err(|e| Failure::new("io", e.to_string()))?;
    let file: SolversFile =
        toml::from_str(&text).map_err(|e| Failure::new("config", e.to_string()))?;
    if file.solvers.is_empty() {
        return Err(Failure::new("config", "no solvers configured"));
    }
    let solvers: Vec<SolverSpec> = file
        .solvers
        .into_iter()
        .map(|s| SolverSpec { id: s.id, command: s.command })
        .collect();
    let records = harness::run_benchmarks(
        &args.dir,
        &solvers,
        Duration::from_secs_f64(args.budget),
        args.parallelism,
    )
    .map_err(|e| Failure::new("bench", e.to_string()))?;
    harness::write_records_csv(&args.out, &records)
        .map_err(|e| Failure::new("io", e.to_string()))?;
    let solved = records.iter().filter(|r| r.status == harness::RunStatus::Solved).count();
    eprintln!("{} runs recorded ({} solved) -> {}", records.len(), solved, args.out.display());
    Ok(())
}

fn cmd_bench_report(args: BenchReportArgs) -> Result<(), Failure> {
    let records = harness::read_records_csv(&args.runs)
        .map_err(|e| Failure::new("io", e.to_string()))?;
    let params = match &args.instances {
        Some(dir) => Some(load_params(dir)?),
        None => None,
    };
    let report = harness::build_report(
        &records,
        Duration::from_secs_f64(args.budget),
        params.as_deref(),
    );
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Failure::new("report", e.to_string()))?;
    match &args.out {
        Some(path) => fs::write(path, json).map_err(|e| Failure::new("io", e.to_string()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn load_params(dir: &Path) -> Result<Vec<BenchmarkParams>, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::new("io", e.to_string()))?
        .filter_map(|entry| entry.ok())
        .map(|entry| entry.path())
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut params = Vec::with_capacity(paths.len());
    for path in paths {
        let inst = Instance::from_path(&path)
            .map_err(|e| Failure::new("parse", format!("{}: {e}", path.display())))?;
        let benchmark = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        params.push(BenchmarkParams { benchmark, features: dispatch::extract_features(&inst) });
    }
    Ok(params)
}
