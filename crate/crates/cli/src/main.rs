//! `treeshade` command-line front end.
//!
//! Exit status: 0 success, 1 usage or parameter error, 2 a search exceeded
//! its size cap, 3 a witness failed revalidation.

mod args;
mod families;
mod oracle;
mod output;
mod scan;
mod trees;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use treeshade::oracle::{OracleCache, OracleConfig};

use crate::output::Report;

#[derive(Parser)]
#[command(name = "treeshade", version, about = "Shades of intersecting families, tree colourings and decay comparisons")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Also write the result as versioned JSON.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Also write the result as CSV (tabular commands only).
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Worker threads for per-cell parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Oracle result cache (JSON lines).
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Largest vertex count (C(n,k)) the clique search accepts
    #[arg(long, global = true)]
    clique_cap: Option<u64>,
    /// Largest enumerated side the closure search accepts
    #[arg(long, global = true)]
    closure_cap: Option<u64>,
    /// Seed clique searches with a left-compressed greedy family.
    #[arg(long, global = true)]
    compression_seed: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sets of [n] one element larger that contain a given set.
    Shade(families::ShadeArgs),
    /// The m-shade of a family.
    Mshade(families::MshadeArgs),
    /// Test the (cross-)t-intersecting property.
    CheckIntersecting(families::CheckArgs),
    /// The Frankl family F_i(n, k, t).
    Frankl(families::FranklArgs),
    /// Maximum size of a t-intersecting k-uniform family (closed form).
    AkMax(families::AkArgs),
    /// Maximum product of a cross-intersecting pair (closed form, t = 1).
    MtCross(families::MtArgs),
    /// Conjectured maximum m-shade of a t-intersecting family.
    ConjM0(families::ConjArgs),
    /// Exact values by exhaustive search, with witnesses.
    #[command(subcommand)]
    Oracle(oracle::OracleCmd),
    /// Grid scan driven by a TOML config.
    Scan(scan::ScanArgs),
    /// Ratio tables along monomial curves k(m), t(m).
    #[command(subcommand)]
    Ratio(scan::RatioCmd),
    /// Finite trees inside the full tree of a branching function.
    #[command(subcommand)]
    Tree(trees::TreeCmd),
    /// Decay comparisons between sequences.
    #[command(subcommand)]
    Decay(trees::DecayCmd),
    /// Finite parameter pipeline along a branching function.
    Pipeline(scan::PipelineArgs),
    /// Manage the oracle cache.
    #[command(subcommand)]
    Cache(oracle::CacheCmd),
}

/// Shared state for one invocation.
pub struct Ctx {
    pub cfg: OracleConfig,
    pub cache: Option<OracleCache>,
    pub cache_path: Option<PathBuf>,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<treeshade::Error>() {
            return match err {
                treeshade::Error::Infeasible { .. } => 2,
                treeshade::Error::WitnessInvalid(_) => 3,
                _ => 1,
            };
        }
        if cause.downcast_ref::<oracle::VerifyFailed>().is_some() {
            return 3;
        }
    }
    1
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let mut cfg = OracleConfig::default();
    if let Some(c) = g.clique_cap {
        cfg.clique_cap = c;
    }
    if let Some(c) = g.closure_cap {
        cfg.closure_cap = c;
    }
    cfg.compression_seed |= g.compression_seed;
    let ctx = Ctx {
        cache: g.cache.clone().map(OracleCache::new),
        cache_path: g.cache,
        cfg,
    };
    let report: Report = match cli.cmd {
        Cmd::Shade(a) => families::shade(a)?,
        Cmd::Mshade(a) => families::mshade(a)?,
        Cmd::CheckIntersecting(a) => families::check(a)?,
        Cmd::Frankl(a) => families::frankl(a)?,
        Cmd::AkMax(a) => families::ak_max(a)?,
        Cmd::MtCross(a) => families::mt_cross(a)?,
        Cmd::ConjM0(a) => families::conj_m0(a)?,
        Cmd::Oracle(c) => oracle::run(c, &ctx)?,
        Cmd::Scan(a) => scan::scan(a, &ctx)?,
        Cmd::Ratio(c) => scan::ratio(c, &ctx)?,
        Cmd::Tree(c) => trees::tree(c)?,
        Cmd::Decay(c) => trees::decay(c)?,
        Cmd::Pipeline(a) => scan::pipeline(a, &ctx)?,
        Cmd::Cache(c) => oracle::cache(c, &ctx)?,
    };
    report.emit(g.json.as_deref(), g.csv.as_deref())?;
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
