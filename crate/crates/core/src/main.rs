use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use rm_treesearch::harness::{self, DecoderKind, SimConfig};
use rm_treesearch::{LlrMode, PmMode};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LlrArg {
    Minsum,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PmArg {
    Hard,
    Exact,
}

/// Monte Carlo FER and SC-attempt simulation of Reed-Muller tree-search decoders.
#[derive(Debug, Parser)]
#[command(name = "rmts", version)]
struct Args {
    /// Code length exponent, N = 2^m.
    #[arg(long)]
    m: u32,
    /// Code order.
    #[arg(long)]
    r: u32,
    /// Comma-separated decoders: SC, TS-DFS, TS-BFS, TS-DFS-O, TS-BFS-O, ORACLE.
    #[arg(long, value_delimiter = ',', default_value = "TS-BFS")]
    decoder: Vec<String>,
    /// Maximum number of simultaneous flips, or "unlimited".
    #[arg(long, default_value = "unlimited")]
    omega: String,
    #[arg(long, requires = "ebn0_stop")]
    ebn0_start: Option<f64>,
    #[arg(long, requires = "ebn0_start")]
    ebn0_stop: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    ebn0_step: f64,
    /// Explicit comma-separated Eb/N0 points in dB.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["ebn0_start", "ebn0_stop"])]
    ebn0_list: Vec<f64>,
    /// Frames per point.
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    /// Stop a point after this many frame errors (0 disables early stop).
    #[arg(long, default_value_t = 100)]
    max_errors: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.8)]
    beta: f64,
    #[arg(long, value_enum, default_value = "minsum")]
    llr_mode: LlrArg,
    #[arg(long, value_enum, default_value = "hard")]
    pm_mode: PmArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Abort a BFS decode whose frontier grows past this many nodes.
    #[arg(long)]
    frontier_cap: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one line per tree-node visit to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Append a wall-clock column to the CSV.
    #[arg(long)]
    timing: bool,
}

fn parse_omega(s: &str) -> Result<Option<usize>> {
    if s.eq_ignore_ascii_case("unlimited") || s.eq_ignore_ascii_case("inf") {
        return Ok(None);
    }
    Ok(Some(s.parse().with_context(|| format!("omega must be an integer or \"unlimited\", got {s:?}"))?))
}

fn config(args: &Args) -> Result<SimConfig> {
    let decoders = args
        .decoder
        .iter()
        .map(|d| d.parse::<DecoderKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let ebn0_grid = match (args.ebn0_start, args.ebn0_stop) {
        (Some(a), Some(b)) => harness::ebn0_range(a, b, args.ebn0_step)?,
        _ if !args.ebn0_list.is_empty() => args.ebn0_list.clone(),
        _ => bail!("give either --ebn0-start/--ebn0-stop or --ebn0-list"),
    };
    let cfg = SimConfig {
        m: args.m,
        r: args.r,
        decoders,
        omega: parse_omega(&args.omega)?,
        ebn0_grid,
        max_frames: args.frames,
        max_frame_errors: (args.max_errors > 0).then_some(args.max_errors),
        seed: args.seed,
        llr_mode: match args.llr_mode {
            LlrArg::Minsum => LlrMode::MinSum,
            LlrArg::Exact => LlrMode::Exact,
        },
        pm_mode: match args.pm_mode {
            PmArg::Hard => PmMode::Hard,
            PmArg::Exact => PmMode::Exact,
        },
        beta: args.beta,
        workers: args.workers,
        bfs_frontier_cap: args.frontier_cap,
        noiseless: false,
        trace: args.trace.is_some(),
        timing: args.timing,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> Result<()> {
    let args = Args::parse();
    let cfg = config(&args)?;
    let rows = harness::run_sweep(&cfg)?;

    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            harness::write_csv(&cfg, &rows, BufWriter::new(file))?;
        }
        None => harness::write_csv(&cfg, &rows, io::stdout().lock())?,
    }
    if let Some(path) = &args.trace {
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        let mut w = BufWriter::new(file);
        harness::write_trace(&rows, &mut w)?;
        w.flush()?;
    }
    Ok(())
}
