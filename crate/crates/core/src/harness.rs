//! Monte Carlo driver: Eb/N0 sweeps, per-point FER and SC-attempt
//! statistics, CSV output.
//!
//! Frame `f` always draws its message and noise from substream `f` of the
//! master seed, so every decoder sees the same frames and results do not
//! depend on the worker count.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{add_noise, ebn0_to_sigma2, frame_rng, llr_init, modulate, LlrVector};
use crate::code::{polar_transform, CodeSpec};
use crate::error::{param, Error, Result};
use crate::oracle::{ml_decode_bruteforce, MAX_ORACLE_K};
use crate::sc::{FlipSet, LlrMode, PmMode, ScDecoder};
use crate::search::{NodeVisit, SearchConfig, Strategy, TreeSearchDecoder};

/// Version of the CSV column layout.
pub const CSV_SCHEMA: u32 = 1;

/// Frames decoded between early-stop checks.
const BATCH: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Sc,
    TsDfs,
    TsBfs,
    TsDfsO,
    TsBfsO,
    Oracle,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 6] = [
        DecoderKind::Sc,
        DecoderKind::TsDfs,
        DecoderKind::TsBfs,
        DecoderKind::TsDfsO,
        DecoderKind::TsBfsO,
        DecoderKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Sc => "SC",
            DecoderKind::TsDfs => "TS-DFS",
            DecoderKind::TsBfs => "TS-BFS",
            DecoderKind::TsDfsO => "TS-DFS-O",
            DecoderKind::TsBfsO => "TS-BFS-O",
            DecoderKind::Oracle => "ORACLE",
        }
    }

    fn search(self) -> Option<(Strategy, bool)> {
        match self {
            DecoderKind::TsDfs => Some((Strategy::Dfs, false)),
            DecoderKind::TsBfs => Some((Strategy::Bfs, false)),
            DecoderKind::TsDfsO => Some((Strategy::Dfs, true)),
            DecoderKind::TsBfsO => Some((Strategy::Bfs, true)),
            DecoderKind::Sc | DecoderKind::Oracle => None,
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecoderKind::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parameter(format!("unknown decoder {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub m: u32,
    pub r: u32,
    pub decoders: Vec<DecoderKind>,
    pub omega: Option<usize>,
    pub ebn0_grid: Vec<f64>,
    pub max_frames: u64,
    /// Stop a point once this many frame errors have been seen.
    pub max_frame_errors: Option<u64>,
    pub seed: u64,
    pub llr_mode: LlrMode,
    pub pm_mode: PmMode,
    pub beta: f64,
    pub workers: usize,
    pub bfs_frontier_cap: Option<usize>,
    /// Transmit without noise (LLRs still scaled by the point's variance).
    pub noiseless: bool,
    pub trace: bool,
    /// Add a wall-clock column to the CSV. Makes output non-reproducible.
    pub timing: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            m: 7,
            r: 3,
            decoders: vec![DecoderKind::TsBfs],
            omega: None,
            ebn0_grid: vec![2.0],
            max_frames: 10_000,
            max_frame_errors: Some(100),
            seed: 1,
            llr_mode: LlrMode::MinSum,
            pm_mode: PmMode::Hard,
            beta: 0.8,
            workers: 1,
            bfs_frontier_cap: None,
            noiseless: false,
            trace: false,
            timing: false,
        }
    }
}

impl SimConfig {
    pub fn code(&self) -> Result<CodeSpec> {
        CodeSpec::build(self.m, self.r)
    }

    pub fn search_config(&self, kind: DecoderKind) -> Option<SearchConfig> {
        kind.search().map(|(strategy, ordered)| SearchConfig {
            strategy,
            omega: self.omega,
            ordered,
            beta: self.beta,
            llr_mode: self.llr_mode,
            pm_mode: self.pm_mode,
            bfs_frontier_cap: self.bfs_frontier_cap,
            trace: self.trace,
            ..SearchConfig::default()
        })
    }

    /// Checks everything that can fail before a frame is simulated.
    pub fn validate(&self) -> Result<CodeSpec> {
        let spec = self.code()?;
        if self.decoders.is_empty() {
            return param("no decoder selected");
        }
        if self.ebn0_grid.is_empty() {
            return param("Eb/N0 grid is empty");
        }
        if let Some(v) = self.ebn0_grid.iter().find(|v| !v.is_finite()) {
            return param(format!("Eb/N0 value {v} is not finite"));
        }
        if self.max_frames == 0 {
            return param("at least one frame is required");
        }
        if self.max_frame_errors == Some(0) {
            return param("max frame errors must be at least 1");
        }
        if self.workers == 0 {
            return param("at least one worker is required");
        }
        for &d in &self.decoders {
            if d == DecoderKind::Oracle && spec.k() > MAX_ORACLE_K {
                return param(format!(
                    "ORACLE decoding needs K <= {MAX_ORACLE_K}, RM({}, {}) has K = {}",
                    self.r,
                    self.m,
                    spec.k()
                ));
            }
            if let Some(cfg) = self.search_config(d) {
                cfg.validate(&spec)?;
            }
        }
        ebn0_to_sigma2(self.ebn0_grid[0], spec.rate())?;
        Ok(spec)
    }
}

/// Message, codeword and channel observation of one simulated frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub u: Vec<u8>,
    pub x: Vec<u8>,
    pub y: Vec<f64>,
    pub llr: LlrVector,
}

/// Draws frame `index`: random message bits first, then the noise.
pub fn simulate_frame(spec: &CodeSpec, seed: u64, index: u64, sigma2: f64, noiseless: bool) -> Result<Frame> {
    let mut rng = frame_rng(seed, index);
    let msg: Vec<u8> = (0..spec.k()).map(|_| u8::from(rng.gen::<bool>())).collect();
    let u = spec.expand(&msg)?;
    let mut x = u.clone();
    polar_transform(&mut x);
    let s = modulate(&x);
    let y = if noiseless { s } else { add_noise(&s, sigma2, &mut rng)? };
    let llr = llr_init(&y, sigma2)?;
    Ok(Frame { u, x, y, llr })
}

/// What one decoder did with one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutcome {
    pub frame: u64,
    pub u_hat: Vec<u8>,
    pub error: bool,
    /// SC decodes spent; zero for the oracle.
    pub attempts: u64,
    /// Path metric of the decision; absent for the oracle.
    pub pm: Option<f64>,
    pub trace: Vec<NodeVisit>,
}

/// One decoder instance per worker.
pub enum FrameDecoder<'a> {
    Sc(ScDecoder<'a>),
    Tree(TreeSearchDecoder<'a>),
    Oracle(&'a CodeSpec),
}

impl<'a> FrameDecoder<'a> {
    pub fn new(spec: &'a CodeSpec, cfg: &SimConfig, kind: DecoderKind) -> Result<Self> {
        Ok(match cfg.search_config(kind) {
            Some(sc) => FrameDecoder::Tree(TreeSearchDecoder::new(spec, sc)?),
            None if kind == DecoderKind::Sc => FrameDecoder::Sc(ScDecoder::new(spec, cfg.llr_mode, cfg.pm_mode)),
            None => FrameDecoder::Oracle(spec),
        })
    }

    pub fn decode(&mut self, index: u64, frame: &Frame) -> Result<FrameOutcome> {
        let (u_hat, attempts, pm, trace) = match self {
            FrameDecoder::Sc(dec) => {
                let out = dec.decode(&frame.llr, &FlipSet::empty())?;
                (out.u_hat, 1, Some(out.pm), Vec::new())
            }
            FrameDecoder::Tree(dec) => {
                let res = dec.decode(&frame.llr).map_err(|e| Error::Frame {
                    frame: index,
                    source: Box::new(e),
                })?;
                (res.u_best, res.sc_attempts, Some(res.pm_best), res.trace)
            }
            FrameDecoder::Oracle(spec) => {
                let mut u = ml_decode_bruteforce(&frame.y, spec)?.x_ml;
                polar_transform(&mut u);
                (u, 0, None, Vec::new())
            }
        };
        Ok(FrameOutcome {
            frame: index,
            error: u_hat != frame.u,
            u_hat,
            attempts,
            pm,
            trace,
        })
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot start {workers} workers: {e}")))
}

fn decode_range(
    pool: &rayon::ThreadPool,
    spec: &CodeSpec,
    cfg: &SimConfig,
    kind: DecoderKind,
    sigma2: f64,
    frames: std::ops::Range<u64>,
) -> Result<Vec<FrameOutcome>> {
    pool.install(|| {
        frames
            .into_par_iter()
            .map_init(
                || FrameDecoder::new(spec, cfg, kind),
                |dec, f| {
                    let dec = dec.as_mut().map_err(|e| Error::Parameter(e.to_string()))?;
                    let frame = simulate_frame(spec, cfg.seed, f, sigma2, cfg.noiseless)?;
                    dec.decode(f, &frame)
                },
            )
            .collect()
    })
}

/// Decodes frames `0..count` at one Eb/N0 point with no early stop; the
/// outcomes are in frame order. Used for paired comparisons.
pub fn run_frames(cfg: &SimConfig, kind: DecoderKind, ebn0_db: f64, count: u64) -> Result<Vec<FrameOutcome>> {
    let spec = cfg.validate()?;
    let sigma2 = ebn0_to_sigma2(ebn0_db, spec.rate())?;
    decode_range(&pool(cfg.workers)?, &spec, cfg, kind, sigma2, 0..count)
}

/// Aggregates for one decoder at one Eb/N0 point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub decoder: DecoderKind,
    pub ebn0_db: f64,
    pub frames_run: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub attempts_total: u64,
    pub avg_attempts: f64,
    pub max_attempts: u64,
    pub wall_seconds: f64,
    /// Per-frame node visits, only when tracing.
    pub traces: Vec<(u64, Vec<NodeVisit>)>,
}

pub fn run_point(cfg: &SimConfig, kind: DecoderKind, ebn0_db: f64) -> Result<SimResult> {
    let spec = cfg.validate()?;
    run_point_with(&pool(cfg.workers)?, &spec, cfg, kind, ebn0_db)
}

fn run_point_with(
    pool: &rayon::ThreadPool,
    spec: &CodeSpec,
    cfg: &SimConfig,
    kind: DecoderKind,
    ebn0_db: f64,
) -> Result<SimResult> {
    let sigma2 = ebn0_to_sigma2(ebn0_db, spec.rate())?;
    let started = Instant::now();
    let mut res = SimResult {
        decoder: kind,
        ebn0_db,
        frames_run: 0,
        frame_errors: 0,
        fer: 0.0,
        attempts_total: 0,
        avg_attempts: 0.0,
        max_attempts: 0,
        wall_seconds: 0.0,
        traces: Vec::new(),
    };
    let error_limit = cfg.max_frame_errors.unwrap_or(u64::MAX);
    let mut next = 0;
    'frames: while next < cfg.max_frames {
        let end = (next + BATCH).min(cfg.max_frames);
        for out in decode_range(pool, spec, cfg, kind, sigma2, next..end)? {
            res.frames_run += 1;
            res.frame_errors += u64::from(out.error);
            res.attempts_total += out.attempts;
            res.max_attempts = res.max_attempts.max(out.attempts);
            if cfg.trace && !out.trace.is_empty() {
                res.traces.push((out.frame, out.trace));
            }
            if res.frame_errors >= error_limit {
                break 'frames;
            }
        }
        next = end;
    }
    res.fer = res.frame_errors as f64 / res.frames_run as f64;
    res.avg_attempts = res.attempts_total as f64 / res.frames_run as f64;
    res.wall_seconds = started.elapsed().as_secs_f64();
    Ok(res)
}

/// Every decoder at every grid point, decoder-major.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<SimResult>> {
    let spec = cfg.validate()?;
    let pool = pool(cfg.workers)?;
    let mut rows = Vec::with_capacity(cfg.decoders.len() * cfg.ebn0_grid.len());
    for &kind in &cfg.decoders {
        for &ebn0 in &cfg.ebn0_grid {
            rows.push(run_point_with(&pool, &spec, cfg, kind, ebn0)?);
        }
    }
    Ok(rows)
}

fn omega_label(omega: Option<usize>) -> String {
    omega.map_or_else(|| "unlimited".to_string(), |w| w.to_string())
}

pub const CSV_COLUMNS: [&str; 18] = [
    "schema",
    "m",
    "r",
    "n",
    "k",
    "decoder",
    "omega",
    "llr_mode",
    "pm_mode",
    "beta",
    "seed",
    "ebn0_db",
    "frames_run",
    "frame_errors",
    "fer",
    "avg_attempts",
    "max_attempts",
    "attempts_total",
];

pub fn write_csv<W: Write>(cfg: &SimConfig, rows: &[SimResult], out: W) -> Result<()> {
    let spec = cfg.code()?;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if cfg.timing {
        header.push("wall_seconds");
    }
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![
            CSV_SCHEMA.to_string(),
            cfg.m.to_string(),
            cfg.r.to_string(),
            spec.n().to_string(),
            spec.k().to_string(),
            row.decoder.to_string(),
            omega_label(cfg.omega),
            cfg.llr_mode.to_string(),
            cfg.pm_mode.to_string(),
            cfg.beta.to_string(),
            cfg.seed.to_string(),
            row.ebn0_db.to_string(),
            row.frames_run.to_string(),
            row.frame_errors.to_string(),
            row.fer.to_string(),
            row.avg_attempts.to_string(),
            row.max_attempts.to_string(),
            row.attempts_total.to_string(),
        ];
        if cfg.timing {
            rec.push(format!("{:.6}", row.wall_seconds));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// One line per node visit, prefixed with decoder, point and frame.
pub fn write_trace<W: Write>(rows: &[SimResult], mut out: W) -> Result<()> {
    for row in rows {
        for (frame, visits) in &row.traces {
            for v in visits {
                writeln!(out, "decoder={} ebn0_db={} frame={frame} {v}", row.decoder, row.ebn0_db)?;
            }
        }
    }
    Ok(())
}

/// Evenly spaced grid from `start` to `stop` inclusive.
pub fn ebn0_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return param(format!("bad Eb/N0 range {start}..{stop} step {step}"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}
