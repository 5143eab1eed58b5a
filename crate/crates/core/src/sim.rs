//! Seeded Monte-Carlo BLER and query-count sweeps.
//!
//! Every trial draws its message and noise from a generator seeded by
//! `(master_seed, Eb/N0 point, trial index)`, so a trial's received sequence
//! does not depend on which decoders run, on thread count or on batch order.
//! All decoders at a point see the same received sequences. A decoder stops
//! accumulating once it has seen `min_block_errors` block errors or
//! `trials` trials; the others keep going on the same trial stream.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{derive_seed, fill_noise, seeded_rng, ChannelModel};
use crate::code::{build_crc_code, load_code, random_code, LinearCode, CRC16_DNP};
use crate::decoder::{DecodeResult, DecoderConfig, DecoderKind, DecoderSuite, Status, StopMetric, ORACLE_MAX_K};
use crate::error::{Error, Result};
use crate::pattern::DEFAULT_CAP;

/// Exact CSV header written by [`rows_to_csv`].
pub const CSV_HEADER: &str = "decoder,ebn0_db,trials,block_errors,bler,avg_queries,avg_discarded,status_early,status_stopped,status_capped,status_parity_hit";

const BATCH: u64 = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum CodeSpec {
    Crc { k: usize, poly: u16 },
    Random { n: usize, k: usize, seed: u64 },
    File(PathBuf),
}

impl CodeSpec {
    /// `crc:<k>[:<poly>]`, `random:<n>:<k>[:<seed>]`, `file:<path>` or a
    /// bare path.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("crc:") {
            let mut parts = rest.split(':');
            let k = parts
                .next()
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::Config(format!("bad CRC message length in {s:?}")))?;
            let poly = match parts.next() {
                None => CRC16_DNP,
                Some(p) => parse_u16(p)?,
            };
            if parts.next().is_some() {
                return Err(Error::Config(format!("too many fields in code spec {s:?}")));
            }
            Ok(CodeSpec::Crc { k, poly })
        } else if let Some(rest) = s.strip_prefix("random:") {
            let bad = || Error::Config(format!("bad random code spec {s:?}"));
            let v: Vec<u64> = rest
                .split(':')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            match v.as_slice() {
                &[n, k] => Ok(CodeSpec::Random { n: n as usize, k: k as usize, seed: 0 }),
                &[n, k, seed] => Ok(CodeSpec::Random { n: n as usize, k: k as usize, seed }),
                _ => Err(bad()),
            }
        } else {
            let path = s.strip_prefix("file:").unwrap_or(s);
            if path.is_empty() {
                return Err(Error::Config("empty code spec".into()));
            }
            Ok(CodeSpec::File(PathBuf::from(path)))
        }
    }

    pub fn build(&self) -> Result<LinearCode> {
        match self {
            CodeSpec::Crc { k, poly } => build_crc_code(*k, *poly),
            CodeSpec::Random { n, k, seed } => random_code(*n, *k, *seed),
            CodeSpec::File(path) => load_code(path),
        }
    }
}

fn parse_u16(s: &str) -> Result<u16> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u16::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::Config(format!("bad polynomial {s:?}")))
}

/// Parses `a,b,c` or an inclusive range `start:stop:step`.
pub fn parse_ebn0_list(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("bad Eb/N0 list {s:?}"));
    let s = s.trim();
    if s.contains(':') {
        let v: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let &[start, stop, step] = v.as_slice() else {
            return Err(bad());
        };
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| round9(start + i as f64 * step)).collect())
    } else {
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect()
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

pub fn parse_decoders(s: &str) -> Result<Vec<DecoderKind>> {
    let mut out: Vec<DecoderKind> = Vec::new();
    for name in s.split(',').filter(|t| !t.trim().is_empty()) {
        let kind: DecoderKind = name.parse()?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    Ok(out)
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(Error::Config(format!("bad boolean {other:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub code: CodeSpec,
    pub rho: f64,
    pub b: usize,
    pub ebn0_db: Vec<f64>,
    pub decoders: Vec<DecoderKind>,
    /// Maximum trials per point.
    pub trials: u64,
    /// A decoder stops at a point once it has this many block errors.
    pub min_block_errors: u64,
    pub cap: u64,
    pub master_seed: u64,
    pub gt_stop_metric: StopMetric,
    pub all_zero_tx: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            code: CodeSpec::Crc { k: 48, poly: CRC16_DNP },
            rho: 0.5,
            b: 2,
            ebn0_db: vec![4.0],
            decoders: vec![DecoderKind::Ai, DecoderKind::Gp, DecoderKind::Gt],
            trials: 10_000,
            min_block_errors: 100,
            cap: DEFAULT_CAP,
            master_seed: 1,
            gt_stop_metric: StopMetric::default(),
            all_zero_tx: false,
        }
    }
}

impl ExperimentConfig {
    /// Parses flat `key = value` text; `#` starts a comment. Keys not given
    /// keep their defaults. Relative code file paths resolve against
    /// `base_dir` when one is given.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        if let (CodeSpec::File(path), Some(dir)) = (&mut cfg.code, base_dir) {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ExperimentConfig::parse(&text, path.parent())
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<u64> { v.parse().map_err(|_| Error::Config(format!("bad integer for {key}: {v:?}"))) };
        match key {
            "code" | "code_spec" => self.code = CodeSpec::parse(value)?,
            "rho" => {
                self.rho = value
                    .parse()
                    .map_err(|_| Error::Config(format!("bad rho {value:?}")))?
            }
            "b" | "block_size" => self.b = num(value)? as usize,
            "ebn0" | "ebn0_db" | "ebn0_db_list" => self.ebn0_db = parse_ebn0_list(value)?,
            "decoders" => self.decoders = parse_decoders(value)?,
            "trials" => self.trials = num(value)?,
            "min_block_errors" | "min_errors" => self.min_block_errors = num(value)?,
            "cap" => self.cap = num(value)?,
            "master_seed" | "seed" => self.master_seed = num(value)?,
            "gt_stop_metric" => self.gt_stop_metric = value.parse()?,
            "all_zero_tx" => self.all_zero_tx = parse_bool(value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.min_block_errors == 0 {
            return Err(Error::Config("min_block_errors must be at least 1".into()));
        }
        if self.cap == 0 {
            return Err(Error::Config("cap must be at least 1".into()));
        }
        if self.decoders.is_empty() {
            return Err(Error::Config("no decoders selected".into()));
        }
        if self.ebn0_db.is_empty() || self.ebn0_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("Eb/N0 list must be non-empty and finite".into()));
        }
        if !(self.rho > -1.0 && self.rho < 1.0) {
            return Err(Error::Config(format!("rho must lie in (-1, 1), got {}", self.rho)));
        }
        if self.b == 0 {
            return Err(Error::Config("block size must be at least 1".into()));
        }
        Ok(())
    }

    pub fn decoder_config(&self) -> DecoderConfig {
        DecoderConfig {
            cap: self.cap,
            gt_stop_metric: self.gt_stop_metric,
        }
    }
}

/// Aggregated statistics of one decoder at one Eb/N0 point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub decoder: DecoderKind,
    pub ebn0_db: f64,
    pub trials_run: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub avg_queries: f64,
    pub avg_discarded: f64,
    /// `avg_queries / avg_queries(AI)` at the same point, when AI ran.
    pub avg_queries_ratio_vs_ai: Option<f64>,
    pub status_early: u64,
    pub status_stopped: u64,
    pub status_capped: u64,
    pub status_parity_hit: u64,
    pub status_exhausted: u64,
}

impl SweepRow {
    /// Binomial standard error of the BLER estimate.
    pub fn bler_std_err(&self) -> f64 {
        (self.bler * (1.0 - self.bler) / self.trials_run as f64).sqrt()
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    trials: u64,
    errors: u64,
    queries: u64,
    discarded: u64,
    early: u64,
    stopped: u64,
    capped: u64,
    parity_hit: u64,
    exhausted: u64,
}

impl Tally {
    fn add(&mut self, res: &DecodeResult, sent: &[u8]) {
        self.trials += 1;
        if res.codeword.as_deref() != Some(sent) {
            self.errors += 1;
        }
        self.queries += res.queries;
        self.discarded += res.discarded;
        match res.status {
            Status::Early => self.early += 1,
            Status::Stopped => self.stopped += 1,
            Status::Capped => self.capped += 1,
            Status::ParityHit => self.parity_hit += 1,
            Status::Exhausted => self.exhausted += 1,
        }
    }

    fn row(&self, decoder: DecoderKind, ebn0_db: f64) -> SweepRow {
        let t = self.trials.max(1) as f64;
        SweepRow {
            decoder,
            ebn0_db,
            trials_run: self.trials,
            block_errors: self.errors,
            bler: self.errors as f64 / t,
            avg_queries: self.queries as f64 / t,
            avg_discarded: self.discarded as f64 / t,
            avg_queries_ratio_vs_ai: None,
            status_early: self.early,
            status_stopped: self.stopped,
            status_capped: self.capped,
            status_parity_hit: self.parity_hit,
            status_exhausted: self.exhausted,
        }
    }
}

/// Transmitted codeword and received sequence of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialInput {
    pub codeword: Vec<u8>,
    pub y: Vec<f64>,
}

/// A configured experiment: the code and decoders built once, reused across
/// points.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub suite: DecoderSuite,
}

impl Experiment {
    /// Validates the configuration and builds the code. Fails before any
    /// trial runs.
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let code = config.code.build()?;
        if config.b > code.n() {
            return Err(Error::Config(format!("block size {} exceeds code length {}", config.b, code.n())));
        }
        if config.b > crate::block::MAX_BLOCK_WIDTH {
            return Err(Error::Config(format!(
                "block size {} exceeds the supported maximum {}",
                config.b,
                crate::block::MAX_BLOCK_WIDTH
            )));
        }
        if config.decoders.contains(&DecoderKind::Ml) && code.k() > ORACLE_MAX_K {
            return Err(Error::Config(format!(
                "ML oracle needs k <= {ORACLE_MAX_K}, code has k = {}",
                code.k()
            )));
        }
        let suite = DecoderSuite::new(code, config.b, config.decoder_config());
        Ok(Experiment { config, suite })
    }

    pub fn code(&self) -> &LinearCode {
        &self.suite.code
    }

    pub fn channel(&self, ebn0_db: f64) -> Result<ChannelModel> {
        ChannelModel::from_ebn0(ebn0_db, self.code().rate(), self.config.rho)
    }

    /// Seed of trial `t` at the given point.
    pub fn trial_seed(&self, ebn0_db: f64, t: u64) -> u64 {
        derive_seed(self.config.master_seed, ebn0_db.to_bits(), t)
    }

    pub fn trial_input(&self, model: &ChannelModel, ebn0_db: f64, t: u64) -> TrialInput {
        let code = self.code();
        let mut rng = seeded_rng(self.trial_seed(ebn0_db, t));
        let codeword = if self.config.all_zero_tx {
            vec![0; code.n()]
        } else {
            let msg: Vec<u8> = (0..code.k()).map(|_| rng.random::<bool>() as u8).collect();
            code.encode(&msg).expect("message length matches k")
        };
        let mut y = vec![0.0; code.n()];
        fill_noise(&mut rng, model, &mut y);
        for (yi, &b) in y.iter_mut().zip(&codeword) {
            *yi += if b == 0 { 1.0 } else { -1.0 };
        }
        TrialInput { codeword, y }
    }

    /// Runs every configured decoder at one point on shared trials.
    pub fn run_point(&self, ebn0_db: f64) -> Result<Vec<SweepRow>> {
        self.run_point_observed(ebn0_db, &self.config.decoders, |_, _, _, _| {})
    }

    /// [`run_point`](Self::run_point) for an explicit decoder list, calling
    /// `observe(decoder, trial, y, result)` for every decode that counts.
    pub fn run_point_observed<F>(&self, ebn0_db: f64, decoders: &[DecoderKind], observe: F) -> Result<Vec<SweepRow>>
    where
        F: Fn(DecoderKind, u64, &[f64], &DecodeResult) + Sync,
    {
        let model = self.channel(ebn0_db)?;
        let cfg = &self.config;
        let mut tallies = vec![Tally::default(); decoders.len()];
        let active = |tally: &Tally| tally.errors < cfg.min_block_errors && tally.trials < cfg.trials;

        let mut next = 0u64;
        while tallies.iter().any(active) {
            let end = (next + BATCH).min(cfg.trials);
            let running: Vec<bool> = tallies.iter().map(active).collect();
            let batch: Vec<(TrialInput, Vec<Option<DecodeResult>>)> = (next..end)
                .into_par_iter()
                .map(|t| {
                    let input = self.trial_input(&model, ebn0_db, t);
                    let results = decoders
                        .iter()
                        .zip(&running)
                        .map(|(&kind, &on)| {
                            on.then(|| self.suite.decode(kind, &input.y, &model))
                                .transpose()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((input, results))
                })
                .collect::<Result<_>>()?;

            for (offset, (input, results)) in batch.iter().enumerate() {
                let t = next + offset as u64;
                for ((tally, res), &kind) in tallies.iter_mut().zip(results).zip(decoders) {
                    if let Some(res) = res {
                        if active(tally) {
                            tally.add(res, &input.codeword);
                            observe(kind, t, &input.y, res);
                        }
                    }
                }
            }
            next = end;
        }

        let mut rows: Vec<SweepRow> = tallies
            .iter()
            .zip(decoders)
            .map(|(tally, &kind)| tally.row(kind, ebn0_db))
            .collect();
        if let Some(ai) = rows.iter().find(|r| r.decoder == DecoderKind::Ai).map(|r| r.avg_queries) {
            for row in &mut rows {
                row.avg_queries_ratio_vs_ai = Some(row.avg_queries / ai);
            }
        }
        Ok(rows)
    }

    /// One row per (Eb/N0, decoder), points in configured order.
    pub fn run_sweep(&self) -> Result<Vec<SweepRow>> {
        let mut rows = Vec::new();
        for &ebn0 in &self.config.ebn0_db {
            rows.extend(self.run_point(ebn0)?);
        }
        Ok(rows)
    }
}

/// Single decoder at a single point.
pub fn run_point(config: &ExperimentConfig, decoder: DecoderKind, ebn0_db: f64) -> Result<SweepRow> {
    let exp = Experiment::new(config.clone())?;
    Ok(exp
        .run_point_observed(ebn0_db, &[decoder], |_, _, _, _| {})?
        .remove(0))
}

/// Runs the configured sweep and renders it as CSV.
pub fn run_sweep(config: &ExperimentConfig) -> Result<String> {
    Ok(rows_to_csv(&Experiment::new(config.clone())?.run_sweep()?))
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.decoder,
            r.ebn0_db,
            r.trials_run,
            r.block_errors,
            r.bler,
            r.avg_queries,
            r.avg_discarded,
            r.status_early,
            r.status_stopped,
            r.status_capped,
            r.status_parity_hit
        );
    }
    s
}

pub fn write_csv(path: impl AsRef<Path>, rows: &[SweepRow]) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, rows_to_csv(rows)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Whitespace- or comma-separated reals.
pub fn parse_soft_sequence(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: f64 = t.parse().map_err(|_| Error::Config(format!("bad received value {t:?}")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Config(format!("non-finite received value {t:?}")))
            }
        })
        .collect()
}

/// Eb/N0 at which a BLER curve crosses `target`, by linear interpolation of
/// `log10(BLER)` between the first pair of adjacent points that brackets it.
/// Points must be sorted by Eb/N0.
pub fn ebn0_at_bler(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((x0, b0), (x1, b1)) = (w[0], w[1]);
        if b0 >= target && b1 <= target && b0 > 0.0 && b1 > 0.0 {
            if b0 == b1 {
                return Some(x0);
            }
            let (l0, l1, lt) = (b0.log10(), b1.log10(), target.log10());
            Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1))
        } else {
            None
        }
    })
}
