//! ORBGRAND-AI and its two guessing-codeword integrations.
//!
//! * [`decode_orbgrand_ai`] walks patterns over every block and returns the
//!   first decision that satisfies the parity checks.
//! * [`decode_gp`] walks patterns over the base blocks only, extends each to a
//!   codeword and keeps the best one under the block-product likelihood. It
//!   stops once the current query's likelihood bound
//!   `Σ_base log f(ȳ_a | x̄_a) + Σ_comp log f(ȳ_a | x̄*_a)` drops below the
//!   running maximum.
//! * [`decode_gt`] is `decode_gp` with the running maximum taken over the
//!   full-correlation likelihood of the whole sequence. The same bound is
//!   compared against the threshold picked by [`StopMetric`].
//!
//! Query counts include subsets discarded for swapping a block twice.

use std::fmt;
use std::str::FromStr;

use crate::block::{hard_bits, BlockClass, BlockLikelihoods, BlockPartition, ReliabilityTable, Scope};
use crate::channel::{bpsk, loglik_chain, ChannelModel, Kernel};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::pattern::{PatternState, Step, DEFAULT_CAP};

/// Largest `k` the exhaustive ML oracle accepts.
pub const ORACLE_MAX_K: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// GCD stopping bound fell below the running maximum.
    Stopped,
    /// The first query extended to the hard demodulation itself.
    Early,
    /// ORBGRAND-AI found a decision satisfying the parity checks.
    ParityHit,
    Capped,
    Exhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Stopped => "stopped",
            Status::Early => "early",
            Status::ParityHit => "parity_hit",
            Status::Capped => "capped",
            Status::Exhausted => "exhausted",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which running maximum the GT stopping comparison reads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum StopMetric {
    /// Block-product likelihood of the codeword GT currently holds.
    Bound,
    /// The full-correlation running maximum itself.
    Full,
    /// The full-correlation running maximum, with both sides of the
    /// comparison evaluated without the `(1-ρ²)^{-1/2}` factor of each
    /// conditional term. The chain drops `n-1` such factors, the block
    /// product only `n - n_b`, so the threshold sits
    /// `(n_b - 1)·½·ln(1/(1-ρ²))` below [`Full`](StopMetric::Full).
    #[default]
    Unscaled,
}

impl StopMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            StopMetric::Bound => "bound",
            StopMetric::Full => "full",
            StopMetric::Unscaled => "unscaled",
        }
    }
}

impl FromStr for StopMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bound" => Ok(StopMetric::Bound),
            "full" => Ok(StopMetric::Full),
            "unscaled" => Ok(StopMetric::Unscaled),
            other => Err(Error::Config(format!(
                "unknown gt_stop_metric {other:?}, expected bound, full or unscaled"
            ))),
        }
    }
}

impl fmt::Display for StopMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    /// Bound on emitted plus discarded patterns.
    pub cap: u64,
    pub gt_stop_metric: StopMetric,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            cap: DEFAULT_CAP,
            gt_stop_metric: StopMetric::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    /// `None` when ORBGRAND-AI runs out of budget.
    pub codeword: Option<Vec<u8>>,
    /// Patterns drawn, discarded ones included.
    pub queries: u64,
    pub discarded: u64,
    pub status: Status,
    /// Full-correlation log-likelihood of the codeword (`-inf` when absent).
    pub loglik_full: f64,
    /// Block-independent log-likelihood of the codeword under the decoder's
    /// partition (`-inf` when absent).
    pub loglik_block_product: f64,
}

/// One extended candidate seen by a GCD decoder, reported through the
/// tracing entry points.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub query: u64,
    pub codeword: Vec<u8>,
    pub logistic_weight: usize,
    pub delta_sum: f64,
    /// Block-product log-likelihood of the extended codeword.
    pub loglik_gp: f64,
    /// Full-correlation log-likelihood of the extended codeword.
    pub loglik_gt: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum UpdateRule {
    BlockProduct,
    FullCsi,
}

fn chain_packed(kernel: &Kernel, y: &[f64], x: &BitVector) -> f64 {
    kernel.chain(y.iter().enumerate().map(|(i, &yi)| yi - bpsk(x.get(i) as u8)))
}

fn product_packed(lik: &BlockLikelihoods, part: &BlockPartition, x: &BitVector) -> f64 {
    part.blocks()
        .iter()
        .enumerate()
        .map(|(id, blk)| {
            let mask = blk.positions().fold(0u32, |acc, p| (acc << 1) | x.get(p) as u32);
            lik.loglik(id, mask)
        })
        .sum()
}

/// Positions whose bit differs between a block's hard pattern and `alt`.
fn flipped_positions(part: &BlockPartition, block: usize, hard: u32, alt: u32) -> impl Iterator<Item = usize> {
    let blk = *part.block(block);
    let diff = hard ^ alt;
    (0..blk.width).filter(move |t| (diff >> (blk.width - 1 - t)) & 1 == 1).map(move |t| blk.start + t)
}

fn check_inputs(y: &[f64], code: &LinearCode, part: &BlockPartition) {
    assert_eq!(y.len(), code.n(), "received length differs from code length");
    assert_eq!(part.n(), code.n(), "partition length differs from code length");
}

/// ORBGRAND-AI over all blocks of `part`; returns the first decision that
/// passes the parity check.
pub fn decode_orbgrand_ai(
    y: &[f64],
    code: &LinearCode,
    part: &BlockPartition,
    model: &ChannelModel,
    cfg: &DecoderConfig,
) -> DecodeResult {
    check_inputs(y, code, part);
    let lik = BlockLikelihoods::new(y, part, model);
    let table = ReliabilityTable::from_likelihoods(&lik, part, Scope::All);
    let hard = hard_bits(part, lik.hard());
    let h = code.parity_check();
    let columns: Vec<BitVector> = (0..code.n()).map(|c| h.column(c)).collect();

    let entry_syndromes: Vec<BitVector> = table
        .entries()
        .iter()
        .map(|e| {
            let mut s = BitVector::zeros(h.rows());
            for p in flipped_positions(part, e.block, lik.hard()[e.block], e.pattern) {
                s.xor_assign(&columns[p]);
            }
            s
        })
        .collect();

    let base_syndrome = code.syndrome(&BitVector::from_bits(&hard));
    let mut syndrome = base_syndrome.clone();
    let mut state = PatternState::new(&table, cfg.cap);
    let status = loop {
        match state.advance() {
            Step::Emitted => {
                syndrome.clone_from(&base_syndrome);
                for &r in state.current_ranks() {
                    syndrome.xor_assign(&entry_syndromes[r - 1]);
                }
                if syndrome.is_zero() {
                    break Status::ParityHit;
                }
            }
            Step::Capped => break Status::Capped,
            Step::Exhausted => break Status::Exhausted,
        }
    };

    let codeword = (status == Status::ParityHit).then(|| {
        let mut bits = hard.clone();
        for &r in state.current_ranks() {
            let e = table.by_rank(r);
            part.block(e.block).write_pattern(e.pattern, &mut bits);
        }
        bits
    });
    finish(y, model, part, &lik, codeword, &state, status)
}

fn finish(
    y: &[f64],
    model: &ChannelModel,
    part: &BlockPartition,
    lik: &BlockLikelihoods,
    codeword: Option<Vec<u8>>,
    state: &PatternState<'_>,
    status: Status,
) -> DecodeResult {
    let (loglik_full, loglik_block_product) = match &codeword {
        Some(c) => (loglik_chain(y, c, model), lik.product_loglik(part, c)),
        None => (f64::NEG_INFINITY, f64::NEG_INFINITY),
    };
    DecodeResult {
        codeword,
        queries: state.queries(),
        discarded: state.discarded(),
        status,
        loglik_full,
        loglik_block_product,
    }
}

/// ORBGRAND-AI driven GCD with the block-product update rule.
pub fn decode_gp(
    y: &[f64],
    code: &LinearCode,
    part: &BlockPartition,
    model: &ChannelModel,
    cfg: &DecoderConfig,
) -> DecodeResult {
    decode_gcd(y, code, part, model, cfg, UpdateRule::BlockProduct, None)
}

/// ORBGRAND-AI integrated GCD with the full-correlation update rule.
pub fn decode_gt(
    y: &[f64],
    code: &LinearCode,
    part: &BlockPartition,
    model: &ChannelModel,
    cfg: &DecoderConfig,
) -> DecodeResult {
    decode_gcd(y, code, part, model, cfg, UpdateRule::FullCsi, None)
}

/// [`decode_gp`] reporting every extended candidate to `observe`.
pub fn decode_gp_traced(
    y: &[f64],
    code: &LinearCode,
    part: &BlockPartition,
    model: &ChannelModel,
    cfg: &DecoderConfig,
    mut observe: impl FnMut(&Candidate),
) -> DecodeResult {
    decode_gcd(y, code, part, model, cfg, UpdateRule::BlockProduct, Some(&mut observe))
}

/// [`decode_gt`] reporting every extended candidate to `observe`.
pub fn decode_gt_traced(
    y: &[f64],
    code: &LinearCode,
    part: &BlockPartition,
    model: &ChannelModel,
    cfg: &DecoderConfig,
    mut observe: impl FnMut(&Candidate),
) -> DecodeResult {
    decode_gcd(y, code, part, model, cfg, UpdateRule::FullCsi, Some(&mut observe))
}

fn decode_gcd(
    y: &[f64],
    code: &LinearCode,
    part: &BlockPartition,
    model: &ChannelModel,
    cfg: &DecoderConfig,
    rule: UpdateRule,
    mut observe: Option<&mut dyn FnMut(&Candidate)>,
) -> DecodeResult {
    check_inputs(y, code, part);
    assert!(
        part.blocks().iter().all(|b| b.class != BlockClass::Mixed),
        "GCD decoding needs a class-pure partition"
    );
    let kernel = model.kernel();
    let lik = BlockLikelihoods::new(y, part, model);
    let table = ReliabilityTable::from_likelihoods(&lik, part, Scope::BaseOnly);
    let hard = BitVector::from_bits(&hard_bits(part, lik.hard()));

    let mut base_index = vec![usize::MAX; code.n()];
    for (t, &p) in code.base_set().iter().enumerate() {
        base_index[p] = t;
    }
    let hard_base = BitVector::from_bits(&code.base_set().iter().map(|&p| hard.get(p) as u8).collect::<Vec<_>>());
    let first = code.extend_base_packed(&hard_base);
    let entry_deltas: Vec<BitVector> = table
        .entries()
        .iter()
        .map(|e| {
            let mut d = BitVector::zeros(code.n());
            for p in flipped_positions(part, e.block, lik.hard()[e.block], e.pattern) {
                d.xor_assign(code.base_row(base_index[p]));
            }
            d
        })
        .collect();

    let hard_total = lik.hard_total();
    let unscaled_shift = (part.len() as f64 - 1.0) * -0.5 * (1.0 - model.rho() * model.rho()).ln();
    let mut best: Option<BitVector> = None;
    let mut best_selected = f64::NEG_INFINITY;
    let mut best_product = f64::NEG_INFINITY;
    let mut candidate = first.clone();
    let mut state = PatternState::new(&table, cfg.cap);

    let status = loop {
        match state.advance() {
            Step::Emitted => {}
            Step::Capped => break Status::Capped,
            Step::Exhausted => break Status::Exhausted,
        }
        let query = state.emitted();
        let delta_sum = state.current_delta_sum();
        if query > 1 {
            let threshold = match (rule, cfg.gt_stop_metric) {
                (UpdateRule::FullCsi, StopMetric::Full) => best_selected,
                (UpdateRule::FullCsi, StopMetric::Unscaled) => best_selected - unscaled_shift,
                _ => best_product,
            };
            if hard_total - delta_sum < threshold {
                break Status::Stopped;
            }
        }

        candidate.clone_from(&first);
        for &r in state.current_ranks() {
            candidate.xor_assign(&entry_deltas[r - 1]);
        }
        if query == 1 && candidate == hard {
            best = Some(candidate.clone());
            break Status::Early;
        }

        let l_gp = product_packed(&lik, part, &candidate);
        let l_gt = match rule {
            UpdateRule::FullCsi => chain_packed(&kernel, y, &candidate),
            UpdateRule::BlockProduct => f64::NAN,
        };
        if let Some(observe) = observe.as_mut() {
            observe(&Candidate {
                query,
                codeword: candidate.to_bits(),
                logistic_weight: state.current_weight(),
                delta_sum,
                loglik_gp: l_gp,
                loglik_gt: if l_gt.is_nan() { chain_packed(&kernel, y, &candidate) } else { l_gt },
            });
        }
        let selected = match rule {
            UpdateRule::BlockProduct => l_gp,
            UpdateRule::FullCsi => l_gt,
        };
        if selected > best_selected {
            best_selected = selected;
            best_product = l_gp;
            best = Some(candidate.clone());
        }
    };

    finish(y, model, part, &lik, best.map(|c| c.to_bits()), &state, status)
}

/// Exhaustive maximum-likelihood decoding with full correlation. Ties go to
/// the lexicographically smaller codeword.
pub fn decode_ml_oracle(y: &[f64], code: &LinearCode, model: &ChannelModel) -> Result<DecodeResult> {
    let k = code.k();
    if k > ORACLE_MAX_K {
        return Err(Error::OracleLimit { k, limit: ORACLE_MAX_K });
    }
    if y.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            got: y.len(),
        });
    }
    let kernel = model.kernel();
    let g = code.generator();
    let mut cw = BitVector::zeros(code.n());
    let mut best = cw.clone();
    let mut best_ll = chain_packed(&kernel, y, &cw);
    // Gray-code walk: step i flips message bit trailing_zeros(i).
    for i in 1u64..(1u64 << k) {
        cw.xor_assign(g.row(i.trailing_zeros() as usize));
        let ll = chain_packed(&kernel, y, &cw);
        if ll > best_ll || (ll == best_ll && cw.to_bits() < best.to_bits()) {
            best_ll = ll;
            best.clone_from(&cw);
        }
    }
    let bits = best.to_bits();
    Ok(DecodeResult {
        loglik_full: best_ll,
        loglik_block_product: f64::NAN,
        codeword: Some(bits),
        queries: 1u64 << k,
        discarded: 0,
        status: Status::Exhausted,
    })
}

/// The decoders the harness knows how to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderKind {
    Ai,
    Gp,
    Gt,
    Ml,
}

impl DecoderKind {
    pub const ALL: [DecoderKind; 4] = [DecoderKind::Ai, DecoderKind::Gp, DecoderKind::Gt, DecoderKind::Ml];

    pub fn as_str(self) -> &'static str {
        match self {
            DecoderKind::Ai => "AI",
            DecoderKind::Gp => "GP",
            DecoderKind::Gt => "GT",
            DecoderKind::Ml => "ML",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "AI" => Ok(DecoderKind::Ai),
            "GP" => Ok(DecoderKind::Gp),
            "GT" => Ok(DecoderKind::Gt),
            "ML" => Ok(DecoderKind::Ml),
            other => Err(Error::Config(format!("unknown decoder {other:?}, expected AI, GP, GT or ML"))),
        }
    }
}

/// A code together with the two partitions the decoders use: consecutive
/// blocks of `b` for ORBGRAND-AI and the class-pure partition for GP/GT.
#[derive(Clone, Debug)]
pub struct DecoderSuite {
    pub code: LinearCode,
    pub ai_partition: BlockPartition,
    pub gcd_partition: BlockPartition,
    pub config: DecoderConfig,
}

impl DecoderSuite {
    pub fn new(code: LinearCode, b: usize, config: DecoderConfig) -> Self {
        let ai_partition = BlockPartition::uniform(code.n(), b);
        let gcd_partition = BlockPartition::new(code.n(), b, code.base_set());
        DecoderSuite {
            code,
            ai_partition,
            gcd_partition,
            config,
        }
    }

    pub fn decode(&self, kind: DecoderKind, y: &[f64], model: &ChannelModel) -> Result<DecodeResult> {
        Ok(match kind {
            DecoderKind::Ai => decode_orbgrand_ai(y, &self.code, &self.ai_partition, model, &self.config),
            DecoderKind::Gp => decode_gp(y, &self.code, &self.gcd_partition, model, &self.config),
            DecoderKind::Gt => decode_gt(y, &self.code, &self.gcd_partition, model, &self.config),
            DecoderKind::Ml => decode_ml_oracle(y, &self.code, model)?,
        })
    }
}
