//! Grouping of symbols into blocks and block-level reliabilities.
//!
//! A block is a run of consecutive positions. Its bit pattern is held in a
//! `u32` mask with the first position as the most significant bit, so numeric
//! order on masks is lexicographic order on the bits.

use crate::channel::{bpsk, ChannelModel};

/// Largest supported block width; a block has `2^width` candidate patterns.
pub const MAX_BLOCK_WIDTH: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockClass {
    /// Every position is a base bit.
    Base,
    /// Every position is in the complement set.
    Comp,
    /// Only produced by [`BlockPartition::uniform`], which ignores classes.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    pub width: usize,
    pub class: BlockClass,
}

impl Block {
    pub fn positions(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.width
    }

    /// Extracts this block's pattern from a full bit sequence.
    pub fn pattern_of(&self, bits: &[u8]) -> u32 {
        bits[self.positions()]
            .iter()
            .fold(0, |acc, &b| (acc << 1) | (b & 1) as u32)
    }

    /// Writes `mask` into this block's positions.
    pub fn write_pattern(&self, mask: u32, bits: &mut [u8]) {
        for (t, slot) in bits[self.positions()].iter_mut().enumerate() {
            *slot = ((mask >> (self.width - 1 - t)) & 1) as u8;
        }
    }
}

/// Disjoint runs of consecutive positions covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    b: usize,
    blocks: Vec<Block>,
}

impl BlockPartition {
    /// Class-pure greedy partition: a block grows while the next position is
    /// consecutive, of the same class (base or complement) and the block holds
    /// fewer than `b` positions.
    pub fn new(n: usize, b: usize, base_set: &[usize]) -> Self {
        assert!((1..=n).contains(&b), "block size must lie in 1..=n");
        assert!(b <= MAX_BLOCK_WIDTH, "block size above {MAX_BLOCK_WIDTH}");
        let mut is_base = vec![false; n];
        for &i in base_set {
            is_base[i] = true;
        }
        let class_of = |i: usize| if is_base[i] { BlockClass::Base } else { BlockClass::Comp };

        let mut blocks: Vec<Block> = Vec::new();
        for i in 0..n {
            match blocks.last_mut() {
                Some(cur) if cur.class == class_of(i) && cur.width < b => cur.width += 1,
                _ => blocks.push(Block {
                    start: i,
                    width: 1,
                    class: class_of(i),
                }),
            }
        }
        BlockPartition { n, b, blocks }
    }

    /// Consecutive blocks of `b` positions (the last may be shorter), with no
    /// regard to base membership. Every block is [`BlockClass::Mixed`].
    pub fn uniform(n: usize, b: usize) -> Self {
        assert!((1..=n).contains(&b), "block size must lie in 1..=n");
        assert!(b <= MAX_BLOCK_WIDTH, "block size above {MAX_BLOCK_WIDTH}");
        let blocks = (0..n)
            .step_by(b)
            .map(|start| Block {
                start,
                width: b.min(n - start),
                class: BlockClass::Mixed,
            })
            .collect();
        BlockPartition { n, b, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nominal block size.
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &Block {
        &self.blocks[id]
    }

    /// Index of the block containing position `pos`.
    pub fn block_of(&self, pos: usize) -> usize {
        self.blocks.partition_point(|blk| blk.start + blk.width <= pos)
    }
}

/// Shorthand for [`BlockPartition::new`].
pub fn make_partition(n: usize, b: usize, base_set: &[usize]) -> BlockPartition {
    BlockPartition::new(n, b, base_set)
}

/// Log-likelihood of every pattern of every block for one received sequence.
#[derive(Clone, Debug)]
pub struct BlockLikelihoods {
    tables: Vec<Vec<f64>>,
    hard: Vec<u32>,
}

impl BlockLikelihoods {
    pub fn new(y: &[f64], part: &BlockPartition, model: &ChannelModel) -> Self {
        assert_eq!(y.len(), part.n(), "received length differs from partition length");
        let kernel = model.kernel();
        let mut tables = Vec::with_capacity(part.len());
        let mut hard = Vec::with_capacity(part.len());
        for blk in part.blocks() {
            let ys = &y[blk.positions()];
            let w = blk.width;
            let table: Vec<f64> = (0..1u32 << w)
                .map(|mask| {
                    kernel.chain(
                        ys.iter()
                            .enumerate()
                            .map(|(t, &yt)| yt - bpsk(((mask >> (w - 1 - t)) & 1) as u8)),
                    )
                })
                .collect();
            // Strict comparison keeps the lexicographically smallest argmax.
            let best = (1..table.len()).fold(0, |best, m| if table[m] > table[best] { m } else { best });
            hard.push(best as u32);
            tables.push(table);
        }
        BlockLikelihoods { tables, hard }
    }

    #[inline]
    pub fn loglik(&self, block: usize, mask: u32) -> f64 {
        self.tables[block][mask as usize]
    }

    /// Hard-demodulated pattern of every block.
    pub fn hard(&self) -> &[u32] {
        &self.hard
    }

    /// Sum of block log-likelihoods at the hard patterns.
    pub fn hard_total(&self) -> f64 {
        self.hard.iter().enumerate().map(|(i, &m)| self.loglik(i, m)).sum()
    }

    /// Block-independent log-likelihood of a full bit sequence.
    pub fn product_loglik(&self, part: &BlockPartition, bits: &[u8]) -> f64 {
        part.blocks()
            .iter()
            .enumerate()
            .map(|(i, blk)| self.loglik(i, blk.pattern_of(bits)))
            .sum()
    }
}

/// Per-block likelihood argmax; ties go to the lexicographically smaller pattern.
pub fn hard_demod(y: &[f64], part: &BlockPartition, model: &ChannelModel) -> Vec<u32> {
    BlockLikelihoods::new(y, part, model).hard
}

/// Full hard-demodulated bit sequence.
pub fn hard_bits(part: &BlockPartition, hard: &[u32]) -> Vec<u8> {
    let mut bits = vec![0u8; part.n()];
    for (blk, &mask) in part.blocks().iter().zip(hard) {
        blk.write_pattern(mask, &mut bits);
    }
    bits
}

/// Which blocks contribute alternatives to a reliability table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    All,
    BaseOnly,
}

impl Scope {
    pub fn includes(self, class: BlockClass) -> bool {
        match self {
            Scope::All => true,
            Scope::BaseOnly => class == BlockClass::Base,
        }
    }
}

/// One alternative to a block's hard pattern.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReliabilityEntry {
    pub block: usize,
    pub pattern: u32,
    /// Relative reliability: log-likelihood lost by swapping in `pattern`.
    pub delta: f64,
}

/// Alternatives of all in-scope blocks sorted by ascending relative
/// reliability. Ranks are 1-based: entry `r - 1` has rank `r`.
#[derive(Clone, Debug)]
pub struct ReliabilityTable {
    entries: Vec<ReliabilityEntry>,
    hard: Vec<u32>,
}

impl ReliabilityTable {
    pub fn from_likelihoods(lik: &BlockLikelihoods, part: &BlockPartition, scope: Scope) -> Self {
        let mut entries = Vec::new();
        for (id, blk) in part.blocks().iter().enumerate() {
            if !scope.includes(blk.class) {
                continue;
            }
            let hard = lik.hard[id];
            let top = lik.loglik(id, hard);
            for pattern in (0..1u32 << blk.width).filter(|&p| p != hard) {
                entries.push(ReliabilityEntry {
                    block: id,
                    pattern,
                    delta: top - lik.loglik(id, pattern),
                });
            }
        }
        ReliabilityTable::from_entries(entries, lik.hard.clone())
    }

    /// Sorts arbitrary entries; equal deltas keep their input order.
    pub fn from_entries(mut entries: Vec<ReliabilityEntry>, hard: Vec<u32>) -> Self {
        entries.sort_by(|a, b| a.delta.total_cmp(&b.delta));
        ReliabilityTable { entries, hard }
    }

    pub fn entries(&self) -> &[ReliabilityEntry] {
        &self.entries
    }

    /// Entry with the given 1-based rank.
    pub fn by_rank(&self, rank: usize) -> &ReliabilityEntry {
        &self.entries[rank - 1]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn hard(&self) -> &[u32] {
        &self.hard
    }
}

pub fn build_reliability_table(
    y: &[f64],
    part: &BlockPartition,
    model: &ChannelModel,
    scope: Scope,
) -> ReliabilityTable {
    ReliabilityTable::from_likelihoods(&BlockLikelihoods::new(y, part, model), part, scope)
}
