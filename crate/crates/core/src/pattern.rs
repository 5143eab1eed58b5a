//! Rank-ordered pattern generation.
//!
//! Each entry of a [`ReliabilityTable`] is treated as a binary reliability with
//! its rank as weight. Subsets of ranks are visited in nondecreasing logistic
//! weight `W(S) = Σ r`, starting with the empty set. Inside one weight class
//! smaller subsets come first, then lexicographic order on the sorted rank
//! tuple. A subset that swaps the same block twice is counted as discarded
//! and skipped.

use crate::block::{ReliabilityTable, Scope};
use crate::block::BlockPartition;

/// Default bound on emitted plus discarded subsets per decode.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Result of asking the generator for the next pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Emitted,
    Exhausted,
    Capped,
}

/// A conflict-free subset of table entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Pattern {
    /// 1-based ranks, ascending.
    pub ranks: Vec<usize>,
    /// `(block, alternative pattern)` per swap, in rank order.
    pub swaps: Vec<(usize, u32)>,
    pub logistic_weight: usize,
    pub delta_sum: f64,
}

impl Pattern {
    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

/// Enumeration cursor over one reliability table.
#[derive(Clone, Debug)]
pub struct PatternState<'t> {
    table: &'t ReliabilityTable,
    m: usize,
    weight: usize,
    ranks: Vec<usize>,
    started: bool,
    done: bool,
    emitted: u64,
    discarded: u64,
    cap: u64,
    stamp: Vec<u64>,
    generation: u64,
}

impl<'t> PatternState<'t> {
    pub fn new(table: &'t ReliabilityTable, cap: u64) -> Self {
        let blocks = table.entries().iter().map(|e| e.block + 1).max().unwrap_or(0);
        PatternState {
            table,
            m: table.len(),
            weight: 0,
            ranks: Vec::new(),
            started: false,
            done: false,
            emitted: 0,
            discarded: 0,
            cap,
            stamp: vec![0; blocks],
            generation: 0,
        }
    }

    pub fn table(&self) -> &'t ReliabilityTable {
        self.table
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    /// Emitted plus discarded subsets.
    pub fn queries(&self) -> u64 {
        self.emitted + self.discarded
    }

    /// Ranks of the pattern produced by the last [`Step::Emitted`].
    pub fn current_ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn current_weight(&self) -> usize {
        self.weight
    }

    pub fn current_delta_sum(&self) -> f64 {
        self.ranks.iter().fold(0.0, |acc, &r| acc + self.table.by_rank(r).delta)
    }

    pub fn current_pattern(&self) -> Pattern {
        Pattern {
            ranks: self.ranks.clone(),
            swaps: self
                .ranks
                .iter()
                .map(|&r| {
                    let e = self.table.by_rank(r);
                    (e.block, e.pattern)
                })
                .collect(),
            logistic_weight: self.weight,
            delta_sum: self.current_delta_sum(),
        }
    }

    /// Moves to the next conflict-free subset.
    pub fn advance(&mut self) -> Step {
        loop {
            if self.queries() >= self.cap {
                return Step::Capped;
            }
            if !self.next_subset() {
                return Step::Exhausted;
            }
            if self.has_conflict() {
                self.discarded += 1;
            } else {
                self.emitted += 1;
                return Step::Emitted;
            }
        }
    }

    /// Owned form of [`advance`](Self::advance): `None` once exhausted or capped.
    pub fn next_pattern(&mut self) -> Result<Pattern, Step> {
        match self.advance() {
            Step::Emitted => Ok(self.current_pattern()),
            other => Err(other),
        }
    }

    fn has_conflict(&mut self) -> bool {
        if self.ranks.len() < 2 {
            return false;
        }
        self.generation += 1;
        for &r in &self.ranks {
            let b = self.table.by_rank(r).block;
            if self.stamp[b] == self.generation {
                return true;
            }
            self.stamp[b] = self.generation;
        }
        false
    }

    /// Steps `ranks`/`weight` to the next subset in enumeration order.
    fn next_subset(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        if next_tuple(&mut self.ranks, self.weight, self.m) {
            return true;
        }
        // Next cardinality at the same weight, then the next weight.
        let mut c = self.ranks.len() + 1;
        let mut w = self.weight;
        let max_weight = self.m * (self.m + 1) / 2;
        loop {
            if c > self.m || c * (c + 1) / 2 > w {
                w += 1;
                c = 1;
                if w > max_weight {
                    self.done = true;
                    return false;
                }
            }
            if first_tuple(&mut self.ranks, w, c, self.m) {
                self.weight = w;
                return true;
            }
            c += 1;
        }
    }
}

/// Largest sum of `r` distinct values from `1..=m`.
fn max_sum(r: usize, m: usize) -> usize {
    r * m - r * r.saturating_sub(1) / 2
}

/// Smallest sum of `r` distinct values all greater than `v`.
fn min_sum_above(r: usize, v: usize) -> usize {
    r * v + r * (r + 1) / 2
}

/// Fills `out[from..]` with the lexicographically smallest strictly
/// increasing completion above `prev` that sums to `rest`.
fn complete(out: &mut [usize], from: usize, mut prev: usize, mut rest: usize, m: usize) -> bool {
    let len = out.len();
    for i in from..len {
        let r = len - i - 1;
        let v = (prev + 1).max(rest.saturating_sub(max_sum(r, m)));
        if v > m || rest < v || rest - v < min_sum_above(r, v) {
            return false;
        }
        if r == 0 && v != rest {
            return false;
        }
        out[i] = v;
        prev = v;
        rest -= v;
    }
    rest == 0
}

fn first_tuple(out: &mut Vec<usize>, w: usize, c: usize, m: usize) -> bool {
    out.clear();
    out.resize(c, 0);
    complete(out, 0, 0, w, m)
}

fn next_tuple(a: &mut [usize], w: usize, m: usize) -> bool {
    let c = a.len();
    if c < 2 {
        return false;
    }
    for j in (0..c - 1).rev() {
        let prefix: usize = a[..j].iter().sum();
        let r = c - 1 - j;
        let rest = w - prefix;
        let v = (a[j] + 1).max(rest.saturating_sub(max_sum(r, m)));
        if v > m || rest < v || rest - v < min_sum_above(r, v) {
            continue;
        }
        a[j] = v;
        let prev = v;
        if complete(a, j + 1, prev, rest - v, m) {
            return true;
        }
    }
    false
}

/// Hard patterns with the pattern's swaps applied. Blocks outside the table's
/// scope keep their hard pattern.
pub fn pattern_to_decision(p: &Pattern, part: &BlockPartition, hard: &[u32], scope: Scope) -> Vec<u32> {
    debug_assert_eq!(hard.len(), part.len());
    let mut out = hard.to_vec();
    for &(block, alt) in &p.swaps {
        debug_assert!(scope.includes(part.block(block).class));
        out[block] = alt;
    }
    out
}
