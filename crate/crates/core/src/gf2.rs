//! Packed GF(2) vectors and matrices.
//!
//! Bits are stored little-endian in `u64` words: position `i` lives in word
//! `i / 64` at bit `i % 64`. All indices in this module are 0-based; the text
//! file format in [`crate::code`] is where 1-based numbering shows up.

use std::fmt;

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from a slice of 0/1 bytes. Any nonzero byte is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVector::zeros(len);
        v.set(i, true);
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Positions holding a one, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense binary matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Result of Gauss-Jordan elimination with left-to-right pivoting.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The reduced matrix with zero rows dropped; row `i` has its leading one
    /// in column `pivots[i]`.
    pub matrix: BitMatrix,
    /// Pivot columns, strictly increasing.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: (0..rows).map(|_| BitVector::zeros(cols)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from packed rows; all rows must share one length.
    pub fn from_rows(rows: Vec<BitVector>) -> Self {
        let cols = rows.first().map_or(0, BitVector::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        BitMatrix { cols, rows }
    }

    /// Builds a matrix from 0/1 byte rows.
    pub fn from_bit_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        BitMatrix::from_rows(rows.iter().map(|r| BitVector::from_bits(r.as_ref())).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVector {
        &self.rows[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVector> {
        self.rows.iter()
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            cols: self.rows(),
            rows: (0..self.cols).map(|c| self.column(c)).collect(),
        }
    }

    /// Sub-matrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: cols.len(),
            rows: self
                .rows
                .iter()
                .map(|row| {
                    let mut v = BitVector::zeros(cols.len());
                    for (j, &c) in cols.iter().enumerate() {
                        if row.get(c) {
                            v.set(j, true);
                        }
                    }
                    v
                })
                .collect(),
        }
    }

    /// `x · Mᵀ`: one output bit per row of `self`.
    pub fn mul_vec_t(&self, x: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.rows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        out
    }

    /// `x · M` for a row vector `x` of length `rows()`.
    pub fn left_mul(&self, x: &BitVector) -> BitVector {
        debug_assert_eq!(x.len(), self.rows());
        let mut out = BitVector::zeros(self.cols);
        for r in x.ones() {
            out.xor_assign(&self.rows[r]);
        }
        out
    }

    /// `self · otherᵀ`.
    pub fn mul_t(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "inner dimensions differ");
        BitMatrix {
            cols: other.rows(),
            rows: self.rows.iter().map(|r| other.mul_vec_t(r)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Gauss-Jordan elimination without column permutation. Columns are
    /// scanned left to right; the pivot row for a column is the lowest-index
    /// unprocessed row holding a one there.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        rows.truncate(next);
        Rref {
            matrix: BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// A basis of `{x : x · selfᵀ = 0}`, one row per free column of the RREF,
    /// each with a one on its free column.
    pub fn null_space(&self) -> BitMatrix {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let rows = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVector::unit(self.cols, free);
                for (i, &p) in pivots.iter().enumerate() {
                    if matrix.get(i, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_and_xor() {
        let a = BitVector::from_bits(&[1, 0, 1, 1]);
        let b = BitVector::from_bits(&[1, 1, 1, 0]);
        assert!(!a.dot(&b));
        let mut c = a.clone();
        c.xor_assign(&b);
        assert_eq!(c.to_bits(), vec![0, 1, 0, 1]);
        assert_eq!(a.weight(), 3);
    }

    #[test]
    fn long_vectors_cross_word_boundaries() {
        let mut v = BitVector::zeros(130);
        v.set(63, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![63, 64, 129]);
        v.flip(64);
        assert_eq!(v.weight(), 2);
    }

    #[test]
    fn rref_picks_leftmost_pivots() {
        let m = BitMatrix::from_bit_rows(&[[0, 1, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![1, 2]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let m = BitMatrix::from_bit_rows(&[[1, 0, 1, 1, 0], [0, 1, 1, 0, 1]]);
        let ns = m.null_space();
        assert_eq!(ns.rows(), 3);
        assert!(m.mul_t(&ns).is_zero());
        assert_eq!(ns.rank(), 3);
    }

    #[test]
    fn transpose_round_trip() {
        let m = BitMatrix::from_bit_rows(&[[1, 0, 1], [0, 1, 1]]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.select_columns(&[2, 0]), BitMatrix::from_bit_rows(&[[1, 1], [1, 0]]));
    }
}
