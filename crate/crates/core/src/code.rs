//! Binary linear codes in semi-systematic form.
//!
//! A [`LinearCode`] keeps its parity-check matrix `H` row-reduced so that the
//! columns in the complement set `𝓘` form an identity, without ever permuting
//! columns. The remaining `k` positions form the base set `𝓑`; any assignment
//! of the base bits extends to exactly one codeword through
//! `x_𝓘 = x_𝓑 · Bᵀ` where `B = H[:, 𝓑]`.
//!
//! Positions are 0-based in this API. The dense-text matrix format and the
//! [`LinearCode::base_set_one_based`] helpers use 1-based numbering.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;

use crate::channel::seeded_rng;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// CRC-16/DNP generator polynomial with the leading `x^16` term implicit.
pub const CRC16_DNP: u16 = 0x3D65;

/// Parity-check matrix split by the Gauss-Jordan pivots.
#[derive(Clone, Debug)]
pub struct SemiSystematic {
    /// Row-reduced `H`; row `r` has its identity one in column `comp_set[r]`.
    pub h: BitMatrix,
    pub base_set: Vec<usize>,
    pub comp_set: Vec<usize>,
    /// `H[:, base_set]`, `(n-k) × k`.
    pub b_sub: BitMatrix,
}

/// Row-reduces `h` with left-to-right pivoting and no column permutation.
///
/// The pivot columns become the complement set `𝓘`; the free columns are the
/// base set `𝓑`.
pub fn semi_systematize(h: &BitMatrix) -> Result<SemiSystematic> {
    let rref = h.rref();
    if rref.pivots.len() < h.rows() {
        return Err(Error::NotFullRank {
            rank: rref.pivots.len(),
            rows: h.rows(),
        });
    }
    let comp_set = rref.pivots;
    let mut is_pivot = vec![false; h.cols()];
    for &p in &comp_set {
        is_pivot[p] = true;
    }
    let base_set: Vec<usize> = (0..h.cols()).filter(|&c| !is_pivot[c]).collect();
    let b_sub = rref.matrix.select_columns(&base_set);
    Ok(SemiSystematic {
        h: rref.matrix,
        base_set,
        comp_set,
        b_sub,
    })
}

/// A binary linear `[n, k]` code with its semi-systematic parity-check matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    k: usize,
    g: BitMatrix,
    h: BitMatrix,
    base_set: Vec<usize>,
    comp_set: Vec<usize>,
    b_sub: BitMatrix,
    /// Row `t` is the codeword obtained by extending the unit vector on the
    /// `t`-th base position.
    base_rows: Vec<BitVector>,
}

impl LinearCode {
    /// Builds a code from a full-row-rank parity-check matrix. The generator
    /// is the base-bit extension basis.
    pub fn from_parity_check(h: &BitMatrix) -> Result<Self> {
        if h.rows() == 0 || h.cols() <= h.rows() {
            return Err(Error::Dimension(format!(
                "parity check matrix must be (n-k) x n with 0 < n-k < n, got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        let ss = semi_systematize(h)?;
        let base_rows = extension_rows(&ss);
        let g = BitMatrix::from_rows(base_rows.clone());
        Self::assemble(g, ss, base_rows)
    }

    /// Builds a code from a full-row-rank generator matrix. `H` is a basis of
    /// the dual, then semi-systematized; `G` is kept as given so message
    /// encoding follows the file.
    pub fn from_generator(g: &BitMatrix) -> Result<Self> {
        if g.rows() == 0 || g.cols() <= g.rows() {
            return Err(Error::Dimension(format!(
                "generator matrix must be k x n with 0 < k < n, got {}x{}",
                g.rows(),
                g.cols()
            )));
        }
        let rank = g.rank();
        if rank < g.rows() {
            return Err(Error::GeneratorNotFullRank {
                rank,
                rows: g.rows(),
            });
        }
        let ss = semi_systematize(&g.null_space())?;
        let base_rows = extension_rows(&ss);
        Self::assemble(g.clone(), ss, base_rows)
    }

    fn assemble(g: BitMatrix, ss: SemiSystematic, base_rows: Vec<BitVector>) -> Result<Self> {
        let code = LinearCode {
            n: ss.h.cols(),
            k: ss.base_set.len(),
            g,
            h: ss.h,
            base_set: ss.base_set,
            comp_set: ss.comp_set,
            b_sub: ss.b_sub,
            base_rows,
        };
        code.validate()?;
        Ok(code)
    }

    /// Checks the structural invariants: `G·Hᵀ = 0`, `H[:, 𝓘] = I`, set sizes.
    pub fn validate(&self) -> Result<()> {
        if self.g.rows() != self.k || self.g.cols() != self.n {
            return Err(Error::Dimension(format!(
                "G is {}x{}, expected {}x{}",
                self.g.rows(),
                self.g.cols(),
                self.k,
                self.n
            )));
        }
        if self.h.rows() != self.n - self.k || self.h.cols() != self.n {
            return Err(Error::Dimension(format!(
                "H is {}x{}, expected {}x{}",
                self.h.rows(),
                self.h.cols(),
                self.n - self.k,
                self.n
            )));
        }
        if self.base_set.len() + self.comp_set.len() != self.n {
            return Err(Error::Dimension("base and complement sets do not cover 1..n".into()));
        }
        if !self.g.mul_t(&self.h).is_zero() {
            return Err(Error::Dimension("G·Hᵀ ≠ 0".into()));
        }
        if self.h.select_columns(&self.comp_set) != BitMatrix::identity(self.n - self.k) {
            return Err(Error::Dimension("H restricted to the complement set is not the identity".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    /// The semi-systematic parity-check matrix.
    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// Base positions `𝓑`, 0-based, ascending.
    pub fn base_set(&self) -> &[usize] {
        &self.base_set
    }

    /// Complement positions `𝓘`, 0-based, ascending.
    pub fn comp_set(&self) -> &[usize] {
        &self.comp_set
    }

    pub fn base_set_one_based(&self) -> Vec<usize> {
        self.base_set.iter().map(|i| i + 1).collect()
    }

    pub fn comp_set_one_based(&self) -> Vec<usize> {
        self.comp_set.iter().map(|i| i + 1).collect()
    }

    /// `B = H[:, 𝓑]`.
    pub fn b_sub(&self) -> &BitMatrix {
        &self.b_sub
    }

    /// Codeword obtained from the unit assignment on the `t`-th base position.
    pub fn base_row(&self, t: usize) -> &BitVector {
        &self.base_rows[t]
    }

    /// Extends an assignment of the `k` base bits to the full codeword.
    pub fn extend_base(&self, x_base: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k, x_base.len())?;
        Ok(self.extend_base_packed(&BitVector::from_bits(x_base)).to_bits())
    }

    pub fn extend_base_packed(&self, x_base: &BitVector) -> BitVector {
        debug_assert_eq!(x_base.len(), self.k);
        let mut x = BitVector::zeros(self.n);
        for t in x_base.ones() {
            x.xor_assign(&self.base_rows[t]);
        }
        x
    }

    pub fn is_codeword(&self, x: &[u8]) -> Result<bool> {
        check_len(self.n, x.len())?;
        Ok(self.syndrome(&BitVector::from_bits(x)).is_zero())
    }

    /// `x · Hᵀ`.
    pub fn syndrome(&self, x: &BitVector) -> BitVector {
        self.h.mul_vec_t(x)
    }

    /// Encodes a `k`-bit message with the generator matrix.
    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k, msg.len())?;
        Ok(self.encode_packed(&BitVector::from_bits(msg)).to_bits())
    }

    pub fn encode_packed(&self, msg: &BitVector) -> BitVector {
        self.g.left_mul(msg)
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

fn extension_rows(ss: &SemiSystematic) -> Vec<BitVector> {
    let n = ss.h.cols();
    ss.base_set
        .iter()
        .enumerate()
        .map(|(t, &pos)| {
            let mut row = BitVector::unit(n, pos);
            for (r, &c) in ss.comp_set.iter().enumerate() {
                if ss.b_sub.get(r, t) {
                    row.set(c, true);
                }
            }
            row
        })
        .collect()
}

/// Remainder of `m(x) · x^16` divided by `x^16 + poly(x)`.
///
/// The first message bit is the highest-degree coefficient; the register
/// starts at zero and nothing is reflected or inverted.
pub fn crc16_remainder(msg: &[u8], poly: u16) -> u16 {
    let mut reg: u16 = 0;
    for &bit in msg {
        let feedback = ((reg >> 15) & 1) ^ (bit & 1) as u16;
        reg <<= 1;
        if feedback == 1 {
            reg ^= poly;
        }
    }
    reg
}

/// Systematic `[k + 16, k]` CRC code: the message followed by its 16-bit
/// remainder. The base set is the message positions `{0..k}`.
pub fn build_crc_code(k: usize, poly: u16) -> Result<LinearCode> {
    if k == 0 {
        return Err(Error::Dimension("CRC message length must be at least 1".into()));
    }
    let r = 16;
    let n = k + r;
    // Parity part of row i: remainder of x^(k-1-i) · x^16.
    let parity: Vec<u16> = (0..k)
        .map(|i| {
            let mut msg = vec![0u8; k];
            msg[i] = 1;
            crc16_remainder(&msg, poly)
        })
        .collect();
    let bit = |p: u16, j: usize| (p >> (r - 1 - j)) & 1 == 1;

    let mut g = BitMatrix::zeros(k, n);
    for (i, &p) in parity.iter().enumerate() {
        g.set(i, i, true);
        for j in 0..r {
            g.set(i, k + j, bit(p, j));
        }
    }
    let mut h = BitMatrix::zeros(r, n);
    for j in 0..r {
        for (i, &p) in parity.iter().enumerate() {
            h.set(j, i, bit(p, j));
        }
        h.set(j, k + j, true);
    }
    let base_set: Vec<usize> = (0..k).collect();
    let comp_set: Vec<usize> = (k..n).collect();
    let b_sub = h.select_columns(&base_set);
    let ss = SemiSystematic {
        h,
        base_set,
        comp_set,
        b_sub,
    };
    let base_rows = extension_rows(&ss);
    LinearCode::assemble(g, ss, base_rows)
}

/// A random `[n, k]` code: generator rows drawn uniformly from a seeded
/// stream until the matrix has full rank.
pub fn random_code(n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    if k == 0 || k >= n {
        return Err(Error::Dimension(format!("random code needs 0 < k < n, got [{n}, {k}]")));
    }
    let mut rng = seeded_rng(seed);
    loop {
        let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..n).map(|_| rng.random_range(0..2u8)).collect()).collect();
        let g = BitMatrix::from_bit_rows(&rows);
        if g.rank() == k {
            return LinearCode::from_generator(&g);
        }
    }
}

/// Which matrix a dense-text file holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    Generator,
    ParityCheck,
}

/// Parses the dense-text matrix format:
///
/// ```text
/// # H            (optional, "# G" or "# H"; default H)
/// rows cols
/// 0 1 1 ...      (one line per row)
/// ```
pub fn parse_matrix(text: &str) -> Result<(MatrixKind, BitMatrix)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let mut kind = MatrixKind::ParityCheck;
    let (mut line_no, mut line) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty matrix file".into(),
    })?;
    if let Some(tag) = line.strip_prefix('#') {
        kind = match tag.trim() {
            "G" | "g" => MatrixKind::Generator,
            "H" | "h" => MatrixKind::ParityCheck,
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown matrix header {other:?}, expected G or H"),
                })
            }
        };
        (line_no, line) = lines.next().ok_or(Error::Parse {
            line: line_no + 1,
            msg: "missing dimension line".into(),
        })?;
    }

    let dims: Vec<usize> = line
        .split_whitespace()
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad dimension {t:?}"),
            })
        })
        .collect::<Result<_>>()?;
    let &[rows, cols] = dims.as_slice() else {
        return Err(Error::Parse {
            line: line_no,
            msg: "dimension line must be \"rows cols\"".into(),
        });
    };
    if rows == 0 || cols == 0 {
        return Err(Error::Parse {
            line: line_no,
            msg: "matrix dimensions must be positive".into(),
        });
    }

    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        let (ln, l) = lines.next().ok_or(Error::Parse {
            line: line_no + 1,
            msg: format!("expected {rows} rows, found {r}"),
        })?;
        line_no = ln;
        let entries: Vec<&str> = l.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::Parse {
                line: ln,
                msg: format!("row has {} entries, expected {cols}", entries.len()),
            });
        }
        for (c, e) in entries.into_iter().enumerate() {
            match e {
                "0" => {}
                "1" => m.set(r, c, true),
                other => {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("entry {other:?} is not 0 or 1"),
                    })
                }
            }
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            msg: format!("more than {rows} rows"),
        });
    }
    Ok((kind, m))
}

pub fn format_matrix(kind: MatrixKind, m: &BitMatrix) -> String {
    let mut s = String::new();
    s.push_str(match kind {
        MatrixKind::Generator => "# G\n",
        MatrixKind::ParityCheck => "# H\n",
    });
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for row in m.row_iter() {
        let bits: Vec<&str> = (0..m.cols()).map(|c| if row.get(c) { "1" } else { "0" }).collect();
        s.push_str(&bits.join(" "));
        s.push('\n');
    }
    s
}

pub fn parse_code(text: &str) -> Result<LinearCode> {
    match parse_matrix(text)? {
        (MatrixKind::ParityCheck, h) => LinearCode::from_parity_check(&h),
        (MatrixKind::Generator, g) => LinearCode::from_generator(&g),
    }
}

/// Loads a code from a dense-text matrix file.
pub fn load_code(path: impl AsRef<Path>) -> Result<LinearCode> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_code(&text)
}
