//! Dense GF(2) linear algebra.
//!
//! Bits cross public interfaces as `u8` values restricted to `{0, 1}`;
//! [`BitMatrix`] packs each row into 64-bit words (LSB-first within a word)
//! so row operations run word-parallel.

use thiserror::Error;

/// Errors from GF(2) matrix construction and elimination.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    /// Operand lengths or shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A bit value outside {0, 1} was supplied.
    #[error("invalid bit value {0}; bits must be 0 or 1")]
    InvalidBit(u8),
    /// The matrix rows are linearly dependent where independence is required.
    #[error("matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    /// A column preference list was not a permutation of `0..cols`.
    #[error("preference list is not a permutation of the column indices")]
    InvalidPreference,
}

/// A dense binary matrix with word-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row slices of `{0, 1}` values.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self, Gf2Error> {
        if rows.is_empty() {
            return Err(Gf2Error::DimensionMismatch("no rows given".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Gf2Error::DimensionMismatch("rows are empty".into()));
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Gf2Error::DimensionMismatch(format!(
                    "row {r} has length {}, expected {cols}",
                    row.len()
                )));
            }
            for (c, &b) in row.iter().enumerate() {
                if b > 1 {
                    return Err(Gf2Error::InvalidBit(b));
                }
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of 64-bit words per row.
    pub fn words_per_row(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        debug_assert!(r < self.rows && c < self.cols);
        ((self.words[r * self.stride + c / 64] >> (c % 64)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: u8) {
        debug_assert!(r < self.rows && c < self.cols && bit <= 1);
        let w = &mut self.words[r * self.stride + c / 64];
        *w = (*w & !(1u64 << (c % 64))) | ((bit as u64) << (c % 64));
    }

    /// Packed words of row `r`.
    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    /// Row `r` expanded to a `{0, 1}` vector.
    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (a, b) = (a.min(b), a.max(b));
        let (head, tail) = self.words.split_at_mut(b * self.stride);
        head[a * self.stride..(a + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    /// XORs row `src` into row `dst` (`dst ^= src`).
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst, "cannot xor a row into itself");
        let stride = self.stride;
        let (src_off, dst_off) = (src * stride, dst * stride);
        if src_off < dst_off {
            let (head, tail) = self.words.split_at_mut(dst_off);
            let s = &head[src_off..src_off + stride];
            for (d, s) in tail[..stride].iter_mut().zip(s) {
                *d ^= s;
            }
        } else {
            let (head, tail) = self.words.split_at_mut(src_off);
            let d = &mut head[dst_off..dst_off + stride];
            for (d, s) in d.iter_mut().zip(&tail[..stride]) {
                *d ^= s;
            }
        }
    }

    /// Returns a copy with columns reordered so that new column `j` is old
    /// column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<BitMatrix, Gf2Error> {
        if !is_permutation(perm, self.cols) {
            return Err(Gf2Error::InvalidPreference);
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for (j, &src) in perm.iter().enumerate() {
            let (sw, sb) = (src / 64, src % 64);
            let (dw, db) = (j / 64, j % 64);
            for r in 0..self.rows {
                let bit = (self.words[r * self.stride + sw] >> sb) & 1;
                out.words[r * out.stride + dw] |= bit << db;
            }
        }
        Ok(out)
    }

    /// Rank over GF(2), computed on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut w = self.clone();
        let mut rank = 0;
        for c in 0..w.cols {
            if rank == w.rows {
                break;
            }
            if let Some(pivot) = (rank..w.rows).find(|&r| w.get(r, c) == 1) {
                w.swap_rows(rank, pivot);
                for r in 0..w.rows {
                    if r != rank && w.get(r, c) == 1 {
                        w.xor_row_into(rank, r);
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

/// Encodes `msg` with generator matrix `g`: returns `msg * g`.
pub fn encode_linear(g: &BitMatrix, msg: &[u8]) -> Result<Vec<u8>, Gf2Error> {
    if msg.len() != g.rows() {
        return Err(Gf2Error::DimensionMismatch(format!(
            "message length {} does not match generator row count {}",
            msg.len(),
            g.rows()
        )));
    }
    let mut acc = vec![0u64; g.words_per_row()];
    for (r, &b) in msg.iter().enumerate() {
        match b {
            0 => {}
            1 => {
                for (a, w) in acc.iter_mut().zip(g.row_words(r)) {
                    *a ^= w;
                }
            }
            other => return Err(Gf2Error::InvalidBit(other)),
        }
    }
    Ok((0..g.cols()).map(|c| ((acc[c / 64] >> (c % 64)) & 1) as u8).collect())
}

/// Result of [`systematize_preferred`].
///
/// `g_sys` is in *permuted* column order: its first `k` columns form the
/// identity. `perm[j]` gives the original column index of permuted column `j`,
/// so de-permuting `g_sys` through `perm` yields a matrix with the same row
/// space as the input. `basis_cols` (= `perm[..k]`) lists the chosen
/// information-set columns in the order they were picked. `row_transform` is
/// the k-by-k matrix `T` of accumulated row operations: for any message `u`
/// over the permuted basis, `u * T` is the message that encodes to the same
/// codeword through the *original* generator.
#[derive(Debug, Clone)]
pub struct Systematized {
    pub g_sys: BitMatrix,
    pub perm: Vec<usize>,
    pub basis_cols: Vec<usize>,
    pub row_transform: BitMatrix,
}

/// Reduces a full-row-rank generator matrix to systematic form on the first
/// `k` linearly independent columns encountered in `preference` order.
///
/// Dependent columns are skipped. Errors if `preference` is not a permutation
/// of `0..cols` or if fewer than `rows` independent columns exist.
pub fn systematize_preferred(
    g: &BitMatrix,
    preference: &[usize],
) -> Result<Systematized, Gf2Error> {
    let (k, n) = (g.rows(), g.cols());
    if !is_permutation(preference, n) {
        return Err(Gf2Error::InvalidPreference);
    }
    let mut w = g.clone();
    let mut t = BitMatrix::identity(k);
    let mut basis_cols = Vec::with_capacity(k);
    let mut in_basis = vec![false; n];
    for &c in preference {
        let pivot_row = basis_cols.len();
        if pivot_row == k {
            break;
        }
        if let Some(r) = (pivot_row..k).find(|&r| w.get(r, c) == 1) {
            w.swap_rows(pivot_row, r);
            t.swap_rows(pivot_row, r);
            for rr in 0..k {
                if rr != pivot_row && w.get(rr, c) == 1 {
                    w.xor_row_into(pivot_row, rr);
                    t.xor_row_into(pivot_row, rr);
                }
            }
            basis_cols.push(c);
            in_basis[c] = true;
        }
    }
    if basis_cols.len() < k {
        return Err(Gf2Error::RankDeficient {
            rank: basis_cols.len(),
            expected: k,
        });
    }
    let mut perm = basis_cols.clone();
    perm.extend(preference.iter().copied().filter(|&c| !in_basis[c]));
    let g_sys = w.permute_columns(&perm)?;
    Ok(Systematized {
        g_sys,
        perm,
        basis_cols,
        row_transform: t,
    })
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}
