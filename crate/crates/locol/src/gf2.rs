//! Bit-packed GF(2) linear algebra: the incidence system `Av = 1^m`,
//! Gauss-Jordan reduction with whole-row XOR on 64-bit words, and the
//! affine solution space `v0 + span{v1..vr}`.

use crate::hypergraph::Hypergraph;

const WORD_BITS: usize = 64;

/// A packed GF(2) vector. Padding bits beyond `len` are kept zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

/// A packed row-major GF(2) matrix; rows are padded to word granularity.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD_BITS).max(1);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let idx = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if bit {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    /// row[dst] ^= row[src]; the inner loop of the whole reduction.
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let w = self.words_per_row;
        let (lo, hi) = if dst < src {
            let (a, b) = self.bits.split_at_mut(src * w);
            (&mut a[dst * w..(dst + 1) * w], &b[..w])
        } else {
            let (a, b) = self.bits.split_at_mut(dst * w);
            (&mut b[..w], &a[src * w..(src + 1) * w])
        };
        for (d, s) in lo.iter_mut().zip(hi) {
            *d ^= s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for k in 0..w {
            self.bits.swap(a * w + k, b * w + k);
        }
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        let w = self.words_per_row;
        for r in 0..self.rows {
            let row = &self.bits[r * w..(r + 1) * w];
            let mut acc = 0u64;
            for (a, b) in row.iter().zip(&v.words) {
                acc ^= a & b;
            }
            out.set(r, acc.count_ones() % 2 == 1);
        }
        out
    }
}

/// The affine solution set `v0 + span{basis}` of a consistent system.
#[derive(Debug, Clone)]
pub struct AffineSpace2 {
    pub v0: BitVec,
    pub basis: Vec<BitVec>,
}

impl AffineSpace2 {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn n(&self) -> usize {
        self.v0.len()
    }
}

/// Builds `A v = 1^m`: row j has ones exactly at the vertices of edge j.
pub fn incidence_system(h: &Hypergraph) -> (BitMatrix, BitVec) {
    let mut a = BitMatrix::zeros(h.m(), h.n());
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e.vertices() {
            a.set(j, v as usize - 1, true);
        }
    }
    (a, BitVec::ones(h.m()))
}

/// Gauss-Jordan to reduced row echelon form, pivoting on the
/// lowest-index available column. Returns the affine solution space or
/// `None` if the system is inconsistent.
///
/// Nullspace basis convention: one vector per free column, with a 1 in
/// that free column and 0 in every other free column.
pub fn solve_affine(a: &BitMatrix, b: &BitVec) -> Option<AffineSpace2> {
    debug_assert_eq!(a.rows(), b.len());
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut rhs = b.clone();

    let mut pivot_col_of_row = Vec::new(); // row -> pivot column, in order
    let mut pivot_row = 0usize;
    for col in 0..cols {
        let Some(r) = (pivot_row..rows).find(|&r| m.get(r, col)) else {
            continue;
        };
        m.swap_rows(pivot_row, r);
        let tmp = rhs.get(pivot_row);
        rhs.set(pivot_row, rhs.get(r));
        rhs.set(r, tmp);
        for r2 in 0..rows {
            if r2 != pivot_row && m.get(r2, col) {
                m.xor_rows(r2, pivot_row);
                let v = rhs.get(r2) ^ rhs.get(pivot_row);
                rhs.set(r2, v);
            }
        }
        pivot_col_of_row.push(col);
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    // Zero rows must have zero right-hand side.
    for r in pivot_row..rows {
        if rhs.get(r) {
            return None;
        }
    }

    let mut is_pivot = vec![false; cols];
    for &c in &pivot_col_of_row {
        is_pivot[c] = true;
    }

    let mut v0 = BitVec::zeros(cols);
    for (row, &col) in pivot_col_of_row.iter().enumerate() {
        v0.set(col, rhs.get(row));
    }

    let mut basis = Vec::with_capacity(cols - pivot_col_of_row.len());
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(cols);
        v.set(free, true);
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            if m.get(row, free) {
                v.set(col, true);
            }
        }
        basis.push(v);
    }
    Some(AffineSpace2 { v0, basis })
}

/// Coordinates constant over the whole solution set: exactly those
/// where every basis vector has bit 0; the fixed value is `v0`'s bit.
pub fn fixed_coordinates(s: &AffineSpace2) -> Vec<(usize, bool)> {
    (0..s.n())
        .filter(|&x| s.basis.iter().all(|v| !v.get(x)))
        .map(|x| (x, s.v0.get(x)))
        .collect()
}

/// `v0 XOR (XOR of basis vectors with a_i = 1)`.
pub fn evaluate(s: &AffineSpace2, a: &[bool]) -> BitVec {
    debug_assert_eq!(a.len(), s.dim());
    let mut v = s.v0.clone();
    for (vi, &ai) in s.basis.iter().zip(a) {
        if ai {
            v.xor_assign(vi);
        }
    }
    v
}
