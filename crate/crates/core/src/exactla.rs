//! Prime-field arithmetic and dense exact linear algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::audit::{self, Check};

pub const DEFAULT_PRIME: u32 = 32003;

/// Smallest modulus accepted; degrees handled stay below ~40.
pub const MIN_PRIME: u32 = 101;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is too small (need at least {MIN_PRIME})")]
    TooSmall(u32),
    #[error("modulus {0} does not fit in 31 bits")]
    TooLarge(u32),
}

/// The prime field F_p. Elements are `u32` values in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p < MIN_PRIME {
            return Err(FieldError::TooSmall(p));
        }
        if p >= 1 << 31 {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Fp { p })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric lift to `(-p/2, p/2]`.
    pub fn to_i64(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.p)
    }

    /// Inverts every entry with one field inversion (Montgomery's trick).
    /// Panics if any entry is zero.
    pub fn batch_inv(self, values: &[u32]) -> Vec<u32> {
        let mut prefix = Vec::with_capacity(values.len());
        let mut acc = 1u32;
        for &v in values {
            assert!(v != 0, "batch inverse of zero");
            prefix.push(acc);
            acc = self.mul(acc, v);
        }
        let mut inv = self.inv(acc);
        let mut out = vec![0; values.len()];
        for i in (0..values.len()).rev() {
            out[i] = self.mul(inv, prefix[i]);
            inv = self.mul(inv, values[i]);
        }
        out
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Field plus the seed every random stream of a run is derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldCtx {
    pub field: Fp,
    pub rng_seed: u64,
}

impl FieldCtx {
    pub fn new(p: u32, rng_seed: u64) -> Result<Self, FieldError> {
        Ok(FieldCtx { field: Fp::new(p)?, rng_seed })
    }

    /// Independent deterministic stream number `stream` of this run.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(stream);
        rng
    }
}

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl FieldMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        FieldMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row-major data; entries are reduced mod p.
    pub fn from_vec(field: Fp, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        let data = data.into_iter().map(|v| v % field.p()).collect();
        FieldMatrix { field, rows, cols, data }
    }

    pub fn from_rows(field: Fp, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|v| v % field.p()));
        }
        FieldMatrix { field, rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Fp, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v % field.p());
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: Fp, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        FieldMatrix { field, rows, cols, data }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field;
        let p = f.p() as u64;
        let mut out = Self::zeros(f, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.get(k, j) as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.set(i, j, v as u32);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |s, (&a, &b)| (s + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &FieldMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FieldMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &FieldMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        FieldMatrix { field: self.field, rows: self.rows, cols, data }
    }

    /// Block-diagonal sum.
    pub fn block_diag(field: Fp, blocks: &[FieldMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FieldMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// The listed columns, in order, as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    pub fn select_rows(&self, rows: std::ops::Range<usize>) -> Self {
        let data = self.data[rows.start * self.cols..rows.end * self.cols].to_vec();
        FieldMatrix { field: self.field, rows: rows.len(), cols: self.cols, data }
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first
    /// nonzero entry at or below the current row.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let p = f.p() as u64;
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.get(r, c)) as u64;
            for j in c..cols {
                let v = m.get(r, j) as u64;
                m.set(r, j, (v * inv % p) as u32);
            }
            let pivot_row: Vec<u32> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c) as u64;
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                let row = &mut m.data[i * cols + c..(i + 1) * cols];
                for (dst, &src) in row.iter_mut().zip(&pivot_row) {
                    if src != 0 {
                        *dst = ((*dst as u64 + neg * src as u64) % p) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate on the shorter side; rank is transpose invariant.
        if self.rows > self.cols {
            self.transpose().rref().pivots.len()
        } else {
            self.rref().pivots.len()
        }
    }

    /// Basis of the right kernel, one basis vector per column.
    pub fn kernel_basis(&self) -> FieldMatrix {
        let f = self.field;
        let Rref { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (jj, &fc) in free.iter().enumerate() {
            k.set(fc, jj, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, jj, f.neg(r.get(i, fc)));
            }
        }
        let ok = pivots.len() + k.cols == self.cols;
        audit::record(Check::RankNullity, ok);
        debug_assert!(ok, "rank-nullity violated");
        k
    }

    pub fn nullity(&self) -> usize {
        self.kernel_basis().cols
    }

    /// Some solution of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let f = self.field;
        let rhs = FieldMatrix::from_vec(f, self.rows, 1, b.to_vec());
        let Rref { matrix: r, pivots } = self.hstack(&rhs).rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }
}

/// Rank of the span of a list of vectors of common length `len`.
pub fn span_rank(field: Fp, len: usize, vectors: &[Vec<u32>]) -> usize {
    if vectors.is_empty() || len == 0 {
        return 0;
    }
    FieldMatrix::from_rows(field, len, vectors).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn f() -> Fp {
        Fp::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(Fp::new(32004), Err(FieldError::NotPrime(32004)));
        assert_eq!(Fp::new(7), Err(FieldError::TooSmall(7)));
        assert!(Fp::new(101).is_ok());
    }

    #[test]
    fn identity_rref() {
        let id = FieldMatrix::identity(f(), 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn zero_rref() {
        let z = FieldMatrix::zeros(f(), 3, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn random_wide_matrix_has_full_rank_under_row_shuffles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = FieldMatrix::random(f(), 10, 20, &mut rng);
        let mut rows: Vec<Vec<u32>> = (0..10).map(|i| m.row(i).to_vec()).collect();
        rows.reverse();
        rows.swap(2, 7);
        let shuffled = FieldMatrix::from_rows(f(), 20, &rows);
        assert_eq!(m.rank(), 10);
        assert_eq!(shuffled.rank(), m.rank());
    }

    #[test]
    fn kernel_of_identity_and_ones() {
        assert_eq!(FieldMatrix::identity(f(), 5).kernel_basis().cols(), 0);
        let m = FieldMatrix::from_rows(f(), 2, &[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert_eq!(f().add(v[0], v[1]), 0);
        assert_ne!(v, vec![0, 0]);
    }

    #[test]
    fn solve_trivial_cases() {
        let id = FieldMatrix::identity(f(), 3);
        assert_eq!(id.solve(&[4, 5, 6]), Some(vec![4, 5, 6]));
        let z = FieldMatrix::zeros(f(), 2, 2);
        assert_eq!(z.solve(&[0, 1]), None);
    }

    #[test]
    fn batch_inverse_matches_single() {
        let vals = [1u32, 2, 3, 31999, 17];
        let inv = f().batch_inv(&vals);
        for (v, i) in vals.iter().zip(inv) {
            assert_eq!(f().mul(*v, i), 1);
        }
    }

    #[test]
    fn field_ctx_streams_are_independent_and_reproducible() {
        let ctx = FieldCtx::new(DEFAULT_PRIME, 9).unwrap();
        let a: Vec<u32> = (0..4).map(|_| ctx.rng(1).gen()).collect();
        let b: Vec<u32> = (0..4).map(|_| ctx.rng(1).gen()).collect();
        assert_eq!(a, b);
        let x: u64 = ctx.rng(1).gen();
        let y: u64 = ctx.rng(2).gen();
        assert_ne!(x, y);
    }

    fn arb_matrix() -> impl Strategy<Value = FieldMatrix> {
        (1usize..9, 1usize..9, any::<u64>(), 0u32..4).prop_map(|(r, c, seed, sparsity)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut m = FieldMatrix::random(Fp::new(101).unwrap(), r, c, &mut rng);
            // Force some rank deficiency by zeroing or copying rows.
            for i in 0..(sparsity as usize).min(r) {
                let src = m.row(0).to_vec();
                for (j, v) in src.into_iter().enumerate() {
                    m.set(i, j, if i % 2 == 0 { 0 } else { v });
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).is_zero());
        }

        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let once = m.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&twice.matrix, &once.matrix);
            prop_assert_eq!(twice.pivots, once.pivots);
        }

        #[test]
        fn solve_recovers_a_preimage(m in arb_matrix(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<u32> = (0..m.cols()).map(|_| m.field().random(&mut rng)).collect();
            let b = m.mul_vec(&x);
            let sol = m.solve(&b).expect("consistent system");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }

        #[test]
        fn exact_inverse(a in 1u32..DEFAULT_PRIME, b in 0u32..DEFAULT_PRIME) {
            let fld = f();
            prop_assert_eq!(fld.mul(fld.mul(a, b), fld.inv(a)), b);
        }
    }
}
