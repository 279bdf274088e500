//! Exact dense linear algebra over prime fields F_p.
//!
//! Everything downstream (module categories, torsion theories, complexes,
//! towers) reduces to row reduction, kernels and affine solves over F_p.
//! Matrices are immutable row-major arrays of reduced residues; all pivot
//! choices are deterministic (first nonzero in column order) so every
//! computed basis is bit-reproducible.

use serde::Serialize;
use thiserror::Error;

/// Largest supported modulus: one machine word per entry is plenty for
/// desk-scale fixtures.
pub const MAX_PRIME: u64 = 251;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("{0} is not a prime in 2..={MAX_PRIME}")]
    BadModulus(u64),
}

pub fn is_small_prime(p: u64) -> bool {
    if !(2..=MAX_PRIME).contains(&p) {
        return false;
    }
    (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Dense matrix over F_p, row-major, entries always reduced into [0, p).
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl std::fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FpMatrix({}x{} mod {})[", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            write!(f, "{:?}", &self.entries[r * self.cols..(r + 1) * self.cols])?;
            if r + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and a != 0 mod p; Fermat.
    pow_mod(a % p, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl FpMatrix {
    pub fn new(p: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self, LinAlgError> {
        if !is_small_prime(p) {
            return Err(LinAlgError::BadModulus(p));
        }
        if entries.len() != rows * cols {
            return Err(LinAlgError::ShapeMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|x| x % p).collect();
        Ok(FpMatrix { p, rows, cols, entries })
    }

    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinAlgError::ShapeMismatch("ragged rows".into()));
        }
        Self::new(p, rows.len(), cols, rows.concat())
    }

    /// Column vector from a slice.
    pub fn col_vec(p: u64, v: &[u64]) -> Self {
        FpMatrix { p, rows: v.len(), cols: 1, entries: v.iter().map(|x| x % p).collect() }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_p(&self, o: &Self) -> Result<(), LinAlgError> {
        if self.p != o.p {
            return Err(LinAlgError::ModulusMismatch(self.p, o.p));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, LinAlgError> {
        self.check_p(o)?;
        if self.rows != o.rows || self.cols != o.cols {
            return Err(LinAlgError::ShapeMismatch("add".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        Ok(FpMatrix { p: self.p, rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, LinAlgError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|&a| (self.p - a) % self.p).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        let entries = self.entries.iter().map(|&a| a * c % self.p).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, LinAlgError> {
        self.check_p(o)?;
        if self.cols != o.rows {
            return Err(LinAlgError::ShapeMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zero(self.p, self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                for c in 0..o.cols {
                    let idx = r * o.cols + c;
                    out.entries[idx] = (out.entries[idx] + a * o.entries[k * o.cols + c]) % self.p;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        out
    }

    pub fn trace(&self) -> u64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.entries[i * self.cols + i]).fold(0, |s, x| (s + x) % self.p)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        debug_assert!(self.is_square());
        let mut acc = Self::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.entries[r * self.cols + j]).collect()
    }

    pub fn row(&self, r: usize) -> Vec<u64> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn from_cols(p: u64, rows: usize, cols: &[Vec<u64>]) -> Result<Self, LinAlgError> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(LinAlgError::ShapeMismatch("ragged columns".into()));
        }
        let mut m = Self::zero(p, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.entries[i * cols.len() + j] = v % p;
            }
        }
        Ok(m)
    }

    /// Horizontal concatenation [self | o].
    pub fn hstack(&self, o: &Self) -> Result<Self, LinAlgError> {
        self.check_p(o)?;
        if self.rows != o.rows {
            return Err(LinAlgError::ShapeMismatch("hstack".into()));
        }
        let cols = self.cols + o.cols;
        let mut m = Self::zero(self.p, self.rows, cols);
        for r in 0..self.rows {
            m.entries[r * cols..r * cols + self.cols]
                .copy_from_slice(&self.entries[r * self.cols..(r + 1) * self.cols]);
            m.entries[r * cols + self.cols..(r + 1) * cols]
                .copy_from_slice(&o.entries[r * o.cols..(r + 1) * o.cols]);
        }
        Ok(m)
    }

    /// Vertical concatenation [self; o].
    pub fn vstack(&self, o: &Self) -> Result<Self, LinAlgError> {
        self.check_p(o)?;
        if self.cols != o.cols {
            return Err(LinAlgError::ShapeMismatch("vstack".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&o.entries);
        Ok(FpMatrix { p: self.p, rows: self.rows + o.rows, cols: self.cols, entries })
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Result<Self, LinAlgError> {
        self.check_p(o)?;
        let rows = self.rows + o.rows;
        let cols = self.cols + o.cols;
        let mut m = Self::zero(self.p, rows, cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.entries[r * cols + c] = self.entries[r * self.cols + c];
            }
        }
        for r in 0..o.rows {
            for c in 0..o.cols {
                m.entries[(self.rows + r) * cols + self.cols + c] = o.entries[r * o.cols + c];
            }
        }
        Ok(m)
    }

    pub fn submatrix(&self, row_range: std::ops::Range<usize>, col_range: std::ops::Range<usize>) -> Self {
        let rows = row_range.len();
        let cols = col_range.len();
        let mut m = Self::zero(self.p, rows, cols);
        for (ri, r) in row_range.clone().enumerate() {
            for (ci, c) in col_range.clone().enumerate() {
                m.entries[ri * cols + ci] = self.entries[r * self.cols + c];
            }
        }
        m
    }

    /// Reduced row-echelon form. Returns (R, pivot columns, T) with
    /// T * self = R and T invertible.
    pub fn rref(&self) -> Rref {
        let mut r = self.clone();
        let mut t = Self::identity(self.p, self.rows);
        let p = self.p;
        let mut pivots = Vec::new();
        let mut cur = 0usize;
        for col in 0..self.cols {
            if cur == self.rows {
                break;
            }
            // first nonzero at or below cur in this column
            let Some(pr) = (cur..self.rows).find(|&rr| r.entries[rr * r.cols + col] != 0) else {
                continue;
            };
            if pr != cur {
                for c in 0..r.cols {
                    r.entries.swap(pr * r.cols + c, cur * r.cols + c);
                }
                for c in 0..t.cols {
                    t.entries.swap(pr * t.cols + c, cur * t.cols + c);
                }
            }
            let inv = inv_mod(r.entries[cur * r.cols + col], p);
            for c in 0..r.cols {
                r.entries[cur * r.cols + c] = r.entries[cur * r.cols + c] * inv % p;
            }
            for c in 0..t.cols {
                t.entries[cur * t.cols + c] = t.entries[cur * t.cols + c] * inv % p;
            }
            for rr in 0..self.rows {
                if rr == cur {
                    continue;
                }
                let f = r.entries[rr * r.cols + col];
                if f == 0 {
                    continue;
                }
                for c in 0..r.cols {
                    let sub = f * r.entries[cur * r.cols + c] % p;
                    r.entries[rr * r.cols + c] = (r.entries[rr * r.cols + c] + p * p - sub) % p;
                }
                for c in 0..t.cols {
                    let sub = f * t.entries[cur * t.cols + c] % p;
                    t.entries[rr * t.cols + c] = (t.entries[rr * t.cols + c] + p * p - sub) % p;
                }
            }
            pivots.push(col);
            cur += 1;
        }
        Rref { r, pivots, t }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Canonical kernel basis: columns span {x : self * x = 0}.
    /// Basis vectors are indexed by the free (non-pivot) columns, each with a
    /// 1 in its free coordinate.
    pub fn kernel(&self) -> FpMatrix {
        let Rref { r, pivots, .. } = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zero(p, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            basis.entries[fc * free.len() + j] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                // pivot row pi: x_pc = -sum r[pi][free] * x_free
                let v = r.entries[pi * r.cols + fc];
                basis.entries[pc * free.len() + j] = (p - v) % p;
            }
        }
        basis
    }

    /// Canonical basis of the column space.
    pub fn column_space(&self) -> Subspace {
        Subspace::from_columns(self)
    }

    /// Solve self * x = b (b may have several columns; solved columnwise).
    /// Returns None when some column of b is outside the image.
    pub fn solve(&self, b: &Self) -> Result<Option<FpMatrix>, LinAlgError> {
        self.check_p(b)?;
        if b.rows != self.rows {
            return Err(LinAlgError::ShapeMismatch(format!(
                "solve: lhs has {} rows, rhs has {}",
                self.rows, b.rows
            )));
        }
        let Rref { r, pivots, t } = self.rref();
        let tb = t.mul(b)?;
        // consistency: rows below rank must be zero in tb
        let rank = pivots.len();
        for rr in rank..self.rows {
            for c in 0..tb.cols {
                if tb.entries[rr * tb.cols + c] != 0 {
                    return Ok(None);
                }
            }
        }
        let mut x = Self::zero(self.p, self.cols, b.cols);
        for (pi, &pc) in pivots.iter().enumerate() {
            for c in 0..tb.cols {
                x.entries[pc * x.cols + c] = tb.entries[pi * tb.cols + c];
            }
        }
        // check (guards against non-reduced corner cases)
        debug_assert_eq!(self.mul(&x).unwrap(), *b, "solve postcondition A*x=b\nR={:?}", r);
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        let Rref { r, pivots, t } = self.rref();
        if pivots.len() == self.rows {
            debug_assert_eq!(r, Self::identity(self.p, self.rows));
            Some(t)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Entries as a flat row-major vector (for hashing / serialization).
    pub fn flat(&self) -> &[u64] {
        &self.entries
    }
}

pub struct Rref {
    pub r: FpMatrix,
    pub pivots: Vec<usize>,
    pub t: FpMatrix,
}

/// A subspace of F_p^n held in canonical column-echelon form, so two equal
/// subspaces compare equal as values.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Subspace {
    ambient: usize,
    basis: FpMatrix, // ambient x dim, canonical
}

impl Subspace {
    pub fn zero(p: u64, ambient: usize) -> Self {
        Subspace { ambient, basis: FpMatrix::zero(p, ambient, 0) }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        Subspace { ambient, basis: FpMatrix::identity(p, ambient) }
    }

    /// Canonicalize the span of the given columns.
    pub fn from_columns(cols: &FpMatrix) -> Self {
        // row-reduce the transpose; nonzero rows transpose back to the
        // canonical column basis
        let rr = cols.transpose().rref();
        let rank = rr.pivots.len();
        let basis = rr.r.submatrix(0..rank, 0..cols.rows()).transpose();
        Subspace { ambient: cols.rows(), basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn modulus(&self) -> u64 {
        self.basis.modulus()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Coordinates of v in the basis, when v lies in the subspace.
    pub fn coords_of(&self, v: &FpMatrix) -> Option<FpMatrix> {
        self.basis.solve(v).ok().flatten()
    }

    pub fn contains(&self, v: &FpMatrix) -> bool {
        self.coords_of(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|j| self.contains(&FpMatrix::col_vec(self.modulus(), &other.basis.col(j))))
    }

    fn check_ambient(&self, o: &Self) -> Result<(), LinAlgError> {
        if self.ambient != o.ambient {
            return Err(LinAlgError::ShapeMismatch(format!(
                "ambient {} vs {}",
                self.ambient, o.ambient
            )));
        }
        if self.modulus() != o.modulus() {
            return Err(LinAlgError::ModulusMismatch(self.modulus(), o.modulus()));
        }
        Ok(())
    }

    pub fn sum(&self, o: &Self) -> Result<Subspace, LinAlgError> {
        self.check_ambient(o)?;
        Ok(Subspace::from_columns(&self.basis.hstack(&o.basis)?))
    }

    pub fn intersect(&self, o: &Self) -> Result<Subspace, LinAlgError> {
        self.check_ambient(o)?;
        // u = U a = V b  <=>  (a;b) in ker [U | -V]
        let stacked = self.basis.hstack(&o.basis.neg())?;
        let ker = stacked.kernel();
        let a_part = ker.submatrix(0..self.dim(), 0..ker.cols());
        Ok(Subspace::from_columns(&self.basis.mul(&a_part)?))
    }

    /// Projection F_p^ambient -> F_p^(ambient-dim) with kernel exactly this
    /// subspace: reduce modulo the canonical basis, keep non-pivot rows.
    pub fn quotient_map(&self) -> FpMatrix {
        let p = self.modulus();
        let n = self.ambient;
        let pivot_rows = self.pivot_rows();
        let free_rows: Vec<usize> = (0..n).filter(|r| !pivot_rows.contains(r)).collect();
        let mut proj = FpMatrix::zero(p, free_rows.len(), n);
        // proj(v) = (v - basis * v[pivot_rows]) restricted to free rows
        for (out_i, &fr) in free_rows.iter().enumerate() {
            proj.set(out_i, fr, 1);
            for (bi, &pr) in pivot_rows.iter().enumerate() {
                let c = self.basis.get(fr, bi);
                if c != 0 {
                    let cur = proj.get(out_i, pr);
                    proj.set(out_i, pr, (cur + p - c) % p);
                }
            }
        }
        proj
    }

    /// Leading-row indices of the canonical basis columns.
    pub fn pivot_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|j| (0..self.ambient).find(|&r| self.basis.get(r, j) != 0).expect("nonzero basis column"))
            .collect()
    }
}

/// Enumerate all vectors of F_p^n in lexicographic order (first coordinate
/// fastest), including zero. Intended for brute-force oracles; panics if the
/// total count would exceed `cap`.
pub fn enumerate_vectors(p: u64, n: usize, cap: usize) -> Vec<Vec<u64>> {
    let total = (p as u128).checked_pow(n as u32).expect("overflow");
    assert!(total <= cap as u128, "enumeration of {total} vectors exceeds cap {cap}");
    let total = total as usize;
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut v = vec![0u64; n];
        for slot in v.iter_mut() {
            *slot = (idx % p as usize) as u64;
            idx /= p as usize;
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64, rows: &[&[u64]]) -> FpMatrix {
        FpMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_identity() {
        let a = FpMatrix::identity(2, 3);
        let rr = a.rref();
        assert_eq!(rr.r, a);
        assert_eq!(rr.pivots, vec![0, 1, 2]);
        assert_eq!(rr.t, FpMatrix::identity(2, 3));
    }

    #[test]
    fn rref_zero() {
        let a = FpMatrix::zero(2, 2, 3);
        let rr = a.rref();
        assert_eq!(rr.r, a);
        assert!(rr.pivots.is_empty());
        assert_eq!(rr.t, FpMatrix::identity(2, 2));
    }

    #[test]
    fn rref_rank_one() {
        // hand row-reduction: [[1,1],[1,1]] -> [[1,1],[0,0]] over F_2
        let a = m(2, &[&[1, 1], &[1, 1]]);
        let rr = a.rref();
        assert_eq!(rr.r, m(2, &[&[1, 1], &[0, 0]]));
        assert_eq!(rr.pivots, vec![0]);
        assert_eq!(rr.t.mul(&a).unwrap(), rr.r);
        assert!(rr.t.is_invertible());
    }

    #[test]
    fn kernel_image_identity() {
        let a = FpMatrix::identity(2, 2);
        assert_eq!(a.kernel().cols(), 0);
        assert_eq!(a.column_space().dim(), 2);
    }

    #[test]
    fn kernel_image_zero_map() {
        let a = FpMatrix::zero(2, 1, 2); // F_2^2 -> F_2
        assert_eq!(a.kernel().cols(), 2);
        assert_eq!(a.column_space().dim(), 0);
    }

    #[test]
    fn kernel_image_row() {
        // oracle: enumerate the 4 vectors of F_2^2
        let a = m(2, &[&[1, 1]]);
        let mut ker_vectors = Vec::new();
        for v in enumerate_vectors(2, 2, 16) {
            let x = FpMatrix::col_vec(2, &v);
            if a.mul(&x).unwrap().is_zero() {
                ker_vectors.push(v);
            }
        }
        assert_eq!(ker_vectors, vec![vec![0, 0], vec![1, 1]]);
        let ker = a.kernel();
        assert_eq!(ker.cols(), 1);
        assert_eq!(ker.col(0), vec![1, 1]);
        assert_eq!(a.column_space().dim(), 1);
    }

    #[test]
    fn solve_identity() {
        let a = FpMatrix::identity(3, 2);
        let b = FpMatrix::col_vec(3, &[2, 1]);
        assert_eq!(a.solve(&b).unwrap().unwrap(), b);
    }

    #[test]
    fn solve_no_solution() {
        let a = FpMatrix::zero(2, 2, 2);
        let b = FpMatrix::col_vec(2, &[1, 0]);
        assert!(a.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_underdetermined() {
        // oracle: enumeration says (1,0) and (0,1) are the solutions
        let a = m(2, &[&[1, 1], &[0, 0]]);
        let b = FpMatrix::col_vec(2, &[1, 0]);
        let solutions: Vec<Vec<u64>> = enumerate_vectors(2, 2, 16)
            .into_iter()
            .filter(|v| a.mul(&FpMatrix::col_vec(2, v)).unwrap() == b)
            .collect();
        assert_eq!(solutions, vec![vec![1, 0], vec![0, 1]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        assert!(solutions.contains(&x.col(0)));
    }

    #[test]
    fn solve_shape_mismatch() {
        let a = FpMatrix::zero(2, 2, 2);
        let b = FpMatrix::col_vec(2, &[1, 0, 0]);
        assert!(matches!(a.solve(&b), Err(LinAlgError::ShapeMismatch(_))));
    }

    #[test]
    fn subspace_sum_intersection_self() {
        let u = Subspace::from_columns(&m(2, &[&[1], &[1]]));
        assert_eq!(u.sum(&u).unwrap(), u);
        assert_eq!(u.intersect(&u).unwrap(), u);
    }

    #[test]
    fn subspace_complementary_lines() {
        let u = Subspace::from_columns(&m(2, &[&[1], &[0]]));
        let v = Subspace::from_columns(&m(2, &[&[0], &[1]]));
        assert!(u.sum(&v).unwrap().is_full());
        assert!(u.intersect(&v).unwrap().is_zero());
    }

    #[test]
    fn subspace_lines_f3() {
        // oracle: the four lines of F_3^2 are spanned by (1,0),(0,1),(1,1),(1,2);
        // any two distinct ones meet trivially and span the plane
        let lines: Vec<Subspace> = [[1u64, 0], [0, 1], [1, 1], [1, 2]]
            .iter()
            .map(|v| Subspace::from_columns(&FpMatrix::col_vec(3, v)))
            .collect();
        for i in 0..lines.len() {
            for j in 0..lines.len() {
                if i == j {
                    continue;
                }
                assert_eq!(lines[i].sum(&lines[j]).unwrap().dim(), 2);
                assert_eq!(lines[i].intersect(&lines[j]).unwrap().dim(), 0);
            }
        }
    }

    #[test]
    fn subspace_ambient_mismatch() {
        let u = Subspace::zero(2, 2);
        let v = Subspace::zero(2, 3);
        assert!(u.sum(&v).is_err());
    }

    #[test]
    fn quotient_map_kernel() {
        let u = Subspace::from_columns(&m(2, &[&[1], &[1], &[0]]));
        let q = u.quotient_map();
        assert_eq!(q.rows(), 2);
        assert!(q.mul(u.basis()).unwrap().is_zero());
        assert_eq!(q.rank(), 2);
    }

    #[test]
    fn bad_modulus_rejected() {
        assert!(FpMatrix::new(4, 1, 1, vec![0]).is_err());
        assert!(FpMatrix::new(257, 1, 1, vec![0]).is_err());
        assert!(FpMatrix::new(251, 1, 1, vec![250]).is_ok());
    }

    fn arb_matrix(ps: &'static [u64], max_dim: usize) -> impl Strategy<Value = FpMatrix> {
        (0..ps.len(), 1..=max_dim, 1..=max_dim).prop_flat_map(move |(pi, r, c)| {
            let p = ps[pi];
            proptest::collection::vec(0..p, r * c)
                .prop_map(move |entries| FpMatrix::new(p, r, c, entries).unwrap())
        })
    }

    proptest! {
        #[test]
        fn prop_rref_contract(a in arb_matrix(&[2, 3], 8)) {
            let rr = a.rref();
            // T*A = R, T invertible, R idempotent under rref
            prop_assert_eq!(rr.t.mul(&a).unwrap(), rr.r.clone());
            prop_assert!(rr.t.is_invertible());
            let again = rr.r.rref();
            prop_assert_eq!(again.r, rr.r);
            // rank stable under transposition
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn prop_rank_nullity(a in arb_matrix(&[2, 3], 8)) {
            let ker = a.kernel();
            prop_assert!(a.mul(&ker).unwrap().is_zero());
            prop_assert_eq!(ker.cols() + a.column_space().dim(), a.cols());
            // modular closure
            prop_assert!(ker.flat().iter().all(|&x| x < ker.modulus()));
        }

        #[test]
        fn prop_solve_matches_bruteforce(a in arb_matrix(&[2, 3], 5), seed in 0u64..1000) {
            // p^cols <= 3^5 = 243 <= 4096: full enumeration oracle
            let p = a.modulus();
            let b_entries: Vec<u64> = (0..a.rows()).map(|i| (seed >> i) % p).collect();
            let b = FpMatrix::col_vec(p, &b_entries);
            let brute = enumerate_vectors(p, a.cols(), 4096)
                .into_iter()
                .find(|v| a.mul(&FpMatrix::col_vec(p, v)).unwrap() == b);
            let fast = a.solve(&b).unwrap();
            prop_assert_eq!(brute.is_some(), fast.is_some());
            if let Some(x) = fast {
                prop_assert_eq!(a.mul(&x).unwrap(), b);
            }
        }

        #[test]
        fn prop_subspace_dimension_formula(
            u in arb_matrix(&[2, 3], 6),
            seed in 0u64..1_000_000u64,
        ) {
            let p = u.modulus();
            let n = u.rows();
            let v_entries: Vec<u64> = (0..n * 2).map(|i| (seed >> (i % 20)) % p).collect();
            let v = FpMatrix::new(p, n, 2, v_entries).unwrap();
            let us = u.column_space();
            let vs = v.column_space();
            let sum = us.sum(&vs).unwrap();
            let int = us.intersect(&vs).unwrap();
            prop_assert_eq!(sum.dim() + int.dim(), us.dim() + vs.dim());
            prop_assert!(sum.contains_space(&us) && sum.contains_space(&vs));
            prop_assert!(us.contains_space(&int) && vs.contains_space(&int));
            // quotient by U kills exactly U
            let q = us.quotient_map();
            prop_assert!(q.mul(us.basis()).unwrap().is_zero());
            prop_assert_eq!(q.rank(), n - us.dim());
        }
    }
}
