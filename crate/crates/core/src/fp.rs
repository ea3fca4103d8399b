//! Linear algebra over the prime field `F_p`.
//!
//! Vectors are rows; a matrix `M` acts on the right, `x -> x M`.

use crate::error::{Error, Result};

pub type FpVec = Vec<u64>;

/// A dense matrix over `F_p`, stored as rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    pub p: u64,
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<FpVec>,
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form in place; returns the pivot columns.
pub(crate) fn rref(p: u64, rows: &mut Vec<FpVec>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let (pr, ri) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, &y) in ri.iter_mut().zip(pr.iter()) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

impl FpMatrix {
    pub fn zeros(p: u64, nrows: usize, ncols: usize) -> Self {
        FpMatrix { p, nrows, ncols, rows: vec![vec![0; ncols]; nrows] }
    }

    pub fn identity(p: u64, k: usize) -> Self {
        let mut m = Self::zeros(p, k, k);
        for i in 0..k {
            m.rows[i][i] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, ncols: usize, rows: Vec<FpVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, got: r.len() });
        }
        let rows: Vec<FpVec> = rows.into_iter().map(|r| r.into_iter().map(|x| x % p).collect()).collect();
        Ok(FpMatrix { p, nrows: rows.len(), ncols, rows })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn apply(&self, x: &[u64]) -> FpVec {
        debug_assert_eq!(x.len(), self.nrows);
        let mut out = vec![0u64; self.ncols];
        for (xi, row) in x.iter().zip(&self.rows) {
            if *xi == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                *o = (*o + xi * r) % self.p;
            }
        }
        out
    }

    /// `self * other`: first `self`, then `other`.
    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        debug_assert_eq!(self.ncols, other.nrows);
        FpMatrix {
            p: self.p,
            nrows: self.nrows,
            ncols: other.ncols,
            rows: self.rows.iter().map(|r| other.apply(r)).collect(),
        }
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            for (x, &y) in r.iter_mut().zip(o) {
                *x = (*x + y) % self.p;
            }
        }
        out
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let mut out = self.clone();
        for r in out.rows.iter_mut() {
            for x in r.iter_mut() {
                *x = *x * c % self.p;
            }
        }
        out
    }

    pub fn transpose(&self) -> FpMatrix {
        let rows = (0..self.ncols).map(|j| self.rows.iter().map(|r| r[j]).collect()).collect();
        FpMatrix { p: self.p, nrows: self.ncols, ncols: self.nrows, rows }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref(self.p, &mut rows, self.ncols).len()
    }

    /// Left kernel `{x : x M = 0}` as a subspace of `F_p^{nrows}`.
    pub fn left_kernel(&self) -> Subspace {
        // rref of [M | I]; rows with zero M-part give the kernel
        let width = self.ncols + self.nrows;
        let mut aug: Vec<FpVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.clone();
                v.resize(width, 0);
                v[self.ncols + i] = 1;
                v
            })
            .collect();
        rref(self.p, &mut aug, width);
        let basis = aug
            .into_iter()
            .filter(|v| v[..self.ncols].iter().all(|&x| x == 0))
            .map(|v| v[self.ncols..].to_vec())
            .collect();
        Subspace::span(self.p, self.nrows, basis)
    }

    pub fn row_space(&self) -> Subspace {
        Subspace::span(self.p, self.ncols, self.rows.clone())
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.nrows != self.ncols {
            return None;
        }
        let k = self.nrows;
        let mut aug: Vec<FpVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.clone();
                v.resize(2 * k, 0);
                v[k + i] = 1;
                v
            })
            .collect();
        let piv = rref(self.p, &mut aug, k);
        if piv.len() != k || piv.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(FpMatrix { p: self.p, nrows: k, ncols: k, rows: aug.into_iter().map(|v| v[k..].to_vec()).collect() })
    }

    pub fn pow(&self, e: usize) -> FpMatrix {
        let mut acc = FpMatrix::identity(self.p, self.nrows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Block diagonal sum.
    pub fn block_diag(p: u64, blocks: &[FpMatrix]) -> FpMatrix {
        let nrows = blocks.iter().map(|b| b.nrows).sum();
        let ncols = blocks.iter().map(|b| b.ncols).sum();
        let mut out = FpMatrix::zeros(p, nrows, ncols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for (i, row) in b.rows.iter().enumerate() {
                out.rows[r0 + i][c0..c0 + b.ncols].copy_from_slice(row);
            }
            r0 += b.nrows;
            c0 += b.ncols;
        }
        out
    }
}

/// Solves `x M = b` for a matrix given by its rows. `None` if inconsistent.
pub fn solve_left(p: u64, rows: &[FpVec], b: &[u64]) -> Option<FpVec> {
    let k = rows.len();
    let c = b.len();
    let width = c + k;
    let mut aug: Vec<FpVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.resize(width, 0);
            v[c + i] = 1;
            v
        })
        .collect();
    let piv = rref(p, &mut aug, width);
    let mut rem = b.to_vec();
    rem.resize(width, 0);
    for (row, &col) in aug.iter().zip(&piv) {
        if col >= c {
            break;
        }
        let f = rem[col];
        if f != 0 {
            for (x, &y) in rem.iter_mut().zip(row) {
                *x = (*x + p - f * y % p) % p;
            }
        }
    }
    if rem[..c].iter().any(|&x| x != 0) {
        return None;
    }
    // rem = b - Σ f_i (row_i | t_i) = (0 | -x)
    Some(rem[c..].iter().map(|&x| (p - x) % p).collect())
}

/// A subspace of `F_p^ambient`, stored as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    p: u64,
    ambient: usize,
    basis: Vec<FpVec>,
}

impl Subspace {
    pub fn span(p: u64, ambient: usize, vectors: Vec<FpVec>) -> Self {
        let mut rows: Vec<FpVec> =
            vectors.into_iter().map(|v| v.into_iter().map(|x| x % p).collect()).collect();
        rref(p, &mut rows, ambient);
        Subspace { p, ambient, basis: rows }
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        Subspace { p, ambient, basis: Vec::new() }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        Subspace { p, ambient, basis: FpMatrix::identity(p, ambient).rows }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FpVec] {
        &self.basis
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rem = v.to_vec();
        for row in &self.basis {
            let c = row.iter().position(|&x| x != 0).expect("nonzero basis row");
            let f = rem[c];
            if f != 0 {
                for (x, &y) in rem.iter_mut().zip(row) {
                    *x = (*x + self.p - f * y % self.p) % self.p;
                }
            }
        }
        rem.iter().all(|&x| x == 0)
    }

    pub fn is_subset(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.p, self.ambient, self.basis.iter().chain(&other.basis).cloned().collect())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // x M = 0 on [U; W] splits into u = -w
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        let m = FpMatrix { p: self.p, nrows: rows.len(), ncols: self.ambient, rows };
        let ker = m.left_kernel();
        let vecs = ker
            .basis
            .iter()
            .map(|coef| {
                let mut v = vec![0u64; self.ambient];
                for (c, b) in coef.iter().zip(&self.basis) {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = (*x + c * y) % self.p;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.p, self.ambient, vecs)
    }

    /// `{ y : v · y = 0 for all v in self }`.
    pub fn annihilator(&self) -> Subspace {
        let m = FpMatrix { p: self.p, nrows: self.basis.len(), ncols: self.ambient, rows: self.basis.clone() };
        m.transpose().left_kernel()
    }

    /// Image under `x -> x M`.
    pub fn image(&self, m: &FpMatrix) -> Subspace {
        Subspace::span(self.p, m.ncols, self.basis.iter().map(|v| m.apply(v)).collect())
    }

    /// Coordinates of the members of `self` with respect to the rows of `frame`
    /// (which must be linearly independent and span a space containing `self`).
    pub fn in_coordinates(&self, frame: &[FpVec]) -> Result<Subspace> {
        let vecs = self
            .basis
            .iter()
            .map(|v| {
                solve_left(self.p, frame, v)
                    .ok_or_else(|| Error::inconsistent("vector outside the coordinate frame"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(self.p, frame.len(), vecs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersections_and_sums() {
        let p = 3;
        let u = Subspace::span(p, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let w = Subspace::span(p, 3, vec![vec![0, 1, 1], vec![0, 0, 1]]);
        assert_eq!(u.intersect(&w), Subspace::span(p, 3, vec![vec![0, 1, 0]]));
        assert_eq!(u.sum(&w).dim(), 3);
        assert!(Subspace::zero(p, 3).is_subset(&u));
        let diag = Subspace::span(p, 2, vec![vec![1, 1]]);
        assert_eq!(diag.intersect(&Subspace::span(p, 2, vec![vec![1, 0]])).dim(), 0);
    }

    #[test]
    fn inverse_and_solve() {
        let m = FpMatrix::from_rows(5, 2, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMatrix::identity(5, 2));
        let x = solve_left(5, &m.rows, &[4, 1]).unwrap();
        assert_eq!(m.apply(&x), vec![4, 1]);
        let sing = FpMatrix::from_rows(2, 2, vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert!(sing.inverse().is_none());
        assert_eq!(sing.left_kernel().dim(), 1);
        assert!(solve_left(2, &sing.rows, &[1, 0]).is_none());
    }
}
