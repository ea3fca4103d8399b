//! Row-module linear algebra over the chain ring `Λ`.
//!
//! Vectors are rows of ring codes over the free module `Λ^c`. Mixed moduli
//! (components `Λ/(p^λ)` with `λ < n`) are handled by the callers through the
//! embedding `Λ/(p^λ) -> Λ, x -> p^{n-λ} x`, so everything here works over `Λ`
//! itself.
//!
//! Two normal forms are provided:
//! - [`HowellForm`]: a canonical echelon basis of a row module (unique per
//!   module), used for equality, membership and kernels;
//! - [`SmithSystem`]: a diagonalization `U M V = D`, used to solve `x M = b`.

use crate::error::{Error, Result};
use crate::ring::RingSpec;

pub type Row = Vec<u64>;

pub(crate) fn row_is_zero(row: &[u64]) -> bool {
    row.iter().all(|&x| x == 0)
}

/// `target += c * row`
pub(crate) fn axpy(ring: &RingSpec, target: &mut [u64], c: u64, row: &[u64]) {
    if c == 0 {
        return;
    }
    for (t, &r) in target.iter_mut().zip(row) {
        if r != 0 {
            *t = ring.add(*t, ring.mul(c, r));
        }
    }
}

/// `target -= c * row`
pub(crate) fn axmy(ring: &RingSpec, target: &mut [u64], c: u64, row: &[u64]) {
    axpy(ring, target, ring.neg(c), row)
}

pub(crate) fn scale(ring: &RingSpec, c: u64, row: &[u64]) -> Row {
    row.iter().map(|&r| ring.mul(c, r)).collect()
}

pub(crate) fn scale_p_pow(ring: &RingSpec, e: u32, row: &[u64]) -> Row {
    row.iter().map(|&r| ring.mul_p_pow(r, e)).collect()
}

/// Canonical echelon form of a row submodule of `Λ^c`.
///
/// Rows are sorted by pivot column. Each pivot entry is exactly `p^e`, and
/// every entry sitting in a pivot column of a later row is reduced modulo
/// that pivot. The row set has the Howell property: the rows with pivot at
/// or after column `j` span all elements of the module vanishing before `j`.
/// Consequently two modules are equal iff their forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HowellForm {
    ncols: usize,
    rows: Vec<Row>,
    pivots: Vec<(usize, u32)>,
}

impl HowellForm {
    pub fn zero(ncols: usize) -> Self {
        HowellForm { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn new<I>(ring: &RingSpec, ncols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Row>,
    {
        let n = ring.n();
        let mut work: Vec<Row> = rows.into_iter().filter(|r| !row_is_zero(r)).collect();
        debug_assert!(work.iter().all(|r| r.len() == ncols));
        let mut out_rows: Vec<Row> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..ncols {
            // minimal valuation, lowest row index on ties
            let best = work
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(i, r)| (ring.valuation(r[col]), *i))
                .map(|(i, _)| i);
            let Some(best) = best else { continue };
            let mut g = work.swap_remove(best);
            let e = ring.valuation(g[col]);
            let u_inv = ring.inverse(ring.unit_part(g[col]).expect("nonzero pivot")).expect("unit");
            if u_inv != 1 {
                g = scale(ring, u_inv, &g);
            }
            debug_assert_eq!(g[col], ring.p_pow(e));
            for r in work.iter_mut() {
                if r[col] != 0 {
                    let q = ring.div_p_pow(r[col], e);
                    axmy(ring, r, q, &g);
                    debug_assert_eq!(r[col], 0);
                }
            }
            // p^{n-e} g vanishes in this column and must stay in the module
            let tail = scale_p_pow(ring, n - e, &g);
            if !row_is_zero(&tail) {
                work.push(tail);
            }
            work.retain(|r| !row_is_zero(r));
            out_rows.push(g);
            pivots.push((col, e));
        }
        // back-reduction of entries above later pivots
        for k in 0..out_rows.len() {
            let (col, e) = pivots[k];
            let (above, rest) = out_rows.split_at_mut(k);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                let x = row[col];
                if x == 0 {
                    continue;
                }
                // x = q p^e + (x mod p^e) on codes, for both ring kinds
                let q = x / ring.order(e);
                if q != 0 {
                    axmy(ring, row, q, pivot_row);
                }
                debug_assert_eq!(row[col], ring.reduce(x, e));
            }
        }
        HowellForm { ncols, rows: out_rows, pivots }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Composition length of the module: `Σ (n - e)` over the pivots.
    pub fn length(&self, ring: &RingSpec) -> u32 {
        self.pivots.iter().map(|&(_, e)| ring.n() - e).sum()
    }

    /// Reduces `v` against the form. Returns `true` iff `v` lies in the module.
    pub fn contains(&self, ring: &RingSpec, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        let mut next = 0;
        for col in 0..self.ncols {
            if next < self.pivots.len() && self.pivots[next].0 == col {
                let e = self.pivots[next].1;
                if v[col] != 0 {
                    if ring.valuation(v[col]) < e {
                        return false;
                    }
                    let q = ring.div_p_pow(v[col], e);
                    axmy(ring, &mut v, q, &self.rows[next]);
                }
                next += 1;
            } else if v[col] != 0 {
                return false;
            }
        }
        true
    }

    pub fn is_subset(&self, ring: &RingSpec, other: &HowellForm) -> bool {
        self.rows.iter().all(|r| other.contains(ring, r))
    }

    pub fn sum(&self, ring: &RingSpec, other: &HowellForm) -> HowellForm {
        HowellForm::new(ring, self.ncols, self.rows.iter().chain(other.rows.iter()).cloned())
    }

    pub fn intersect(&self, ring: &RingSpec, other: &HowellForm) -> HowellForm {
        // {(u, u)} + {(v, 0)}: elements with vanishing first block are (0, u) with u ∈ U ∩ V
        let pairs: Vec<(Row, Row)> = self.rows.iter().map(|u| (u.clone(), u.clone())).collect();
        preimage(ring, self.ncols, self.ncols, &pairs, &other.rows)
    }
}

/// Given pairs `(image_k, source_k)` describing a linear map on the module
/// generated by the `source_k`, returns the canonical form of
/// `{ Σ c_k source_k : Σ c_k image_k ∈ K }` where `K` is spanned by `target`.
pub fn preimage(
    ring: &RingSpec,
    img_cols: usize,
    src_cols: usize,
    pairs: &[(Row, Row)],
    target: &[Row],
) -> HowellForm {
    let width = img_cols + src_cols;
    let mut rows: Vec<Row> = Vec::with_capacity(pairs.len() + target.len());
    for (img, src) in pairs {
        let mut r = Vec::with_capacity(width);
        r.extend_from_slice(img);
        r.extend_from_slice(src);
        rows.push(r);
    }
    for t in target {
        let mut r = t.clone();
        r.resize(width, 0);
        rows.push(r);
    }
    let form = HowellForm::new(ring, width, rows);
    let kernel_rows = form
        .rows
        .iter()
        .zip(&form.pivots)
        .filter(|(_, &(col, _))| col >= img_cols)
        .map(|(r, _)| r[img_cols..].to_vec());
    HowellForm::new(ring, src_cols, kernel_rows)
}

/// Solution set of `x M = b`: a particular solution and generators of the
/// homogeneous solution module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Row,
    pub homogeneous: Vec<Row>,
}

/// Smith diagonalization `U M V = D` of a `k x c` matrix over `Λ`.
///
/// Pivots are chosen by minimal valuation, ties broken by lowest column
/// index and then lowest row index.
#[derive(Clone, Debug)]
pub struct SmithSystem {
    ring: RingSpec,
    nrows: usize,
    ncols: usize,
    /// valuations of the nonzero diagonal entries `p^{e_t}`
    exps: Vec<u32>,
    u: Vec<Row>,
    v: Vec<Row>,
}

impl SmithSystem {
    pub fn new(ring: &RingSpec, matrix: &[Row], ncols: usize) -> Result<Self> {
        let nrows = matrix.len();
        if let Some(bad) = matrix.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, got: bad.len() });
        }
        let mut a: Vec<Row> = matrix.to_vec();
        let mut u = identity(nrows);
        let mut v = identity(ncols);
        let mut exps = Vec::new();
        for t in 0..nrows.min(ncols) {
            let mut best: Option<(u32, usize, usize)> = None;
            for j in t..ncols {
                for (i, row) in a.iter().enumerate().skip(t) {
                    if row[j] != 0 {
                        let key = (ring.valuation(row[j]), j, i);
                        if best.is_none_or(|b| key < b) {
                            best = Some(key);
                        }
                    }
                }
            }
            let Some((e, j, i)) = best else { break };
            a.swap(t, i);
            u.swap(t, i);
            for row in a.iter_mut() {
                row.swap(t, j);
            }
            for row in v.iter_mut() {
                row.swap(t, j);
            }
            let inv = ring.inverse(ring.unit_part(a[t][t])?)?;
            a[t] = scale(ring, inv, &a[t]);
            u[t] = scale(ring, inv, &u[t]);
            for i in t + 1..nrows {
                if a[i][t] != 0 {
                    let q = ring.div_p_pow(a[i][t], e);
                    let (top, bottom) = a.split_at_mut(i);
                    axmy(ring, &mut bottom[0], q, &top[t]);
                    let (top, bottom) = u.split_at_mut(i);
                    axmy(ring, &mut bottom[0], q, &top[t]);
                }
            }
            for j in t + 1..ncols {
                if a[t][j] != 0 {
                    let q = ring.div_p_pow(a[t][j], e);
                    for row in a.iter_mut() {
                        let x = row[t];
                        row[j] = ring.sub(row[j], ring.mul(q, x));
                    }
                    for row in v.iter_mut() {
                        let x = row[t];
                        row[j] = ring.sub(row[j], ring.mul(q, x));
                    }
                }
            }
            exps.push(e);
        }
        Ok(SmithSystem { ring: *ring, nrows, ncols, exps, u, v })
    }

    /// Valuations of the invariant factors `p^{e_t}` (nonzero only).
    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    /// Solves `x M = b`. `None` when inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Solution>> {
        let ring = &self.ring;
        if b.len() != self.ncols {
            return Err(Error::DimensionMismatch { expected: self.ncols, got: b.len() });
        }
        // b' = b V
        let mut bv = vec![0u64; self.ncols];
        for (k, &bk) in b.iter().enumerate() {
            axpy(ring, &mut bv, bk, &self.v[k]);
        }
        let rank = self.rank();
        if bv[rank..].iter().any(|&x| x != 0) {
            return Ok(None);
        }
        let mut y = vec![0u64; self.nrows];
        for t in 0..rank {
            let e = self.exps[t];
            if ring.valuation(bv[t]) < e {
                return Ok(None);
            }
            y[t] = ring.div_p_pow(bv[t], e);
        }
        let mut particular = vec![0u64; self.nrows];
        for (t, &yt) in y.iter().enumerate() {
            axpy(ring, &mut particular, yt, &self.u[t]);
        }
        let mut homogeneous = Vec::new();
        for t in 0..self.nrows {
            let gen = if t < rank {
                scale_p_pow(ring, ring.n() - self.exps[t], &self.u[t])
            } else {
                self.u[t].clone()
            };
            if !row_is_zero(&gen) {
                homogeneous.push(gen);
            }
        }
        Ok(Some(Solution { particular, homogeneous }))
    }
}

/// One-shot form of [`SmithSystem::solve`].
pub fn smith_solve(ring: &RingSpec, matrix: &[Row], ncols: usize, rhs: &[u64]) -> Result<Option<Solution>> {
    SmithSystem::new(ring, matrix, ncols)?.solve(rhs)
}

pub(crate) fn identity(k: usize) -> Vec<Row> {
    (0..k)
        .map(|i| {
            let mut r = vec![0u64; k];
            r[i] = 1;
            r
        })
        .collect()
}
