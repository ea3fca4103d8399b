//! Representations of the poset `P_n` over `F_p`: a chain `1 > 2 > … > n-1`
//! and two isolated points `1'`, `1''`.
//!
//! A representation is a total space `V^0 = F_p^d` with subspaces
//! `V^1 ⊇ … ⊇ V^{n-1}`, `V'` and `V''`. Maps act on row vectors from the
//! right.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, FpVec, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosetRep {
    p: u64,
    n: u32,
    dim: usize,
    /// `V^1, …, V^{n-1}`
    chain: Vec<Subspace>,
    vp: Subspace,
    vpp: Subspace,
}

/// The points of `P_n` other than the total space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Point {
    Chain(u32),
    Prime,
    DoublePrime,
}

impl PosetRep {
    pub fn new(p: u64, n: u32, dim: usize, chain: Vec<Subspace>, vp: Subspace, vpp: Subspace) -> Result<Self> {
        if chain.len() + 1 != n as usize {
            return Err(Error::DimensionMismatch { expected: n as usize - 1, got: chain.len() });
        }
        for s in chain.iter().chain([&vp, &vpp]) {
            if s.ambient() != dim || s.p() != p {
                return Err(Error::DimensionMismatch { expected: dim, got: s.ambient() });
            }
        }
        if chain.windows(2).any(|w| !w[1].is_subset(&w[0])) {
            return Err(Error::Precondition("chain subspaces must be nested".into()));
        }
        Ok(PosetRep { p, n, dim, chain, vp, vpp })
    }

    pub fn zero(p: u64, n: u32) -> Self {
        let z = Subspace::zero(p, 0);
        PosetRep { p, n, dim: 0, chain: vec![z.clone(); n as usize - 1], vp: z.clone(), vpp: z }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total(&self) -> Subspace {
        Subspace::full(self.p, self.dim)
    }

    /// `V^i` for `0 ≤ i ≤ n-1`.
    pub fn level(&self, i: u32) -> Subspace {
        if i == 0 {
            self.total()
        } else {
            self.chain[i as usize - 1].clone()
        }
    }

    pub fn vprime(&self) -> &Subspace {
        &self.vp
    }

    pub fn vdprime(&self) -> &Subspace {
        &self.vpp
    }

    fn points(&self) -> Vec<(Point, &Subspace)> {
        let mut out: Vec<(Point, &Subspace)> =
            self.chain.iter().enumerate().map(|(i, s)| (Point::Chain(i as u32 + 1), s)).collect();
        out.push((Point::Prime, &self.vp));
        out.push((Point::DoublePrime, &self.vpp));
        out
    }

    fn map_subspaces(&self, dim: usize, f: impl Fn(&Subspace) -> Subspace) -> PosetRep {
        PosetRep {
            p: self.p,
            n: self.n,
            dim,
            chain: self.chain.iter().map(&f).collect(),
            vp: f(&self.vp),
            vpp: f(&self.vpp),
        }
    }

    /// `V^{n-1} ⊆ V'` and `V' + V'' = V^0`.
    pub fn satisfies_rep_prime(&self) -> bool {
        self.level(self.n - 1).is_subset(&self.vp) && self.vp.sum(&self.vpp).dim() == self.dim
    }

    /// Additive invariants. For every level `X = V^i`, `0 ≤ i ≤ n-1`:
    /// `dim X, X∩V', X∩V'', X∩V'∩V'', X∩(V'+V''), (X+V')∩V'', (X+V'')∩V'`;
    /// then `dim (V^j + V') ∩ V^i ∩ V''` for all `i < j`, which tells the
    /// two-dimensional labels apart from sums of one-dimensional ones.
    pub fn rank_invariants(&self) -> Vec<i64> {
        let both = self.vp.intersect(&self.vpp);
        let either = self.vp.sum(&self.vpp);
        let mut out = Vec::new();
        for i in 0..self.n {
            let x = self.level(i);
            out.push(x.dim());
            out.push(x.intersect(&self.vp).dim());
            out.push(x.intersect(&self.vpp).dim());
            out.push(x.intersect(&both).dim());
            out.push(x.intersect(&either).dim());
            out.push(x.sum(&self.vp).intersect(&self.vpp).dim());
            out.push(x.sum(&self.vpp).intersect(&self.vp).dim());
        }
        for i in 0..self.n {
            let low = self.level(i).intersect(&self.vpp);
            for j in i + 1..self.n {
                out.push(self.level(j).sum(&self.vp).intersect(&low).dim());
            }
        }
        out.into_iter().map(|d| d as i64).collect()
    }

    /// Block direct sum.
    pub fn direct_sum(p: u64, n: u32, reps: &[PosetRep]) -> PosetRep {
        let dim = reps.iter().map(|r| r.dim).sum();
        let lift = |select: &dyn Fn(&PosetRep) -> Subspace| {
            let mut vecs = Vec::new();
            let mut off = 0;
            for r in reps {
                for b in select(r).basis() {
                    let mut v = vec![0; dim];
                    v[off..off + r.dim].copy_from_slice(b);
                    vecs.push(v);
                }
                off += r.dim;
            }
            Subspace::span(p, dim, vecs)
        };
        PosetRep {
            p,
            n,
            dim,
            chain: (1..n).map(|i| lift(&|r: &PosetRep| r.level(i))).collect(),
            vp: lift(&|r: &PosetRep| r.vp.clone()),
            vpp: lift(&|r: &PosetRep| r.vpp.clone()),
        }
    }

    /// Transport along an invertible matrix `g`: the result has subspaces `X g`.
    pub fn transform(&self, g: &FpMatrix) -> PosetRep {
        self.map_subspaces(self.dim, |s| s.image(g))
    }

    /// The subrepresentation on the span of `basis` (assumed to be one), in
    /// the coordinates given by `basis`.
    pub fn restrict(&self, basis: &[FpVec]) -> Result<PosetRep> {
        let span = Subspace::span(self.p, self.dim, basis.to_vec());
        if span.dim() != basis.len() {
            return Err(Error::Precondition("restriction basis is linearly dependent".into()));
        }
        let coords = |s: &Subspace| s.intersect(&span).in_coordinates(basis);
        Ok(PosetRep {
            p: self.p,
            n: self.n,
            dim: basis.len(),
            chain: self.chain.iter().map(coords).collect::<Result<Vec<_>>>()?,
            vp: coords(&self.vp)?,
            vpp: coords(&self.vpp)?,
        })
    }

    fn check_compatible(&self, other: &PosetRep) -> Result<()> {
        if self.p != other.p || self.n != other.n {
            return Err(Error::Precondition("representations over different posets or fields".into()));
        }
        Ok(())
    }

    /// Whether `h: V^0 -> W^0` maps every `V^x` into `W^x`.
    pub fn is_morphism(&self, other: &PosetRep, h: &FpMatrix) -> bool {
        if h.nrows != self.dim || h.ncols != other.dim {
            return false;
        }
        self.points().iter().zip(other.points()).all(|((_, s), (_, t))| s.image(h).is_subset(t))
    }

    /// A basis of `Hom(V, W)`.
    pub fn hom_space(&self, other: &PosetRep) -> Result<Vec<FpMatrix>> {
        self.check_compatible(other)?;
        let (d, e, p) = (self.dim, other.dim, self.p);
        let unknowns = d * e;
        if unknowns == 0 {
            return Ok(Vec::new());
        }
        // each constraint v · h · y = 0 is a column over the unknowns h_{ab}
        let mut cols: Vec<Vec<u64>> = Vec::new();
        for ((_, s), (_, t)) in self.points().iter().zip(other.points()) {
            let ann = t.annihilator();
            for v in s.basis() {
                for y in ann.basis() {
                    let mut col = vec![0u64; unknowns];
                    for (a, &va) in v.iter().enumerate().filter(|(_, &x)| x != 0) {
                        for (b, &yb) in y.iter().enumerate().filter(|(_, &x)| x != 0) {
                            col[a * e + b] = va * yb % p;
                        }
                    }
                    cols.push(col);
                }
            }
        }
        let rows: Vec<Vec<u64>> = (0..unknowns).map(|u| cols.iter().map(|c| c[u]).collect()).collect();
        let constraints = FpMatrix { p, nrows: unknowns, ncols: cols.len(), rows };
        let kernel = constraints.left_kernel();
        Ok(kernel
            .basis()
            .iter()
            .map(|h| FpMatrix { p, nrows: d, ncols: e, rows: h.chunks(e).map(|c| c.to_vec()).collect() })
            .collect())
    }

    pub fn hom_dim(&self, other: &PosetRep) -> Result<usize> {
        Ok(self.hom_space(other)?.len())
    }

    /// Multiplicities of the indecomposable summands, from the rank
    /// invariants.
    pub fn multiplicities(&self) -> Result<BTreeMap<RepLabel, usize>> {
        InvariantSolver::for_n(self.n).solve(&self.rank_invariants())
    }

    /// Decomposes into indecomposables. Each summand comes with rows in `V^0`
    /// that are the images of the standard basis of its label's
    /// representation under an embedding; stacked in order they form an
    /// isomorphism `⊕ labels -> V`, which is verified before returning.
    pub fn decompose(&self) -> Result<Vec<Summand>> {
        let mults = self.multiplicities()?;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ self.dim as u64);
        let mut frame: Vec<FpVec> = FpMatrix::identity(self.p, self.dim).rows;
        let mut cur = self.clone();
        let mut out = Vec::new();
        for (&label, &count) in &mults {
            let l = label.rep(self.p, self.n)?;
            for _ in 0..count {
                let (alpha, beta) = split_off(&l, &cur, &mut rng)?;
                let rows: Vec<FpVec> = alpha.rows.iter().map(|r| combine(self.p, r, &frame)).collect();
                out.push(Summand { label, basis: rows });
                let kernel = beta.left_kernel();
                let kb = kernel.basis().to_vec();
                cur = cur.restrict(&kb)?;
                frame = kb.iter().map(|r| combine(self.p, r, &frame)).collect();
            }
        }
        if cur.dim != 0 {
            return Err(Error::inconsistent("decomposition left a nonzero remainder"));
        }
        let (sum, iso) = Summand::assemble(self.p, self.n, &out)?;
        let inv = iso.inverse().ok_or_else(|| Error::inconsistent("summands are not independent"))?;
        if !sum.is_morphism(self, &iso) || !self.is_morphism(&sum, &inv) {
            return Err(Error::inconsistent("summands do not form a decomposition"));
        }
        Ok(out)
    }

    /// An isomorphism `V -> W`, if one exists.
    pub fn find_iso(&self, other: &PosetRep) -> Result<Option<FpMatrix>> {
        self.check_compatible(other)?;
        if self.multiplicities()? != other.multiplicities()? {
            return Ok(None);
        }
        let (_, pv) = Summand::assemble(self.p, self.n, &self.decompose()?)?;
        let (_, pw) = Summand::assemble(self.p, self.n, &other.decompose()?)?;
        let inv = pv.inverse().ok_or_else(|| Error::inconsistent("singular decomposition"))?;
        let h = inv.mul(&pw);
        if !self.is_morphism(other, &h) {
            return Err(Error::inconsistent("assembled isomorphism is not a morphism"));
        }
        Ok(Some(h))
    }
}

fn combine(p: u64, coeffs: &[u64], frame: &[FpVec]) -> FpVec {
    let m = FpMatrix { p, nrows: frame.len(), ncols: frame.first().map_or(0, |r| r.len()), rows: frame.to_vec() };
    m.apply(coeffs)
}

/// Finds `α: L -> V`, `β: V -> L` with `βα` invertible.
fn split_off(l: &PosetRep, v: &PosetRep, rng: &mut ChaCha8Rng) -> Result<(FpMatrix, FpMatrix)> {
    let into = l.hom_space(v)?;
    let back = v.hom_space(l)?;
    let p = v.p;
    let random = |basis: &[FpMatrix], rows: usize, cols: usize, rng: &mut ChaCha8Rng| {
        basis.iter().fold(FpMatrix::zeros(p, rows, cols), |acc, b| acc.add(&b.scale(rng.gen_range(0..p))))
    };
    for _ in 0..400 {
        let a = random(&into, l.dim, v.dim, rng);
        let b = random(&back, v.dim, l.dim, rng);
        if a.mul(&b).inverse().is_some() {
            return Ok((a, b));
        }
    }
    Err(Error::inconsistent("no split embedding found for a summand predicted by the invariants"))
}

/// An indecomposable summand: the label and the rows of `V^0` that the
/// standard basis of the label's representation maps to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub label: RepLabel,
    pub basis: Vec<FpVec>,
}

impl Summand {
    /// The direct sum of the labels and the stacked matrix `⊕ labels -> V`.
    pub fn assemble(p: u64, n: u32, summands: &[Summand]) -> Result<(PosetRep, FpMatrix)> {
        let reps = summands.iter().map(|s| s.label.rep(p, n)).collect::<Result<Vec<_>>>()?;
        let sum = PosetRep::direct_sum(p, n, &reps);
        let rows: Vec<FpVec> = summands.iter().flat_map(|s| s.basis.iter().cloned()).collect();
        let ncols = rows.first().map_or(sum.dim, |r| r.len());
        let m = FpMatrix { p, nrows: rows.len(), ncols, rows };
        Ok((sum, m))
    }
}

/// Labels of the indecomposable representations of `P_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RepLabel {
    /// one-dimensional: `V^i = k` iff `i ≤ l`; `V' = k` iff `a = 1`; `V'' = k` iff `b = 1`
    V { l: u32, a: u8, b: u8 },
    /// two-dimensional: `V^i = k²` for `i ≤ s`, the diagonal for `s < i ≤ t`
    W { s: u32, t: u32 },
}

impl RepLabel {
    pub fn validate(&self, n: u32) -> Result<()> {
        let ok = match *self {
            RepLabel::V { l, a, b } => l < n && a <= 1 && b <= 1,
            RepLabel::W { s, t } => s < t && t < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabel(format!("{self} is out of range for n = {n}")))
        }
    }

    pub fn all(n: u32) -> Vec<RepLabel> {
        let mut out = Vec::new();
        for l in 0..n {
            for a in 0..=1 {
                for b in 0..=1 {
                    out.push(RepLabel::V { l, a, b });
                }
            }
        }
        for s in 0..n {
            for t in s + 1..n {
                out.push(RepLabel::W { s, t });
            }
        }
        out.sort();
        out
    }

    pub fn dim(&self) -> usize {
        match self {
            RepLabel::V { .. } => 1,
            RepLabel::W { .. } => 2,
        }
    }

    /// The representation itself.
    pub fn rep(&self, p: u64, n: u32) -> Result<PosetRep> {
        self.validate(n)?;
        match *self {
            RepLabel::V { l, a, b } => {
                let k = Subspace::full(p, 1);
                let zero = Subspace::zero(p, 1);
                let pick = |on: bool| if on { k.clone() } else { zero.clone() };
                let chain = (1..n).map(|i| pick(i <= l)).collect();
                PosetRep::new(p, n, 1, chain, pick(a == 1), pick(b == 1))
            }
            RepLabel::W { s, t } => {
                let full = Subspace::full(p, 2);
                let diag = Subspace::span(p, 2, vec![vec![1, 1]]);
                let chain = (1..n)
                    .map(|i| {
                        if i <= s {
                            full.clone()
                        } else if i <= t {
                            diag.clone()
                        } else {
                            Subspace::zero(p, 2)
                        }
                    })
                    .collect();
                let vp = Subspace::span(p, 2, vec![vec![1, 0]]);
                let vpp = Subspace::span(p, 2, vec![vec![0, 1]]);
                PosetRep::new(p, n, 2, chain, vp, vpp)
            }
        }
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepLabel::V { l, a, b } => write!(f, "V({l},{a},{b})"),
            RepLabel::W { s, t } => write!(f, "W({s},{t})"),
        }
    }
}

/// Solves `M m = inv` where the columns of `M` are the invariant vectors of
/// the labels. Built once per `n` after checking full column rank.
struct InvariantSolver {
    labels: Vec<RepLabel>,
    columns: Vec<Vec<i64>>,
    /// rows of `M` forming an invertible square block
    rows: Vec<usize>,
    /// inverse of that block, scaled by `denom`
    inverse: Vec<Vec<i64>>,
    denom: i64,
}

impl InvariantSolver {
    fn for_n(n: u32) -> Arc<InvariantSolver> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<InvariantSolver>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(s) = cache.lock().expect("cache lock").get(&n) {
            return s.clone();
        }
        let solver = Arc::new(InvariantSolver::build(n));
        cache.lock().expect("cache lock").insert(n, solver.clone());
        solver
    }

    fn build(n: u32) -> InvariantSolver {
        // invariants do not depend on p
        let labels = RepLabel::all(n);
        let columns: Vec<Vec<i64>> =
            labels.iter().map(|l| l.rep(2, n).expect("valid label").rank_invariants()).collect();
        let k = labels.len();
        let nrows = columns[0].len();
        let q = |x: i64| Ratio::from_integer(x);
        // greedy choice of independent rows of M
        let mut chosen: Vec<usize> = Vec::new();
        let mut echelon: Vec<Vec<Ratio<i64>>> = Vec::new();
        for r in 0..nrows {
            let mut v: Vec<Ratio<i64>> = (0..k).map(|c| q(columns[c][r])).collect();
            for e in &echelon {
                let piv = e.iter().position(|x| *x != q(0)).expect("nonzero row");
                if v[piv] != q(0) {
                    let f = v[piv] / e[piv];
                    for (x, y) in v.iter_mut().zip(e) {
                        *x -= f * y;
                    }
                }
            }
            if v.iter().any(|x| *x != q(0)) {
                chosen.push(r);
                echelon.push(v);
            }
        }
        assert_eq!(chosen.len(), k, "rank invariants do not separate the labels for n = {n}");
        // invert the chosen square block by Gauss-Jordan
        let mut aug: Vec<Vec<Ratio<i64>>> = chosen
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut row: Vec<Ratio<i64>> = (0..k).map(|c| q(columns[c][r])).collect();
                row.extend((0..k).map(|j| q((i == j) as i64)));
                row
            })
            .collect();
        for c in 0..k {
            let piv = (c..k).find(|&i| aug[i][c] != q(0)).expect("invertible block");
            aug.swap(c, piv);
            let f = aug[c][c];
            for x in aug[c].iter_mut() {
                *x /= f;
            }
            for i in 0..k {
                if i != c && aug[i][c] != q(0) {
                    let f = aug[i][c];
                    let pr = aug[c].clone();
                    for (x, y) in aug[i].iter_mut().zip(&pr) {
                        *x -= f * y;
                    }
                }
            }
        }
        let denom = aug.iter().flat_map(|r| r[k..].iter()).fold(1i64, |acc, x| lcm(acc, *x.denom()));
        let inverse = aug
            .iter()
            .map(|r| r[k..].iter().map(|x| (x * q(denom)).to_integer()).collect())
            .collect();
        InvariantSolver { labels, columns, rows: chosen, inverse, denom }
    }

    fn solve(&self, inv: &[i64]) -> Result<BTreeMap<RepLabel, usize>> {
        let rhs: Vec<i64> = self.rows.iter().map(|&r| inv[r]).collect();
        let mut out = BTreeMap::new();
        let mut m = Vec::with_capacity(self.labels.len());
        for (label, row) in self.labels.iter().zip(&self.inverse) {
            let num: i64 = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
            if num % self.denom != 0 || num < 0 {
                return Err(Error::inconsistent(format!("no nonnegative integral multiplicities for {inv:?}")));
            }
            let c = num / self.denom;
            m.push(c);
            if c > 0 {
                out.insert(*label, c as usize);
            }
        }
        for (r, &target) in inv.iter().enumerate() {
            let got: i64 = self.columns.iter().zip(&m).map(|(col, c)| col[r] * c).sum();
            if got != target {
                return Err(Error::inconsistent(format!("invariants {inv:?} are not a sum of labels")));
            }
        }
        Ok(out)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_invertible(p: u64, d: usize, rng: &mut ChaCha8Rng) -> FpMatrix {
        loop {
            let rows = (0..d).map(|_| (0..d).map(|_| rng.gen_range(0..p)).collect()).collect();
            let m = FpMatrix::from_rows(p, d, rows).unwrap();
            if m.inverse().is_some() {
                return m;
            }
        }
    }

    #[test]
    fn label_shapes() {
        let v = RepLabel::V { l: 1, a: 1, b: 0 }.rep(2, 4).unwrap();
        assert_eq!(v.level(1).dim(), 1);
        assert_eq!(v.level(2).dim(), 0);
        assert_eq!(v.vprime().dim(), 1);
        assert_eq!(v.vdprime().dim(), 0);
        let w = RepLabel::W { s: 1, t: 2 }.rep(3, 4).unwrap();
        assert_eq!(w.level(1).dim(), 2);
        assert_eq!(w.level(2), Subspace::span(3, 2, vec![vec![1, 1]]));
        assert_eq!(w.level(3).dim(), 0);
        let v000 = RepLabel::V { l: 0, a: 0, b: 0 }.rep(2, 3).unwrap();
        assert!((1..3).all(|i| v000.level(i).dim() == 0));
        assert!(RepLabel::W { s: 1, t: 1 }.rep(2, 3).is_err());
        assert!(RepLabel::V { l: 3, a: 0, b: 0 }.rep(2, 3).is_err());
    }

    #[test]
    fn rep_prime_filter_and_counts() {
        for n in 1..=6u32 {
            let all = RepLabel::all(n);
            assert_eq!(2 * all.len() as u32, n * n + 7 * n);
            let kept = all.iter().filter(|l| l.rep(2, n).unwrap().satisfies_rep_prime()).count();
            assert_eq!(2 * kept as u32, n * n + 3 * n);
        }
        let n = 4;
        assert!(!RepLabel::V { l: n - 1, a: 0, b: 1 }.rep(2, n).unwrap().satisfies_rep_prime());
        for l in 0..n {
            assert!(!RepLabel::V { l, a: 0, b: 0 }.rep(2, n).unwrap().satisfies_rep_prime());
        }
    }

    #[test]
    fn invariants_separate_labels() {
        for n in 1..=7 {
            let s = InvariantSolver::build(n);
            assert_eq!(s.rows.len(), s.labels.len());
        }
    }

    #[test]
    fn invariant_examples() {
        let v = RepLabel::V { l: 1, a: 1, b: 1 }.rep(2, 3).unwrap();
        let w = RepLabel::W { s: 0, t: 1 }.rep(2, 3).unwrap();
        let inv_v = v.rank_invariants();
        let inv_w = w.rank_invariants();
        // dim(V' ∩ V'') at level 0
        assert_eq!(inv_v[3], 1);
        assert_eq!(inv_w[3], 0);
        let sum = PosetRep::direct_sum(2, 3, &[v, w]);
        let total: Vec<i64> = inv_v.iter().zip(&inv_w).map(|(a, b)| a + b).collect();
        assert_eq!(sum.rank_invariants(), total);
    }

    #[test]
    fn multiplicity_examples() {
        for n in 1..=5 {
            for l in RepLabel::all(n) {
                let m = l.rep(5, n).unwrap().multiplicities().unwrap();
                assert_eq!(m, BTreeMap::from([(l, 1)]));
            }
        }
        let a = RepLabel::V { l: 0, a: 1, b: 0 };
        let b = RepLabel::W { s: 0, t: 1 };
        let sum = PosetRep::direct_sum(2, 3, &[a.rep(2, 3).unwrap(), b.rep(2, 3).unwrap()]);
        assert_eq!(sum.multiplicities().unwrap(), BTreeMap::from([(a, 1), (b, 1)]));
        assert!(PosetRep::zero(2, 3).multiplicities().unwrap().is_empty());
        assert!(PosetRep::zero(2, 3).decompose().unwrap().is_empty());
    }

    #[test]
    fn hom_examples() {
        let p = 3;
        let a = RepLabel::V { l: 0, a: 1, b: 0 }.rep(p, 3).unwrap();
        let b = RepLabel::V { l: 0, a: 0, b: 1 }.rep(p, 3).unwrap();
        assert_eq!(a.hom_dim(&b).unwrap(), 0);
        for l in RepLabel::all(3) {
            let r = l.rep(p, 3).unwrap();
            assert!(r.hom_dim(&r).unwrap() >= 1);
            assert!(r.is_morphism(&r, &FpMatrix::identity(p, r.dim())));
        }
        // additivity: Hom(a ⊕ b, a) = Hom(a, a) ⊕ Hom(b, a)
        let ab = PosetRep::direct_sum(p, 3, &[a.clone(), b.clone()]);
        assert_eq!(ab.hom_dim(&a).unwrap(), a.hom_dim(&a).unwrap() + b.hom_dim(&a).unwrap());
    }

    #[test]
    fn hom_space_matches_enumeration() {
        // all 2x2 and 1x2 matrices over F_2 checked against the definition
        let p = 2;
        let labels = RepLabel::all(3);
        for x in &labels {
            for y in &labels {
                let (v, w) = (x.rep(p, 3).unwrap(), y.rep(p, 3).unwrap());
                let total = v.dim() * w.dim();
                let count = (0..1u64 << total)
                    .filter(|bits| {
                        let rows = (0..v.dim())
                            .map(|a| (0..w.dim()).map(|b| (bits >> (a * w.dim() + b)) & 1).collect())
                            .collect();
                        v.is_morphism(&w, &FpMatrix::from_rows(p, w.dim(), rows).unwrap())
                    })
                    .count();
                assert_eq!(count, 1 << v.hom_dim(&w).unwrap(), "{x} -> {y}");
            }
        }
    }

    #[test]
    fn decompose_scrambled_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=5u32 {
            let labels = RepLabel::all(n);
            for p in [2u64, 3] {
                for _ in 0..40 {
                    let k = rng.gen_range(0..=4);
                    let chosen: Vec<RepLabel> = (0..k).map(|_| labels[rng.gen_range(0..labels.len())]).collect();
                    let reps: Vec<PosetRep> = chosen.iter().map(|l| l.rep(p, n).unwrap()).collect();
                    let sum = PosetRep::direct_sum(p, n, &reps);
                    let g = random_invertible(p, sum.dim(), &mut rng);
                    let v = sum.transform(&g);
                    let parts = v.decompose().unwrap();
                    let mut got: Vec<RepLabel> = parts.iter().map(|s| s.label).collect();
                    let mut want = chosen.clone();
                    got.sort();
                    want.sort();
                    assert_eq!(got, want);
                    for s in &parts {
                        let sub = v.restrict(&s.basis).unwrap();
                        assert_eq!(sub.multiplicities().unwrap(), BTreeMap::from([(s.label, 1)]));
                    }
                    let h = sum.find_iso(&v).unwrap().unwrap();
                    assert!(sum.is_morphism(&v, &h));
                    assert!(v.is_morphism(&sum, &h.inverse().unwrap()));
                }
            }
        }
    }
}
