//! The functor `F` from pairs to representations of `P_n`, and the way back:
//! picket decompositions, lifting of representation morphisms, and explicit
//! isomorphisms of pairs.
//!
//! For a pair `(B; A)` the total space is `A⁺/A⁻`, and a submodule `C` of `B`
//! gives the subspace `C~ = ((C ∩ A⁺) + A⁻)/A⁻`. Then
//! `F(B; A) = (B~; (p^ℓ B)~, (soc B)~, A~)`.

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, FpVec, Subspace};
use crate::homs::{PairIso, PairMorphism};
use crate::linalg::{HowellForm, Row, SmithSystem};
use crate::module::{LambdaModule, Submodule};
use crate::pairs::{direct_sum, DecompReport, Label, Pair};
use crate::posetrep::{PosetRep, RepLabel};

/// The `k`-space `A⁺/A⁻` with a fixed basis of representatives in `A⁺`.
#[derive(Clone, Debug)]
pub struct TotalSpace {
    b: LambdaModule,
    a_plus: Submodule,
    a_minus: Submodule,
    reps: Vec<Vec<u64>>,
    solver: SmithSystem,
}

impl TotalSpace {
    pub fn new(x: &Pair) -> Result<Self> {
        x.require_s2()?;
        Self::from_bounds(x.b(), x.a_plus(), x.a_minus())
    }

    fn from_bounds(b: &LambdaModule, a_plus: Submodule, a_minus: Submodule) -> Result<Self> {
        let spec = b.spec();
        let mut span = a_minus.form().clone();
        let mut reps = Vec::new();
        for g in a_plus.gens() {
            let row = b.embed(&g);
            if !span.contains(spec, &row) {
                span = HowellForm::new(spec, b.rank(), span.rows().iter().cloned().chain([row]));
                reps.push(g);
            }
        }
        if reps.len() as u32 != a_plus.length() - a_minus.length() {
            return Err(Error::inconsistent("A⁺/A⁻ is not a k-space"));
        }
        let rows: Vec<Row> =
            reps.iter().map(|r| b.embed(r)).chain(a_minus.form().rows().iter().cloned()).collect();
        let solver = SmithSystem::new(spec, &rows, b.rank())?;
        Ok(TotalSpace { b: b.clone(), a_plus, a_minus, reps, solver })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn p(&self) -> u64 {
        self.b.spec().p()
    }

    /// Representatives in `A⁺` of the basis vectors.
    pub fn reps(&self) -> &[Vec<u64>] {
        &self.reps
    }

    /// Coordinates of the class of `x ∈ A⁺`.
    pub fn coords(&self, x: &[u64]) -> Result<FpVec> {
        let spec = self.b.spec();
        let sol = self
            .solver
            .solve(&self.b.embed(x))?
            .ok_or_else(|| Error::Precondition("element is not in A⁺".into()))?;
        Ok(sol.particular[..self.dim()].iter().map(|&c| spec.reduce(c, 1)).collect())
    }

    /// `C~ = ((C ∩ A⁺) + A⁻)/A⁻`.
    pub fn tilde(&self, c: &Submodule) -> Result<Subspace> {
        let meet = c.intersect(&self.a_plus)?;
        let vecs = meet.gens().iter().map(|g| self.coords(g)).collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(self.p(), self.dim(), vecs))
    }

    /// The submodule `A⁻ + Σ u_j r_j` for `u` in the subspace `U`.
    pub fn lift_subspace(&self, u: &Subspace) -> Submodule {
        let spec = self.b.spec();
        let mut gens = self.a_minus.gens();
        for v in u.basis() {
            let mut acc = vec![0u64; self.b.rank()];
            for (&c, r) in v.iter().zip(&self.reps) {
                crate::linalg::axpy(spec, &mut acc, c, r);
            }
            gens.push(self.b.reduce(&acc));
        }
        Submodule::from_reduced(&self.b, gens.iter().map(|g| g.as_slice()))
    }
}

/// `F(x)` together with the total space used for its coordinates.
pub fn functor_image(x: &Pair) -> Result<(TotalSpace, PosetRep)> {
    let t = TotalSpace::new(x)?;
    let b = x.b();
    let n = b.spec().n();
    let chain = (1..n).map(|l| t.tilde(&Submodule::radical_power(b, l))).collect::<Result<Vec<_>>>()?;
    let vp = t.tilde(&Submodule::socle(b))?;
    let vpp = t.tilde(x.a())?;
    let rep = PosetRep::new(t.p(), n, t.dim(), chain, vp, vpp)?;
    Ok((t, rep))
}

pub fn apply_f(x: &Pair) -> Result<PosetRep> {
    Ok(functor_image(x)?.1)
}

/// `F(f)` as a matrix acting on row coordinates.
pub fn apply_f_morphism(f: &PairMorphism) -> Result<FpMatrix> {
    let tx = TotalSpace::new(f.source())?;
    let ty = TotalSpace::new(f.target())?;
    morphism_matrix(f, &tx, &ty)
}

fn morphism_matrix(f: &PairMorphism, tx: &TotalSpace, ty: &TotalSpace) -> Result<FpMatrix> {
    let rows = tx.reps().iter().map(|r| ty.coords(&f.apply(r))).collect::<Result<Vec<_>>>()?;
    FpMatrix::from_rows(tx.p(), ty.dim(), rows)
}

/// The representation label of `F` applied to a pair label.
pub fn pair_to_rep_label(label: Label) -> RepLabel {
    match label {
        Label::P { m: 0, l } => RepLabel::V { l: l - 1, a: 1, b: 0 },
        Label::P { m: 1, l } => RepLabel::V { l: l - 1, a: 1, b: 1 },
        Label::P { l, .. } => RepLabel::V { l: l - 2, a: 0, b: 1 },
        Label::Q { s, t } => RepLabel::W { s: s - 1, t: t - 2 },
    }
}

/// Inverse of [`pair_to_rep_label`] on the labels satisfying the `rep'`
/// conditions.
pub fn label_to_pair(rl: RepLabel, n: u32) -> Result<Label> {
    rl.validate(n)?;
    let label = match rl {
        RepLabel::V { l, a: 1, b: 0 } => Label::P { m: 0, l: l + 1 },
        RepLabel::V { l, a: 1, b: 1 } => Label::P { m: 1, l: l + 1 },
        RepLabel::V { l, a: 0, b: 1 } if l + 2 <= n => Label::P { m: 2, l: l + 2 },
        RepLabel::W { s, t } if t + 2 <= n => Label::Q { s: s + 1, t: t + 2 },
        _ => return Err(Error::InvalidLabel(format!("{rl} does not satisfy the rep' conditions"))),
    };
    debug_assert_eq!(pair_to_rep_label(label), rl);
    Ok(label)
}

/// The multiset of indecomposable summands of `x`, read off `F(x)`.
pub fn classify_s2(x: &Pair) -> Result<DecompReport> {
    let rep = apply_f(x)?;
    let n = x.spec().n();
    let labels = rep
        .multiplicities()?
        .into_iter()
        .map(|(rl, c)| Ok(std::iter::repeat_n(label_to_pair(rl, n)?, c)))
        .collect::<Result<Vec<_>>>()?;
    let report = DecompReport::from_labels(labels.into_iter().flatten());
    report.check_consistent(x)?;
    Ok(report)
}

/// [`classify_s2`] plus an explicit isomorphism onto the direct sum of the
/// labelled pairs.
pub fn classify_with_witness(x: &Pair) -> Result<DecompReport> {
    let mut report = classify_s2(x)?;
    report.witness = Some(iso_witness(x, &report)?);
    Ok(report)
}

/// The pair `(B; A)` with `A⁻ = p A⁺ ⊆ A ⊆ A⁺` and `A/A⁻ = U`, where `U` is
/// given in the coordinates of the total space of `(B; A⁺)`.
pub fn pullback_pair(b: &LambdaModule, a_plus: &Submodule, u: &Subspace) -> Result<Pair> {
    if a_plus.module() != b {
        return Err(Error::ModuleMismatch);
    }
    if !Submodule::socle(b).is_subset(a_plus) || !a_plus.scalar_image(2).is_zero() {
        return Err(Error::Precondition("need soc B ⊆ A⁺ and p^2 A⁺ = 0".into()));
    }
    let t = TotalSpace::from_bounds(b, a_plus.clone(), a_plus.scalar_image(1))?;
    if u.ambient() != t.dim() || u.p() != t.p() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: u.ambient() });
    }
    Pair::new(t.lift_subspace(u), 2)
}

/// A decomposition `B = ⊕ b_k Λ` with `A = ⊕ p^{λ_k - m_k} b_k Λ`, i.e. a
/// direct sum of pickets `P_{m_k}^{λ_k}`.
#[derive(Clone, Debug)]
pub struct PicketFrame {
    b: LambdaModule,
    pub gens: Vec<Vec<u64>>,
    pub lengths: Vec<u32>,
    pub ms: Vec<u32>,
    solver: SmithSystem,
}

impl PicketFrame {
    fn new(b: &LambdaModule, gens: Vec<Vec<u64>>, lengths: Vec<u32>, ms: Vec<u32>) -> Result<Self> {
        let rows: Vec<Row> = gens.iter().map(|g| b.embed(g)).collect();
        let solver = SmithSystem::new(b.spec(), &rows, b.rank())?;
        Ok(PicketFrame { b: b.clone(), gens, lengths, ms, solver })
    }

    pub fn labels(&self) -> Vec<Label> {
        self.lengths.iter().zip(&self.ms).map(|(&l, &m)| Label::P { m, l }).collect()
    }

    /// Coordinates `c` with `x = Σ c_k b_k`, each `c_k` reduced mod `p^{λ_k}`.
    pub fn coords(&self, x: &[u64]) -> Result<Vec<u64>> {
        let spec = self.b.spec();
        let sol = self
            .solver
            .solve(&self.b.embed(x))?
            .ok_or_else(|| Error::inconsistent("frame does not span B"))?;
        Ok(sol.particular.iter().zip(&self.lengths).map(|(&c, &l)| spec.reduce(c, l)).collect())
    }

    /// `p^{λ_k - m_k} b_k`, the generator of `A ∩ b_k Λ`.
    pub fn a_gen(&self, k: usize) -> Vec<u64> {
        self.b.scale_p_pow(self.lengths[k] - self.ms[k], &self.gens[k])
    }

    /// Checks that the frame is a basis of cyclic summands adapted to `A`.
    fn verify(&self, a: &Submodule) -> Result<()> {
        let b = &self.b;
        let orders_ok = self.gens.iter().zip(&self.lengths).all(|(g, &l)| b.order_exponent(g) == l);
        let full = Submodule::from_reduced(b, self.gens.iter().map(|g| g.as_slice()));
        if !orders_ok || self.lengths.iter().sum::<u32>() != b.length() || full != Submodule::full(b) {
            return Err(Error::inconsistent("picket frame is not a basis"));
        }
        let gens: Vec<Vec<u64>> = (0..self.gens.len()).map(|k| self.a_gen(k)).collect();
        if &Submodule::from_reduced(b, gens.iter().map(|g| g.as_slice())) != a {
            return Err(Error::inconsistent("picket frame is not adapted to A"));
        }
        Ok(())
    }

    /// The isomorphism from `x` onto the direct sum of its pickets, in sorted
    /// label order.
    pub fn iso(&self, x: &Pair) -> Result<PairIso> {
        let spec = *x.spec();
        let mut order: Vec<usize> = (0..self.gens.len()).collect();
        let labels = self.labels();
        order.sort_by_key(|&k| labels[k]);
        let pairs = order.iter().map(|&k| labels[k].pair(spec)).collect::<Result<Vec<_>>>()?;
        let sum = direct_sum(spec, &pairs)?;
        let mut slot = vec![0usize; order.len()];
        for (s, &k) in order.iter().enumerate() {
            slot[k] = sum.placement[s][0];
        }
        let d = sum.pair.b();
        let mut matrix = Vec::with_capacity(x.b().rank());
        for j in 0..x.b().rank() {
            let c = self.coords(x.b().unit_vector(j).coords())?;
            let mut row = vec![0u64; d.rank()];
            for (k, &ck) in c.iter().enumerate() {
                row[slot[k]] = ck;
            }
            matrix.push(row);
        }
        let f = PairMorphism::new(x, &sum.pair, matrix)?;
        PairIso::from_forward(f)
    }
}

/// Coordinates with respect to a list of frame elements (which must be part
/// of a basis of cyclic summands).
fn frame_coords(b: &LambdaModule, frame: &[Vec<u64>], orders: &[u32], x: &[u64]) -> Result<Vec<u64>> {
    let spec = b.spec();
    let rows: Vec<Row> = frame.iter().map(|g| b.embed(g)).collect();
    let sol = SmithSystem::new(spec, &rows, b.rank())?
        .solve(&b.embed(x))?
        .ok_or_else(|| Error::inconsistent("element outside the span of the frame"))?;
    Ok(sol.particular.iter().zip(orders).map(|(&c, &l)| spec.reduce(c, l)).collect())
}

/// Splits a pair with `pA = 0` into pickets `P_0^ℓ` and `P_1^ℓ`.
pub fn decompose_s1(x: &Pair) -> Result<(DecompReport, PicketFrame)> {
    if !x.a().scalar_image(1).is_zero() {
        return Err(Error::Precondition("pA must vanish".into()));
    }
    let b = x.b();
    let spec = *b.spec();
    let n = spec.n();
    // the remaining part: frame elements and their orders
    let mut active: Vec<Vec<u64>> = (0..b.rank()).map(|i| b.unit_vector(i).into_coords()).collect();
    let mut orders: Vec<u32> = b.partition().to_vec();
    let mut a_cur = x.a().clone();
    let (mut gens, mut lengths, mut ms) = (Vec::new(), Vec::new(), Vec::new());
    while !active.is_empty() {
        let l = *orders.iter().max().expect("nonempty");
        let tops: Vec<usize> = (0..active.len()).filter(|&k| orders[k] == l).collect();
        let top_gens: Vec<Vec<u64>> = tops.iter().map(|&k| b.scale_p_pow(l - 1, &active[k])).collect();
        let top = Submodule::from_reduced(b, top_gens.iter().map(|g| g.as_slice()));
        let meet = a_cur.intersect(&top)?;
        if let Some(a) = meet.gens().first() {
            // a = p^{l-1} b' with b' = Σ u_k f_k over the top elements
            let c = frame_coords(b, &active, &orders, a)?;
            let mut b_new = vec![0u64; b.rank()];
            let mut pick = None;
            for &k in &tops {
                let u = spec.div_p_pow(c[k], l - 1);
                if pick.is_none() && spec.is_unit(u) {
                    pick = Some(k);
                }
                b_new = b.add(&b_new, &b.scale(u, &active[k]));
            }
            let k = pick.ok_or_else(|| Error::inconsistent("socle element without a unit coefficient"))?;
            active.remove(k);
            orders.remove(k);
            gens.push(b_new);
            lengths.push(l);
            ms.push(1);
            let rest = Submodule::from_reduced(b, active.iter().map(|g| g.as_slice()));
            a_cur = a_cur.intersect(&rest)?;
        } else {
            // split off (f_k Λ; 0) along π with π(f_k) = f_k and π(A) = 0
            let k = tops[0];
            let others: Vec<usize> = (0..active.len()).filter(|&j| j != k).collect();
            let a_gens = a_cur.gens();
            let coords = a_gens.iter().map(|g| frame_coords(b, &active, &orders, g)).collect::<Result<Vec<_>>>()?;
            let matrix: Vec<Row> = others
                .iter()
                .map(|&j| coords.iter().map(|c| spec.mul_p_pow(c[j], n - orders[j])).collect())
                .collect();
            let rhs: Row = coords.iter().map(|c| spec.neg(spec.mul_p_pow(c[k], n - l))).collect();
            let z = SmithSystem::new(&spec, &matrix, a_gens.len())?
                .solve(&rhs)?
                .ok_or_else(|| Error::inconsistent("no projection killing A"))?
                .particular;
            let f = active[k].clone();
            for (idx, &j) in others.iter().enumerate() {
                let y = spec.reduce(spec.mul_p_pow(z[idx], l - orders[j]), l);
                active[j] = b.sub(&active[j], &b.scale(y, &f));
            }
            active.remove(k);
            orders.remove(k);
            gens.push(f);
            lengths.push(l);
            ms.push(0);
        }
    }
    if !a_cur.is_zero() {
        return Err(Error::inconsistent("part of A was not accounted for"));
    }
    let frame = PicketFrame::new(b, gens, lengths, ms)?;
    frame.verify(x.a())?;
    let report = DecompReport::from_labels(frame.labels());
    Ok((report, frame))
}

/// Splits a pair with `soc B ⊆ A` and `p^2 A = 0` into pickets `P_1^ℓ`,
/// `P_2^ℓ`, by decomposing `(B; pA)`.
pub fn decompose_socle_contained(x: &Pair) -> Result<(DecompReport, PicketFrame)> {
    x.require_s2()?;
    if !x.socle_contained() {
        return Err(Error::Precondition("soc B must be contained in A".into()));
    }
    let rad = Pair::new(x.a_minus(), 1)?;
    let (_, inner) = decompose_s1(&rad)?;
    let ms = inner.ms.iter().map(|m| m + 1).collect();
    let frame = PicketFrame::new(x.b(), inner.gens, inner.lengths, ms)?;
    frame.verify(x.a())?;
    let report = DecompReport::from_labels(frame.labels());
    Ok((report, frame))
}

/// A pair morphism `f: x -> y` with `F(f) = h`.
pub fn lift_morphism(x: &Pair, y: &Pair, h: &FpMatrix) -> Result<PairMorphism> {
    let (tx, rx) = functor_image(x)?;
    let (ty, ry) = functor_image(y)?;
    if !rx.is_morphism(&ry, h) {
        return Err(Error::NotAMorphism("h is not a morphism of representations".into()));
    }
    let spec = *x.spec();
    let (_, fx) = decompose_socle_contained(&x.plus_pair())?;
    let (_, fy) = decompose_socle_contained(&y.plus_pair())?;
    // classes of the picket socle generators form bases of the total spaces
    let frame_basis = |t: &TotalSpace, f: &PicketFrame| -> Result<FpMatrix> {
        let rows = (0..f.gens.len()).map(|k| t.coords(&f.a_gen(k))).collect::<Result<Vec<_>>>()?;
        FpMatrix::from_rows(t.p(), t.dim(), rows)
    };
    let sx = frame_basis(&tx, &fx)?;
    let sy_inv = frame_basis(&ty, &fy)?
        .inverse()
        .ok_or_else(|| Error::inconsistent("picket generators do not form a basis of the total space"))?;
    let ht = sx.mul(h).mul(&sy_inv);
    let d = y.b();
    let mut images = Vec::with_capacity(fx.gens.len());
    for k in 0..fx.gens.len() {
        let src = fx.lengths[k] - fx.ms[k];
        let mut img = vec![0u64; d.rank()];
        for (l, &c) in ht.rows[k].iter().enumerate() {
            if c == 0 {
                continue;
            }
            let dst = fy.lengths[l] - fy.ms[l];
            if dst < src {
                return Err(Error::NotAMorphism("h does not lift along the pickets".into()));
            }
            img = d.add(&img, &d.scale(spec.mul_p_pow(c, dst - src), &fy.gens[l]));
        }
        if !d.scale_p_pow(fx.lengths[k], &img).iter().all(|&v| v == 0) {
            return Err(Error::NotAMorphism("lifted image has too large order".into()));
        }
        images.push(img);
    }
    let mut matrix = Vec::with_capacity(x.b().rank());
    for j in 0..x.b().rank() {
        let c = fx.coords(x.b().unit_vector(j).coords())?;
        let mut row = vec![0u64; d.rank()];
        for (ck, img) in c.iter().zip(&images) {
            row = d.add(&row, &d.scale(*ck, img));
        }
        matrix.push(row);
    }
    let f = PairMorphism::new(x, y, matrix).map_err(|e| Error::inconsistent(format!("lift fails: {e}")))?;
    if morphism_matrix(&f, &tx, &ty)? != *h {
        return Err(Error::inconsistent("F of the lift differs from h"));
    }
    Ok(f)
}

/// An isomorphism from `x` onto the direct sum of the labelled pairs of
/// `report`, built by lifting an isomorphism of representations.
pub fn iso_witness(x: &Pair, report: &DecompReport) -> Result<PairIso> {
    let target = report.target(*x.spec())?;
    let y = &target.pair;
    let rx = apply_f(x)?;
    let ry = apply_f(y)?;
    let h = rx.find_iso(&ry)?.ok_or_else(|| Error::inconsistent("F(x) is not isomorphic to F of the report"))?;
    let f = lift_morphism(x, y, &h)?;
    let iso = PairIso::from_forward(f)?;
    if !iso.verify() {
        return Err(Error::inconsistent("witness failed verification"));
    }
    Ok(iso)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::homs::HomSpace;
    use crate::pairs::{make_picket, make_q};
    use crate::ring::RingSpec;

    fn z(p: u64, n: u32) -> RingSpec {
        RingSpec::zmod(p, n).unwrap()
    }

    fn report_of(labels: &[Label]) -> BTreeMap<Label, usize> {
        DecompReport::from_labels(labels.iter().copied()).labels
    }

    #[test]
    fn tilde_examples() {
        let s = z(2, 3);
        let q = make_q(s, 1, 3).unwrap();
        let t = TotalSpace::new(&q).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.tilde(&Submodule::full(q.b())).unwrap().dim(), 2);
        assert_eq!(t.tilde(&q.a_minus()).unwrap().dim(), 0);
        let p11 = make_picket(s, 1, 1).unwrap();
        let t = TotalSpace::new(&p11).unwrap();
        assert_eq!(t.tilde(p11.a()).unwrap(), Subspace::full(2, 1));
        // representatives of the same class get the same coordinates
        let t = TotalSpace::new(&q).unwrap();
        for x in q.a_plus().elements() {
            for y in q.a_minus().elements() {
                assert_eq!(t.coords(&x).unwrap(), t.coords(&q.b().add(&x, &y)).unwrap());
            }
        }
    }

    #[test]
    fn correspondence_table() {
        for n in 1..=5 {
            let s = z(3, n);
            for label in Label::all(n) {
                let rep = apply_f(&label.pair(s).unwrap()).unwrap();
                let rl = pair_to_rep_label(label);
                assert!(rep.satisfies_rep_prime());
                assert_eq!(rep.multiplicities().unwrap(), BTreeMap::from([(rl, 1)]));
                assert_eq!(label_to_pair(rl, n).unwrap(), label);
            }
        }
        assert_eq!(label_to_pair(RepLabel::V { l: 0, a: 1, b: 1 }, 3).unwrap(), Label::P { m: 1, l: 1 });
        assert_eq!(label_to_pair(RepLabel::W { s: 0, t: 1 }, 3).unwrap(), Label::Q { s: 1, t: 3 });
        assert!(label_to_pair(RepLabel::V { l: 2, a: 0, b: 1 }, 3).is_err());
        assert!(label_to_pair(RepLabel::V { l: 1, a: 0, b: 0 }, 3).is_err());
    }

    #[test]
    fn classify_examples() {
        let s = z(2, 3);
        for label in Label::all(3) {
            assert_eq!(classify_s2(&label.pair(s).unwrap()).unwrap().labels, report_of(&[label]));
        }
        let q = make_q(s, 1, 3).unwrap();
        let p = make_picket(s, 1, 2).unwrap();
        let sum = direct_sum(s, &[q, p]).unwrap().pair;
        let r = classify_with_witness(&sum).unwrap();
        assert_eq!(r.labels, report_of(&[Label::Q { s: 1, t: 3 }, Label::P { m: 1, l: 2 }]));
        assert!(r.witness.unwrap().verify());
    }

    #[test]
    fn s1_examples() {
        let s = z(2, 3);
        let b = LambdaModule::new(s, vec![3, 2, 1]).unwrap();
        let zero = Pair::new(Submodule::zero(&b), 1).unwrap();
        let (r, frame) = decompose_s1(&zero).unwrap();
        let p0 = |l| Label::P { m: 0, l };
        let p1 = |l| Label::P { m: 1, l };
        assert_eq!(r.labels, report_of(&[p0(3), p0(2), p0(1)]));
        assert!(frame.iso(&zero).unwrap().verify());
        let soc = Pair::new(Submodule::socle(&b), 1).unwrap();
        let (r, frame) = decompose_s1(&soc).unwrap();
        assert_eq!(r.labels, report_of(&[p1(3), p1(2), p1(1)]));
        assert!(frame.iso(&soc).unwrap().verify());
        // a diagonal socle line forces a change of frame
        let diag = Pair::from_gens(s, vec![3, 2, 1], &[vec![4, 2, 0], vec![0, 2, 1]], 1).unwrap();
        let (r, frame) = decompose_s1(&diag).unwrap();
        assert_eq!(r.labels, classify_s2(&diag).unwrap().labels);
        assert!(frame.iso(&diag).unwrap().verify());
        assert!(decompose_s1(&make_picket(s, 2, 3).unwrap()).is_err());
    }

    #[test]
    fn socle_contained_examples() {
        let s = z(2, 3);
        let b = LambdaModule::new(s, vec![3, 1]).unwrap();
        let soc = Pair::new(Submodule::socle(&b), 2).unwrap();
        let (r, _) = decompose_socle_contained(&soc).unwrap();
        assert_eq!(r.labels, report_of(&[Label::P { m: 1, l: 3 }, Label::P { m: 1, l: 1 }]));
        let p = make_picket(s, 2, 3).unwrap();
        assert_eq!(decompose_socle_contained(&p).unwrap().0.labels, report_of(&[Label::P { m: 2, l: 3 }]));
        let s2 = z(3, 2);
        let b = LambdaModule::new(s2, vec![2, 1]).unwrap();
        let x = Pair::new(Submodule::full(&b), 2).unwrap();
        let (r, frame) = decompose_socle_contained(&x).unwrap();
        assert_eq!(r.labels, report_of(&[Label::P { m: 2, l: 2 }, Label::P { m: 1, l: 1 }]));
        assert!(frame.iso(&x).unwrap().verify());
        assert!(decompose_socle_contained(&make_picket(s, 0, 2).unwrap()).is_err());
    }

    #[test]
    fn socle_contained_agrees_with_classify() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for spec in [z(2, 3), z(3, 3), RingSpec::truncpoly(2, 4).unwrap()] {
            let n = spec.n();
            for _ in 0..40 {
                let k = rng.gen_range(1..=3);
                let mut part: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=n)).collect();
                part.sort_by(|a, b| b.cmp(a));
                let b = LambdaModule::new(spec, part.clone()).unwrap();
                let gens: Vec<Vec<u64>> = (0..2)
                    .map(|_| part.iter().map(|&l| spec.reduce(spec.mul_p_pow(rng.gen_range(0..spec.order(l)), l.saturating_sub(2)), l)).collect())
                    .collect();
                let a = Submodule::generated(&b, &gens).unwrap().sum(&Submodule::socle(&b)).unwrap();
                let x = Pair::new(a, 2).unwrap();
                let rep = apply_f(&x).unwrap();
                assert!(rep.satisfies_rep_prime());
                let (r, frame) = decompose_socle_contained(&x).unwrap();
                assert_eq!(r.labels, classify_s2(&x).unwrap().labels);
                assert!(frame.iso(&x).unwrap().verify());
            }
        }
    }

    #[test]
    fn pullback_round_trip() {
        let s = z(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = LambdaModule::new(s, vec![3, 2, 1]).unwrap();
        let elems: Vec<Vec<u64>> = b.elements().collect();
        for _ in 0..50 {
            let gens: Vec<Vec<u64>> = (0..2).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
            let a = Submodule::generated(&b, &gens).unwrap().scalar_image(rng.gen_range(0..=1));
            let Ok(x) = Pair::new(a, 2) else { continue };
            let t = TotalSpace::new(&x).unwrap();
            let u = t.tilde(x.a()).unwrap();
            assert_eq!(pullback_pair(&b, &x.a_plus(), &u).unwrap(), x);
            let zero = pullback_pair(&b, &x.a_plus(), &Subspace::zero(2, t.dim())).unwrap();
            assert_eq!(zero.a(), &x.a_minus());
            let full = pullback_pair(&b, &x.a_plus(), &Subspace::full(2, t.dim())).unwrap();
            assert_eq!(full.a(), &x.a_plus());
        }
    }

    #[test]
    fn lifting_identities_and_zero() {
        let s = z(2, 3);
        for label in Label::all(3) {
            let x = label.pair(s).unwrap();
            let d = apply_f(&x).unwrap().dim();
            let f = lift_morphism(&x, &x, &FpMatrix::identity(2, d)).unwrap();
            assert!(f.add(&PairMorphism::identity(&x).scale(s.neg(1))).unwrap().in_ideal_n());
            let g = lift_morphism(&x, &x, &FpMatrix::zeros(2, d, d)).unwrap();
            assert!(g.in_ideal_n());
        }
    }

    #[test]
    fn random_lifts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, n) in [(2u64, 3u32), (3, 3), (2, 4)] {
            let s = z(p, n);
            let labels = Label::all(n);
            for _ in 0..30 {
                let mut pick = || {
                    let k = rng.gen_range(1..=3);
                    let ps: Vec<Pair> =
                        (0..k).map(|_| labels[rng.gen_range(0..labels.len())].pair(s).unwrap()).collect();
                    direct_sum(s, &ps).unwrap().pair
                };
                let (x, y) = (pick(), pick());
                let (rx, ry) = (apply_f(&x).unwrap(), apply_f(&y).unwrap());
                let homs = rx.hom_space(&ry).unwrap();
                let mut h = FpMatrix::zeros(p, rx.dim(), ry.dim());
                for b in &homs {
                    h = h.add(&b.scale(rng.gen_range(0..p)));
                }
                let f = lift_morphism(&x, &y, &h).unwrap();
                assert_eq!(apply_f_morphism(&f).unwrap(), h);
                assert!(HomSpace::new(&x, &y).unwrap().contains(&f));
            }
        }
    }

    #[test]
    fn functoriality() {
        let s = z(3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let labels = Label::all(3);
        for _ in 0..30 {
            let mut pick = || {
                let ps: Vec<Pair> = (0..2).map(|_| labels[rng.gen_range(0..labels.len())].pair(s).unwrap()).collect();
                direct_sum(s, &ps).unwrap().pair
            };
            let (x, y, w) = (pick(), pick(), pick());
            let f = HomSpace::new(&x, &y).unwrap().random(&mut rng);
            let g = HomSpace::new(&y, &w).unwrap().random(&mut rng);
            let fg = apply_f_morphism(&f.then(&g).unwrap()).unwrap();
            assert_eq!(fg, apply_f_morphism(&f).unwrap().mul(&apply_f_morphism(&g).unwrap()));
            let id = apply_f_morphism(&PairMorphism::identity(&x)).unwrap();
            assert_eq!(id, FpMatrix::identity(3, id.nrows));
        }
        // multiplication by p on P(2,ℓ) induces the zero map
        let p = make_picket(s, 2, 3).unwrap();
        assert!(apply_f_morphism(&PairMorphism::mul_p_pow(&p, 1)).unwrap().is_zero());
    }
}
