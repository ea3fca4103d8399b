//! Morphisms of pairs, Hom groups, and the ideal `N` of morphisms with
//! `f(A⁺) ⊆ C⁻`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, HowellForm, Row, SmithSystem};
use crate::module::{LambdaModule, Submodule};
use crate::pairs::Pair;

/// A morphism `f: (B; A) -> (D; C)`. Row `j` of `matrix` holds `f(e_j)` in
/// the coordinates of `D`, so elements map as `x -> x · matrix`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairMorphism {
    source: Pair,
    target: Pair,
    matrix: Vec<Vec<u64>>,
}

/// Checks that `matrix` defines a `Λ`-linear map `B -> D`.
fn check_module_map(b: &LambdaModule, d: &LambdaModule, matrix: &[Vec<u64>]) -> Result<()> {
    if matrix.len() != b.rank() {
        return Err(Error::DimensionMismatch { expected: b.rank(), got: matrix.len() });
    }
    for (j, row) in matrix.iter().enumerate() {
        d.check_coords(row)?;
        let lj = b.partition()[j];
        if !d.scale_p_pow(lj, row).iter().all(|&c| c == 0) {
            return Err(Error::NotAMorphism(format!("image of generator {j} has order exceeding p^{lj}")));
        }
    }
    Ok(())
}

fn apply_matrix(d: &LambdaModule, matrix: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    let spec = d.spec();
    let mut acc = vec![0u64; d.rank()];
    for (&c, row) in x.iter().zip(matrix) {
        linalg::axpy(spec, &mut acc, c, row);
    }
    d.reduce(&acc)
}

impl PairMorphism {
    pub fn new(source: &Pair, target: &Pair, matrix: Vec<Vec<u64>>) -> Result<Self> {
        if source.spec() != target.spec() {
            return Err(Error::RingMismatch(*source.spec(), *target.spec()));
        }
        check_module_map(source.b(), target.b(), &matrix)?;
        let f = PairMorphism { source: source.clone(), target: target.clone(), matrix };
        if !f.image(source.a()).is_subset(target.a()) {
            return Err(Error::NotAMorphism("f(A) is not contained in C".into()));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: &Pair, target: &Pair, matrix: Vec<Vec<u64>>) -> Self {
        debug_assert!(check_module_map(source.b(), target.b(), &matrix).is_ok());
        PairMorphism { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn zero(source: &Pair, target: &Pair) -> Self {
        let matrix = vec![vec![0; target.b().rank()]; source.b().rank()];
        PairMorphism { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn identity(x: &Pair) -> Self {
        let matrix = (0..x.b().rank()).map(|i| x.b().unit_vector(i).into_coords()).collect();
        PairMorphism { source: x.clone(), target: x.clone(), matrix }
    }

    /// Multiplication by `p^e` on `x`.
    pub fn mul_p_pow(x: &Pair, e: u32) -> Self {
        let id = Self::identity(x);
        id.scale(x.spec().p_pow(e))
    }

    pub fn source(&self) -> &Pair {
        &self.source
    }

    pub fn target(&self) -> &Pair {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        apply_matrix(self.target.b(), &self.matrix, x)
    }

    /// `f(U)` for a submodule `U` of the source.
    pub fn image(&self, u: &Submodule) -> Submodule {
        let imgs: Vec<Vec<u64>> = u.gens().iter().map(|g| self.apply(g)).collect();
        Submodule::from_reduced(self.target.b(), imgs.iter().map(|v| v.as_slice()))
    }

    /// `g ∘ self`: first `self`, then `g`.
    pub fn then(&self, g: &PairMorphism) -> Result<PairMorphism> {
        if self.target != g.source {
            return Err(Error::Precondition("morphisms are not composable".into()));
        }
        let matrix = self.matrix.iter().map(|row| g.apply(row)).collect();
        Ok(PairMorphism { source: self.source.clone(), target: g.target.clone(), matrix })
    }

    pub fn add(&self, other: &PairMorphism) -> Result<PairMorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Precondition("morphisms have different domains".into()));
        }
        let d = self.target.b();
        let matrix = self.matrix.iter().zip(&other.matrix).map(|(a, b)| d.add(a, b)).collect();
        Ok(PairMorphism { source: self.source.clone(), target: self.target.clone(), matrix })
    }

    pub fn scale(&self, c: u64) -> PairMorphism {
        let d = self.target.b();
        let matrix = self.matrix.iter().map(|row| d.scale(c, row)).collect();
        PairMorphism { source: self.source.clone(), target: self.target.clone(), matrix }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|&c| c == 0))
    }

    /// Membership in the ideal `N`: `f(A⁺) ⊆ C⁻`.
    pub fn in_ideal_n(&self) -> bool {
        self.image(&self.source.a_plus()).is_subset(&self.target.a_minus())
    }

    /// Two-sided inverse as a module map, if `f` is bijective on `B -> D`.
    pub fn module_inverse(&self) -> Option<Vec<Vec<u64>>> {
        let (b, d) = (self.source.b(), self.target.b());
        if b.length() != d.length() {
            return None;
        }
        let spec = b.spec();
        let rows: Vec<Row> = self.matrix.iter().map(|r| d.embed(r)).collect();
        let sys = SmithSystem::new(spec, &rows, d.rank()).ok()?;
        let mut inv = Vec::with_capacity(d.rank());
        for i in 0..d.rank() {
            let sol = sys.solve(&d.embed(d.unit_vector(i).coords())).ok()??;
            inv.push(b.reduce(&sol.particular));
        }
        check_module_map(d, b, &inv).ok()?;
        let back_forth = inv.iter().map(|r| self.apply(r));
        let ok = back_forth.enumerate().all(|(i, v)| v == d.unit_vector(i).into_coords())
            && self.matrix.iter().enumerate().all(|(j, r)| apply_matrix(b, &inv, r) == b.unit_vector(j).into_coords());
        ok.then_some(inv)
    }

    /// The inverse pair morphism, if `f` is an isomorphism of pairs.
    pub fn inverse(&self) -> Option<PairMorphism> {
        let inv = self.module_inverse()?;
        PairMorphism::new(&self.target, &self.source, inv).ok()
    }
}

/// An isomorphism of pairs with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairIso {
    pub forward: PairMorphism,
    pub backward: PairMorphism,
}

impl PairIso {
    pub fn from_forward(f: PairMorphism) -> Result<Self> {
        let backward = f.inverse().ok_or_else(|| Error::inconsistent("map is not an isomorphism of pairs"))?;
        Ok(PairIso { forward: f, backward })
    }

    /// Both maps are pair morphisms and mutually inverse.
    pub fn verify(&self) -> bool {
        let (f, g) = (&self.forward, &self.backward);
        let morphisms = PairMorphism::new(f.source(), f.target(), f.matrix.clone()).is_ok()
            && PairMorphism::new(g.source(), g.target(), g.matrix.clone()).is_ok();
        morphisms
            && f.then(g).is_ok_and(|h| h == PairMorphism::identity(f.source()))
            && g.then(f).is_ok_and(|h| h == PairMorphism::identity(f.target()))
    }
}

/// Coordinates of `Hom_Λ(B, D) = ⊕_{j,i} Λ/(p^{min(λ_j, μ_i)})`: the entry
/// `(j, i)` of a matrix is `p^{max(0, μ_i - λ_j)} c_{ji}`.
#[derive(Clone, Debug)]
struct HomCoords {
    rows: usize,
    cols: usize,
    shift: Vec<u32>,
    order: Vec<u32>,
}

impl HomCoords {
    fn new(b: &LambdaModule, d: &LambdaModule) -> Self {
        let mut shift = Vec::new();
        let mut order = Vec::new();
        for &lj in b.partition() {
            for &mi in d.partition() {
                shift.push(mi.saturating_sub(lj));
                order.push(lj.min(mi));
            }
        }
        HomCoords { rows: b.rank(), cols: d.rank(), shift, order }
    }

    fn dim(&self) -> usize {
        self.shift.len()
    }

    fn to_matrix(&self, x: &Pair, y: &Pair, row: &[u64]) -> Vec<Vec<u64>> {
        let spec = x.spec();
        let n = spec.n();
        let mut m = vec![vec![0u64; self.cols]; self.rows];
        for k in 0..self.dim() {
            let c = spec.div_p_pow(row[k], n - self.order[k]);
            m[k / self.cols][k % self.cols] = spec.mul_p_pow(c, self.shift[k]);
        }
        m.into_iter().map(|r| y.b().reduce(&r)).collect()
    }

    fn unit(&self, x: &Pair, k: usize) -> (Row, Vec<Vec<u64>>) {
        let spec = x.spec();
        let mut src = vec![0u64; self.dim()];
        src[k] = spec.p_pow(spec.n() - self.order[k]);
        let mut m = vec![vec![0u64; self.cols]; self.rows];
        m[k / self.cols][k % self.cols] = spec.p_pow(self.shift[k]);
        (src, m)
    }
}

/// Builds the preimage problem "image of each generator of `u` lies in `target`"
/// over a family of source morphisms.
fn constrain(
    x: &Pair,
    y: &Pair,
    coords: &HomCoords,
    family: &[(Row, Vec<Vec<u64>>)],
    u: &Submodule,
    target: &Submodule,
) -> HowellForm {
    let d = y.b();
    let ugens = u.gens();
    let width = ugens.len() * d.rank();
    let pairs: Vec<(Row, Row)> = family
        .iter()
        .map(|(src, m)| {
            let img: Row = ugens.iter().flat_map(|g| d.embed(&apply_matrix(d, m, g))).collect();
            (img, src.clone())
        })
        .collect();
    let mut tgt: Vec<Row> = Vec::new();
    for blk in 0..ugens.len() {
        for r in target.form().rows() {
            let mut row = vec![0u64; width];
            row[blk * d.rank()..(blk + 1) * d.rank()].copy_from_slice(r);
            tgt.push(row);
        }
    }
    linalg::preimage(x.spec(), width, coords.dim(), &pairs, &tgt)
}

/// `Hom((B; A), (D; C))` together with its subgroup `N`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Pair,
    target: Pair,
    coords: HomCoords,
    hom: HowellForm,
    ideal: HowellForm,
}

impl HomSpace {
    pub fn new(x: &Pair, y: &Pair) -> Result<Self> {
        if x.spec() != y.spec() {
            return Err(Error::RingMismatch(*x.spec(), *y.spec()));
        }
        let coords = HomCoords::new(x.b(), y.b());
        let all: Vec<(Row, Vec<Vec<u64>>)> = (0..coords.dim()).map(|k| coords.unit(x, k)).collect();
        let hom = constrain(x, y, &coords, &all, x.a(), y.a());
        let hom_family: Vec<(Row, Vec<Vec<u64>>)> =
            hom.rows().iter().map(|r| (r.clone(), coords.to_matrix(x, y, r))).collect();
        let ideal = constrain(x, y, &coords, &hom_family, &x.a_plus(), &y.a_minus());
        Ok(HomSpace { source: x.clone(), target: y.clone(), coords, hom, ideal })
    }

    fn morphism(&self, row: &[u64]) -> PairMorphism {
        PairMorphism::new_unchecked(&self.source, &self.target, self.coords.to_matrix(&self.source, &self.target, row))
    }

    /// Generators of the Hom group.
    pub fn generators(&self) -> Vec<PairMorphism> {
        self.hom.rows().iter().map(|r| self.morphism(r)).collect()
    }

    /// Generators of `N ∩ Hom`.
    pub fn ideal_generators(&self) -> Vec<PairMorphism> {
        self.ideal.rows().iter().map(|r| self.morphism(r)).collect()
    }

    /// Composition length of the Hom group.
    pub fn length(&self) -> u32 {
        self.hom.length(self.source.spec())
    }

    pub fn ideal_length(&self) -> u32 {
        self.ideal.length(self.source.spec())
    }

    /// Exponents `e` of the cyclic factors `Λ/(p^e)` of the Hom group.
    pub fn structure(&self) -> Vec<u32> {
        let spec = self.source.spec();
        if self.hom.is_zero() {
            return Vec::new();
        }
        let sys = SmithSystem::new(spec, self.hom.rows(), self.coords.dim()).expect("consistent dimensions");
        let mut out: Vec<u32> = sys.exponents().iter().map(|&e| spec.n() - e).collect();
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// `dim_k Hom/N`; checks that `p · Hom ⊆ N` so the quotient is a `k`-space.
    pub fn quotient_dim(&self) -> Result<u32> {
        let spec = self.source.spec();
        let p_hom: Vec<Row> = self.hom.rows().iter().map(|r| linalg::scale_p_pow(spec, 1, r)).collect();
        if !p_hom.iter().all(|r| self.ideal.contains(spec, r)) {
            return Err(Error::inconsistent("p·Hom is not contained in N"));
        }
        Ok(self.length() - self.ideal_length())
    }

    pub fn contains(&self, f: &PairMorphism) -> bool {
        let row = self.coords_of(f);
        row.is_some_and(|r| self.hom.contains(self.source.spec(), &r))
    }

    fn coords_of(&self, f: &PairMorphism) -> Option<Row> {
        let spec = self.source.spec();
        let n = spec.n();
        let mut row = vec![0u64; self.coords.dim()];
        for (k, slot) in row.iter_mut().enumerate() {
            let v = f.matrix()[k / self.coords.cols][k % self.coords.cols];
            if v == 0 {
                continue;
            }
            if spec.valuation(v) < self.coords.shift[k] {
                return None;
            }
            let c = spec.div_p_pow(v, self.coords.shift[k]);
            *slot = spec.mul_p_pow(c, n - self.coords.order[k]);
        }
        Some(row)
    }

    fn random_combination<R: Rng>(&self, rows: &[Row], rng: &mut R) -> PairMorphism {
        let spec = self.source.spec();
        let mut acc = vec![0u64; self.coords.dim()];
        for r in rows {
            let c = rng.gen_range(0..spec.modulus());
            linalg::axpy(spec, &mut acc, c, r);
        }
        self.morphism(&acc)
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> PairMorphism {
        self.random_combination(self.hom.rows(), rng)
    }

    pub fn random_in_ideal<R: Rng>(&self, rng: &mut R) -> PairMorphism {
        self.random_combination(self.ideal.rows(), rng)
    }
}

/// Whether the composite of a chain of morphisms in `N` is zero.
pub fn nilpotency_check(chain: &[PairMorphism]) -> Result<bool> {
    let Some(first) = chain.first() else {
        return Err(Error::Precondition("empty chain".into()));
    };
    if let Some(k) = chain.iter().position(|f| !f.in_ideal_n()) {
        return Err(Error::Precondition(format!("map {k} of the chain is not in N")));
    }
    let mut acc = first.clone();
    for f in &chain[1..] {
        acc = acc.then(f)?;
    }
    Ok(acc.is_zero())
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::pairs::{direct_sum, make_picket, make_q, Label};
    use crate::ring::RingSpec;

    fn z(p: u64, n: u32) -> RingSpec {
        RingSpec::zmod(p, n).unwrap()
    }

    /// All module maps `B -> D` by enumerating images of generators.
    fn brute_homs(x: &Pair, y: &Pair) -> Vec<Vec<Vec<u64>>> {
        let d = y.b();
        let mut out: Vec<Vec<Vec<u64>>> = vec![vec![]];
        for &lj in x.b().partition() {
            let choices: Vec<Vec<u64>> =
                d.elements().filter(|v| d.scale_p_pow(lj, v).iter().all(|&c| c == 0)).collect();
            out = out
                .into_iter()
                .flat_map(|m| {
                    choices.iter().map(move |c| {
                        let mut m2 = m.clone();
                        m2.push(c.clone());
                        m2
                    })
                })
                .collect();
        }
        out.into_iter().filter(|m| PairMorphism::new(x, y, m.clone()).is_ok()).collect()
    }

    #[test]
    fn hom_lengths_match_enumeration() {
        let s = z(2, 3);
        let pairs: Vec<Pair> = Label::all(3).iter().map(|l| l.pair(s).unwrap()).collect();
        for x in &pairs {
            for y in &pairs {
                let h = HomSpace::new(x, y).unwrap();
                let brute = brute_homs(x, y);
                assert_eq!(1usize << h.length(), brute.len(), "{x} -> {y}");
                let n_count = brute
                    .iter()
                    .filter(|m| PairMorphism::new(x, y, (*m).clone()).unwrap().in_ideal_n())
                    .count();
                assert_eq!(1usize << h.ideal_length(), n_count, "{x} -> {y}");
                assert_eq!(h.structure().iter().sum::<u32>(), h.length());
                for m in brute {
                    assert!(h.contains(&PairMorphism::new(x, y, m).unwrap()));
                }
            }
        }
    }

    #[test]
    fn hom_examples() {
        let s = z(2, 3);
        let b = LambdaModule::new(s, vec![3, 1]).unwrap();
        let d = LambdaModule::new(s, vec![2, 2]).unwrap();
        let x = Pair::new(Submodule::zero(&b), 0).unwrap();
        let y = Pair::new(Submodule::zero(&d), 0).unwrap();
        let h = HomSpace::new(&x, &y).unwrap();
        assert_eq!(h.length(), 2 + 2 + 1 + 1);
        let p11 = make_picket(s, 1, 1).unwrap();
        let p01 = make_picket(s, 0, 1).unwrap();
        assert_eq!(HomSpace::new(&p11, &p01).unwrap().length(), 0);
        let q = make_q(s, 1, 3).unwrap();
        assert!(HomSpace::new(&q, &q).unwrap().contains(&PairMorphism::identity(&q)));
    }

    #[test]
    fn ideal_examples() {
        let s = z(2, 3);
        let p12 = make_picket(s, 1, 2).unwrap();
        assert!(PairMorphism::zero(&p12, &p12).in_ideal_n());
        assert!(!PairMorphism::identity(&p12).in_ideal_n());
        let p23 = make_picket(s, 2, 3).unwrap();
        let times_p = PairMorphism::mul_p_pow(&p23, 1);
        assert!(PairMorphism::new(&p23, &p23, times_p.matrix().to_vec()).is_ok());
        assert!(times_p.in_ideal_n());
        // P(0,ℓ): N is everything sending soc B to 0
        let p03 = make_picket(s, 0, 3).unwrap();
        let h = HomSpace::new(&p03, &p03).unwrap();
        assert_eq!(h.length(), 3);
        assert_eq!(h.ideal_length(), 2);
        assert_eq!(h.quotient_dim().unwrap(), 1);
    }

    #[test]
    fn chains() {
        for n in 1..=4 {
            let s = z(2, n);
            let p1 = make_picket(s, 1, n).unwrap();
            if n >= 2 {
                let p2 = make_picket(s, 2, n).unwrap();
                let mut chain = vec![PairMorphism::new(&p1, &p2, vec![vec![1]]).unwrap()];
                chain.extend((1..n).map(|_| PairMorphism::mul_p_pow(&p2, 1)));
                assert_eq!(nilpotency_check(&chain), Ok(false));
                chain.push(PairMorphism::mul_p_pow(&p2, 1));
                assert_eq!(nilpotency_check(&chain), Ok(true));
            }
            let z0 = PairMorphism::zero(&p1, &p1);
            assert_eq!(nilpotency_check(&[z0]), Ok(true));
            assert!(nilpotency_check(&[PairMorphism::identity(&p1)]).is_err());
        }
    }

    #[test]
    fn ideal_is_closed_under_composition() {
        let s = z(3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let labels = Label::all(3);
        let pick = |rng: &mut ChaCha8Rng| {
            let k = rng.gen_range(1..=2);
            let ps: Vec<Pair> = (0..k).map(|_| labels[rng.gen_range(0..labels.len())].pair(s).unwrap()).collect();
            direct_sum(s, &ps).unwrap().pair
        };
        for _ in 0..60 {
            let (x, y, w) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let hxy = HomSpace::new(&x, &y).unwrap();
            let hyw = HomSpace::new(&y, &w).unwrap();
            let f = hxy.random_in_ideal(&mut rng);
            let f2 = hxy.random_in_ideal(&mut rng);
            let g = hyw.random(&mut rng);
            assert!(f.in_ideal_n() && f.add(&f2).unwrap().in_ideal_n());
            assert!(f.then(&g).unwrap().in_ideal_n());
            let h = HomSpace::new(&w, &x).unwrap().random(&mut rng);
            assert!(h.then(&f).unwrap().in_ideal_n());
            assert!(PairMorphism::new(&x, &w, f.then(&g).unwrap().matrix().to_vec()).is_ok());
        }
    }

    #[test]
    fn inverses() {
        let s = z(2, 3);
        let q = make_q(s, 1, 3).unwrap();
        let iso = PairIso::from_forward(PairMorphism::identity(&q)).unwrap();
        assert!(iso.verify());
        let scaled = PairMorphism::identity(&q).scale(3);
        assert!(PairIso::from_forward(scaled).unwrap().verify());
        assert!(PairMorphism::mul_p_pow(&q, 1).inverse().is_none());
    }
}
