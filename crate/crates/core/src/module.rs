//! Finitely generated `Λ`-modules `B = ⊕ Λ/(p^{λ_i})`, their elements and
//! submodules.
//!
//! Internally a submodule is stored as the [`HowellForm`] of its image under
//! the embedding `ι: B -> Λ^r`, `ι(x)_i = p^{n-λ_i} x_i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, HowellForm, Row, SmithSystem};
use crate::ring::RingSpec;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaModule {
    spec: RingSpec,
    partition: Vec<u32>,
}

impl LambdaModule {
    /// `partition` must be weakly decreasing with parts in `[1, n]`.
    pub fn new(spec: RingSpec, partition: Vec<u32>) -> Result<Self> {
        if partition.iter().any(|&l| l == 0 || l > spec.n()) {
            return Err(Error::InvalidPartition(partition, format!("parts must lie in [1, {}]", spec.n())));
        }
        if partition.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(partition, "parts must be weakly decreasing".into()));
        }
        Ok(LambdaModule { spec, partition })
    }

    pub fn zero(spec: RingSpec) -> Self {
        LambdaModule { spec, partition: Vec::new() }
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn partition(&self) -> &[u32] {
        &self.partition
    }

    pub fn rank(&self) -> usize {
        self.partition.len()
    }

    /// Composition length `Σ λ_i`.
    pub fn length(&self) -> u32 {
        self.partition.iter().sum()
    }

    /// Loewy length (largest part, 0 for the zero module).
    pub fn loewy_length(&self) -> u32 {
        self.partition.first().copied().unwrap_or(0)
    }

    pub fn cardinality(&self) -> u128 {
        (self.spec.p() as u128).pow(self.length())
    }

    pub fn check_coords(&self, coords: &[u64]) -> Result<()> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: coords.len() });
        }
        for (i, (&c, &l)) in coords.iter().zip(&self.partition).enumerate() {
            if c >= self.spec.order(l) {
                return Err(Error::BadCoordinate { index: i, value: c, exponent: l });
            }
        }
        Ok(())
    }

    pub fn elem(&self, coords: Vec<u64>) -> Result<ModElem> {
        self.check_coords(&coords)?;
        Ok(ModElem { coords })
    }

    pub fn zero_elem(&self) -> ModElem {
        ModElem { coords: vec![0; self.rank()] }
    }

    /// The generator of the `i`-th cyclic summand.
    pub fn unit_vector(&self, i: usize) -> ModElem {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        ModElem { coords }
    }

    /// Reduces arbitrary ring codes into the coordinate ranges.
    pub fn reduce(&self, coords: &[u64]) -> Vec<u64> {
        coords.iter().zip(&self.partition).map(|(&c, &l)| self.spec.reduce(c, l)).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let s: Vec<u64> = x.iter().zip(y).map(|(&a, &b)| self.spec.add(a, b)).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let s: Vec<u64> = x.iter().zip(y).map(|(&a, &b)| self.spec.sub(a, b)).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Vec<u64> {
        self.reduce(&linalg::scale(&self.spec, c, x))
    }

    pub fn scale_p_pow(&self, e: u32, x: &[u64]) -> Vec<u64> {
        self.reduce(&linalg::scale_p_pow(&self.spec, e, x))
    }

    pub fn embed(&self, coords: &[u64]) -> Row {
        let n = self.spec.n();
        coords.iter().zip(&self.partition).map(|(&c, &l)| self.spec.mul_p_pow(c, n - l)).collect()
    }

    /// Inverse of [`embed`](Self::embed) on its image.
    pub fn unembed(&self, row: &[u64]) -> Vec<u64> {
        let n = self.spec.n();
        row.iter().zip(&self.partition).map(|(&c, &l)| self.spec.div_p_pow(c, n - l)).collect()
    }

    /// Order exponent of an element: least `e` with `p^e x = 0`.
    pub fn order_exponent(&self, x: &[u64]) -> u32 {
        x.iter()
            .zip(&self.partition)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, &l)| l - self.spec.valuation(c))
            .max()
            .unwrap_or(0)
    }

    /// All elements, in lexicographic order of coordinates. Intended for
    /// tiny modules only.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let orders: Vec<u64> = self.partition.iter().map(|&l| self.spec.order(l)).collect();
        let total: u128 = orders.iter().map(|&o| o as u128).product();
        (0..total).map(move |mut k| {
            let mut coords = vec![0u64; orders.len()];
            for i in (0..orders.len()).rev() {
                coords[i] = (k % orders[i] as u128) as u64;
                k /= orders[i] as u128;
            }
            coords
        })
    }

    /// Height exponent `h(a) = max { m : a ∈ p^m B }`, found by solving
    /// `p^m x = a` for decreasing `m`. `None` for `a = 0`.
    pub fn height(&self, a: &[u64]) -> Option<u32> {
        if a.iter().all(|&c| c == 0) {
            return None;
        }
        let target = self.embed(a);
        let gens: Vec<Row> = (0..self.rank()).map(|i| self.embed(&self.unit_vector(i).coords)).collect();
        (0..self.spec.n()).rev().find(|&m| {
            let rows: Vec<Row> = gens.iter().map(|g| linalg::scale_p_pow(&self.spec, m, g)).collect();
            let sys = SmithSystem::new(&self.spec, &rows, self.rank()).expect("square dimensions");
            sys.solve(&target).expect("dimensions match").is_some()
        })
    }

    /// Closed form of [`height`](Self::height): the least valuation among
    /// the nonzero coordinates.
    pub fn height_closed_form(&self, a: &[u64]) -> Option<u32> {
        a.iter().filter(|&&c| c != 0).map(|&c| self.spec.valuation(c)).min()
    }

    /// `(h(a), h(pa), h(p^2 a), …)` while the multiples are nonzero.
    pub fn height_sequence(&self, a: &[u64]) -> Result<Vec<u32>> {
        if a.iter().all(|&c| c == 0) {
            return Err(Error::ZeroElement);
        }
        let mut out = Vec::new();
        let mut x = a.to_vec();
        while let Some(h) = self.height(&x) {
            out.push(h);
            x = self.scale_p_pow(1, &x);
        }
        Ok(out)
    }
}

impl fmt::Display for LambdaModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.partition.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.partition.iter().map(|l| format!("Λ/(p^{l})")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// An element of a [`LambdaModule`], given by reduced coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModElem {
    coords: Vec<u64>,
}

impl ModElem {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// A submodule of a [`LambdaModule`] in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Submodule {
    module: LambdaModule,
    form: HowellForm,
}

impl Submodule {
    /// The submodule generated by `gens` (rows of coordinates), canonicalized.
    pub fn generated(module: &LambdaModule, gens: &[Vec<u64>]) -> Result<Self> {
        for g in gens {
            module.check_coords(g)?;
        }
        Ok(Self::from_reduced(module, gens.iter().map(|g| g.as_slice())))
    }

    pub(crate) fn from_reduced<'a, I>(module: &LambdaModule, gens: I) -> Self
    where
        I: IntoIterator<Item = &'a [u64]>,
    {
        let rows = gens.into_iter().map(|g| module.embed(g));
        Submodule { module: module.clone(), form: HowellForm::new(module.spec(), module.rank(), rows) }
    }

    fn from_form(module: &LambdaModule, form: HowellForm) -> Self {
        Submodule { module: module.clone(), form }
    }

    pub fn zero(module: &LambdaModule) -> Self {
        Submodule { module: module.clone(), form: HowellForm::zero(module.rank()) }
    }

    pub fn full(module: &LambdaModule) -> Self {
        let gens: Vec<Vec<u64>> = (0..module.rank()).map(|i| module.unit_vector(i).coords).collect();
        Self::from_reduced(module, gens.iter().map(|g| g.as_slice()))
    }

    /// `soc B = ⊕ p^{λ_i - 1} Λ/(p^{λ_i})`.
    pub fn socle(module: &LambdaModule) -> Self {
        let gens: Vec<Vec<u64>> = (0..module.rank())
            .map(|i| module.scale_p_pow(module.partition()[i] - 1, module.unit_vector(i).coords()))
            .collect();
        Self::from_reduced(module, gens.iter().map(|g| g.as_slice()))
    }

    /// `rad^ℓ B = p^ℓ B`.
    pub fn radical_power(module: &LambdaModule, l: u32) -> Self {
        Self::full(module).scalar_image(l)
    }

    pub fn module(&self) -> &LambdaModule {
        &self.module
    }

    pub fn spec(&self) -> &RingSpec {
        self.module.spec()
    }

    pub(crate) fn form(&self) -> &HowellForm {
        &self.form
    }

    /// Canonical generators in module coordinates.
    pub fn gens(&self) -> Vec<Vec<u64>> {
        self.form.rows().iter().map(|r| self.module.unembed(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn length(&self) -> u32 {
        self.form.length(self.spec())
    }

    pub fn cardinality(&self) -> u128 {
        (self.spec().p() as u128).pow(self.length())
    }

    /// Minimal number of generators, `dim U/pU`.
    pub fn min_generators(&self) -> u32 {
        self.length() - self.scalar_image(1).length()
    }

    pub fn is_cyclic(&self) -> bool {
        self.min_generators() <= 1
    }

    fn check_same(&self, other: &Submodule) -> Result<()> {
        if self.module != other.module {
            return Err(Error::ModuleMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.form.contains(self.spec(), &self.module.embed(x))
    }

    /// Membership by solving `Σ c_j g_j = x` over `Λ` directly; agrees with
    /// [`contains`](Self::contains).
    pub fn contains_by_solving(&self, x: &[u64]) -> bool {
        let rows: Vec<Row> = self.form.rows().to_vec();
        linalg::smith_solve(self.spec(), &rows, self.module.rank(), &self.module.embed(x))
            .expect("dimensions match")
            .is_some()
    }

    pub fn is_subset(&self, other: &Submodule) -> bool {
        self.form.is_subset(self.spec(), &other.form)
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same(other)?;
        Ok(Self::from_form(&self.module, self.form.sum(self.spec(), &other.form)))
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.check_same(other)?;
        Ok(Self::from_form(&self.module, self.form.intersect(self.spec(), &other.form)))
    }

    /// `p^e U`.
    pub fn scalar_image(&self, e: u32) -> Submodule {
        let rows = self.form.rows().iter().map(|r| linalg::scale_p_pow(self.spec(), e, r));
        Self::from_form(&self.module, HowellForm::new(self.spec(), self.module.rank(), rows))
    }

    /// `p^{-e} U = { x ∈ B : p^e x ∈ U }`.
    pub fn scalar_preimage(&self, e: u32) -> Submodule {
        let m = &self.module;
        let pairs: Vec<(Row, Row)> = (0..m.rank())
            .map(|i| {
                let g = m.embed(m.unit_vector(i).coords());
                (linalg::scale_p_pow(self.spec(), e, &g), g)
            })
            .collect();
        let form = linalg::preimage(self.spec(), m.rank(), m.rank(), &pairs, self.form.rows());
        Self::from_form(m, form)
    }

    /// All elements of the submodule (tiny cases only).
    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.module.elements().filter(|x| self.contains(x)).collect()
    }
}

impl fmt::Display for Submodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .gens()
            .iter()
            .map(|g| {
                let cs: Vec<String> = g.iter().map(|&c| self.spec().format_code(c)).collect();
                format!("({})", cs.join(", "))
            })
            .collect();
        write!(f, "⟨{}⟩", gens.join(", "))
    }
}
