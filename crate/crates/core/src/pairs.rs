//! Pairs `(B; A)` with `p^m A = 0`, the indecomposable pickets `P_m^ℓ` and
//! the pairs `Q_s^t`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::homs::PairIso;
use crate::module::{LambdaModule, Submodule};
use crate::ring::RingSpec;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    b: LambdaModule,
    a: Submodule,
    m: u32,
}

impl Pair {
    /// Checks `p^m A = 0`.
    pub fn new(a: Submodule, m: u32) -> Result<Self> {
        if !a.scalar_image(m).is_zero() {
            return Err(Error::BoundViolation(m));
        }
        Ok(Pair { b: a.module().clone(), a, m })
    }

    pub fn from_gens(spec: RingSpec, partition: Vec<u32>, gens: &[Vec<u64>], m: u32) -> Result<Self> {
        let b = LambdaModule::new(spec, partition)?;
        Pair::new(Submodule::generated(&b, gens)?, m)
    }

    pub fn b(&self) -> &LambdaModule {
        &self.b
    }

    pub fn a(&self) -> &Submodule {
        &self.a
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn spec(&self) -> &RingSpec {
        self.b.spec()
    }

    /// Whether `p^2 A = 0`.
    pub fn in_s2(&self) -> bool {
        self.a.scalar_image(2).is_zero()
    }

    pub(crate) fn require_s2(&self) -> Result<()> {
        if self.in_s2() {
            Ok(())
        } else {
            Err(Error::Precondition("p^2 A must vanish".into()))
        }
    }

    /// `A⁻ = rad A = pA`.
    pub fn a_minus(&self) -> Submodule {
        self.a.scalar_image(1)
    }

    /// `A⁺ = A + soc B`, which equals `p^{-1} A⁻` for pairs with `p^2 A = 0`.
    pub fn a_plus(&self) -> Submodule {
        let plus = self.a.sum(&Submodule::socle(&self.b)).expect("same module");
        debug_assert!(!self.in_s2() || plus == self.a_minus().scalar_preimage(1));
        plus
    }

    pub fn socle_contained(&self) -> bool {
        Submodule::socle(&self.b).is_subset(&self.a)
    }

    /// The pair `(B; A⁺)`.
    pub fn plus_pair(&self) -> Pair {
        Pair { b: self.b.clone(), a: self.a_plus(), m: self.m.max(1) }
    }

    pub fn with_submodule(&self, a: Submodule) -> Result<Pair> {
        if a.module() != &self.b {
            return Err(Error::ModuleMismatch);
        }
        Pair::new(a, self.m)
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.b, self.a)
    }
}

/// An indecomposable object of `S_2(Λ)`, up to isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `P_m^ℓ = (Λ/(p^ℓ); p^{ℓ-m} Λ/(p^ℓ))`
    P { m: u32, l: u32 },
    /// `Q_s^t = (Λ/(p^t) ⊕ Λ/(p^s); (p^{t-2}, p^{s-1}) Λ)`
    Q { s: u32, t: u32 },
}

impl Label {
    pub fn validate(&self, n: u32) -> Result<()> {
        let ok = match *self {
            Label::P { m, l } => m <= 2 && l >= m.max(1) && l <= n,
            Label::Q { s, t } => s >= 1 && s + 1 < t && t <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidLabel(format!("{self} is out of range for n = {n}")))
        }
    }

    /// Every label for length `n`, sorted.
    pub fn all(n: u32) -> Vec<Label> {
        let mut out = Vec::new();
        for m in 0..=2 {
            for l in m.max(1)..=n {
                out.push(Label::P { m, l });
            }
        }
        for s in 1..=n {
            for t in s + 2..=n {
                out.push(Label::Q { s, t });
            }
        }
        out
    }

    pub fn partition(&self) -> Vec<u32> {
        match *self {
            Label::P { l, .. } => vec![l],
            Label::Q { s, t } => vec![t, s],
        }
    }

    /// Composition length of `A`.
    pub fn a_length(&self) -> u32 {
        match *self {
            Label::P { m, .. } => m,
            Label::Q { .. } => 2,
        }
    }

    /// The height sequence of a generator of `A`, empty when `A = 0`.
    pub fn expected_heights(&self) -> Vec<u32> {
        match *self {
            Label::P { m, l } => (l - m..l).collect(),
            Label::Q { s, t } => vec![s - 1, t - 1],
        }
    }

    pub fn pair(&self, spec: RingSpec) -> Result<Pair> {
        match *self {
            Label::P { m, l } => make_picket(spec, m, l),
            Label::Q { s, t } => make_q(spec, s, t),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::P { m, l } => write!(f, "P[m={m},l={l}]"),
            Label::Q { s, t } => write!(f, "Q[s={s},t={t}]"),
        }
    }
}

pub fn make_picket(spec: RingSpec, m: u32, l: u32) -> Result<Pair> {
    Label::P { m, l }.validate(spec.n())?;
    let gen = if m == 0 { vec![] } else { vec![vec![spec.p_pow(l - m)]] };
    Pair::from_gens(spec, vec![l], &gen, m)
}

pub fn make_q(spec: RingSpec, s: u32, t: u32) -> Result<Pair> {
    Label::Q { s, t }.validate(spec.n())?;
    Pair::from_gens(spec, vec![t, s], &[vec![spec.p_pow(t - 2), spec.p_pow(s - 1)]], 2)
}

/// Direct sum with its placement: `placement[k][i]` is the position in the
/// sum of summand `k`'s `i`-th cyclic component.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub pair: Pair,
    pub placement: Vec<Vec<usize>>,
}

impl DirectSum {
    /// Moves coordinates of summand `k` into the sum.
    pub fn inject(&self, k: usize, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.pair.b().rank()];
        for (i, &c) in x.iter().enumerate() {
            out[self.placement[k][i]] = c;
        }
        out
    }
}

/// Concatenates the partitions (stably re-sorted) and embeds the `A`s
/// blockwise.
pub fn direct_sum(spec: RingSpec, pairs: &[Pair]) -> Result<DirectSum> {
    if let Some(x) = pairs.iter().find(|x| x.spec() != &spec) {
        return Err(Error::RingMismatch(spec, *x.spec()));
    }
    let mut slots: Vec<(u32, usize, usize)> = Vec::new();
    for (k, x) in pairs.iter().enumerate() {
        for (i, &l) in x.b().partition().iter().enumerate() {
            slots.push((l, k, i));
        }
    }
    slots.sort_by(|a, b| b.0.cmp(&a.0));
    let mut placement: Vec<Vec<usize>> = pairs.iter().map(|x| vec![0; x.b().rank()]).collect();
    for (pos, &(_, k, i)) in slots.iter().enumerate() {
        placement[k][i] = pos;
    }
    let b = LambdaModule::new(spec, slots.iter().map(|s| s.0).collect())?;
    let m = pairs.iter().map(|x| x.m()).max().unwrap_or(0);
    let mut sum = DirectSum { pair: Pair::new(Submodule::zero(&b), m)?, placement };
    let gens: Vec<Vec<u64>> = pairs
        .iter()
        .enumerate()
        .flat_map(|(k, x)| x.a().gens().into_iter().map(move |g| (k, g)))
        .map(|(k, g)| sum.inject(k, &g))
        .collect();
    sum.pair = Pair::new(Submodule::generated(&b, &gens)?, m)?;
    Ok(sum)
}

/// A multiset of labels, optionally with an explicit isomorphism from the
/// input pair to the direct sum of the labelled pairs.
#[derive(Clone, Debug, Default)]
pub struct DecompReport {
    pub labels: BTreeMap<Label, usize>,
    pub witness: Option<PairIso>,
}

impl DecompReport {
    pub fn from_labels<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        let mut map = BTreeMap::new();
        for l in labels {
            *map.entry(l).or_insert(0) += 1;
        }
        DecompReport { labels: map, witness: None }
    }

    /// Labels with repetitions, sorted.
    pub fn flat(&self) -> Vec<Label> {
        self.labels.iter().flat_map(|(&l, &c)| std::iter::repeat_n(l, c)).collect()
    }

    pub fn count(&self) -> usize {
        self.labels.values().sum()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.count() == 1
    }

    /// The direct sum of the labelled pairs, in sorted label order.
    pub fn target(&self, spec: RingSpec) -> Result<DirectSum> {
        let pairs = self.flat().iter().map(|l| l.pair(spec)).collect::<Result<Vec<_>>>()?;
        direct_sum(spec, &pairs)
    }

    /// Partition and `A`-length bookkeeping against the input pair.
    pub fn check_consistent(&self, x: &Pair) -> Result<()> {
        let mut parts: Vec<u32> = self.flat().iter().flat_map(|l| l.partition()).collect();
        parts.sort_by(|a, b| b.cmp(a));
        if parts != x.b().partition() {
            return Err(Error::inconsistent(format!(
                "labels give partition {parts:?}, input has {:?}",
                x.b().partition()
            )));
        }
        let len: u32 = self.flat().iter().map(|l| l.a_length()).sum();
        if len != x.a().length() {
            return Err(Error::inconsistent(format!("labels give length {len}, input A has {}", x.a().length())));
        }
        Ok(())
    }
}

impl fmt::Display for DecompReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(|(l, c)| format!("{l}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
