//! Brute-force ground truth for tiny rings: enumeration of submodules,
//! isomorphism by automorphism search, orbit censuses.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functor::classify_s2;
use crate::module::{LambdaModule, Submodule};
use crate::pairs::{DecompReport, Label, Pair};
use crate::ring::RingSpec;

/// Environment variable overriding the cardinality cap.
pub const CAP_ENV: &str = "SUBPAIR_MAX_CARDINALITY";
pub const DEFAULT_CAP: u128 = 1 << 12;

/// The cap on `|B|` for brute-force work.
pub fn cardinality_cap() -> u128 {
    std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

fn check_cap(b: &LambdaModule) -> Result<()> {
    let cap = cardinality_cap();
    if b.cardinality() > cap {
        return Err(Error::CapExceeded { what: "module cardinality".into(), needed: b.cardinality(), cap });
    }
    Ok(())
}

/// All submodules `A` of `B` with `p^m A = 0`, sorted.
pub fn enumerate_submodules(b: &LambdaModule, m: u32) -> Result<Vec<Submodule>> {
    check_cap(b)?;
    let cyclic: BTreeSet<Submodule> = b
        .elements()
        .filter(|x| b.scale_p_pow(m, x).iter().all(|&c| c == 0))
        .map(|x| Submodule::from_reduced(b, [x.as_slice()]))
        .filter(|s| !s.is_zero())
        .collect();
    let mut seen = BTreeSet::from([Submodule::zero(b)]);
    let mut frontier = vec![Submodule::zero(b)];
    while let Some(s) = frontier.pop() {
        for c in &cyclic {
            if c.is_subset(&s) {
                continue;
            }
            let t = s.sum(c)?;
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Elements of `B` annihilated by `p^e`.
fn killed_by(b: &LambdaModule, e: u32) -> Vec<Vec<u64>> {
    b.elements().filter(|x| b.scale_p_pow(e, x).iter().all(|&c| c == 0)).collect()
}

fn apply_rows(b: &LambdaModule, rows: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; b.rank()];
    for (&c, row) in x.iter().zip(rows) {
        if c != 0 {
            out = b.add(&out, &b.scale(c, row));
        }
    }
    out
}

/// Whether some automorphism of `B` carries `A` onto `C`, by exhaustive
/// search over images of the standard generators.
pub fn is_isomorphic_bruteforce(x: &Pair, y: &Pair) -> Result<bool> {
    if x.spec() != y.spec() {
        return Err(Error::RingMismatch(*x.spec(), *y.spec()));
    }
    if x.b() != y.b() {
        return Ok(false);
    }
    let b = x.b();
    check_cap(b)?;
    if x.a().length() != y.a().length() {
        return Ok(false);
    }
    let candidates: Vec<Vec<Vec<u64>>> = b.partition().iter().map(|&l| killed_by(b, l)).collect();
    let a_gens = x.a().gens();
    // the last generator index each A-generator depends on
    let support: Vec<usize> =
        a_gens.iter().map(|g| g.iter().rposition(|&c| c != 0).unwrap_or(0)).collect();
    let mut rows = Vec::with_capacity(b.rank());
    Ok(search(b, &candidates, &a_gens, &support, y.a(), &mut rows))
}

fn search(
    b: &LambdaModule,
    candidates: &[Vec<Vec<u64>>],
    a_gens: &[Vec<u64>],
    support: &[usize],
    c: &Submodule,
    rows: &mut Vec<Vec<u64>>,
) -> bool {
    let j = rows.len();
    if j == b.rank() {
        return true;
    }
    for cand in &candidates[j] {
        rows.push(cand.clone());
        let injective = Submodule::from_reduced(b, rows.iter().map(|r| r.as_slice())).length()
            == b.partition()[..=j].iter().sum::<u32>();
        let maps_a = injective
            && a_gens.iter().zip(support).filter(|(_, &s)| s == j).all(|(g, _)| {
                c.contains(&apply_rows(b, rows, g))
            });
        if maps_a && search(b, candidates, a_gens, support, c, rows) {
            return true;
        }
        rows.pop();
    }
    false
}

/// Elementary automorphisms of `B` (unit scalings and transvections), as
/// row matrices. Together they generate `Aut(B)`.
pub fn elementary_automorphisms(b: &LambdaModule) -> Vec<Vec<Vec<u64>>> {
    let spec = b.spec();
    let part = b.partition();
    let r = b.rank();
    let base: Vec<Vec<u64>> = (0..r).map(|i| b.unit_vector(i).into_coords()).collect();
    let mut out = Vec::new();
    let units: Vec<u64> = (1..spec.modulus()).filter(|&u| spec.is_unit(u) && u != 1).collect();
    for i in 0..r {
        let seen: BTreeSet<u64> = units.iter().map(|&u| spec.reduce(u, part[i])).filter(|&u| u != 1).collect();
        for u in seen {
            let mut g = base.clone();
            g[i] = b.scale(u, &g[i]);
            out.push(g);
        }
    }
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            let lo = part[j].saturating_sub(part[i]);
            for e in lo..part[j] {
                let mut g = base.clone();
                g[i] = b.add(&g[i], &b.scale_p_pow(e, &base[j]));
                out.push(g);
            }
        }
    }
    out
}

fn image(b: &LambdaModule, g: &[Vec<u64>], s: &Submodule) -> Submodule {
    let gens: Vec<Vec<u64>> = s.gens().iter().map(|x| apply_rows(b, g, x)).collect();
    Submodule::from_reduced(b, gens.iter().map(|x| x.as_slice()))
}

/// Partition of `subs` into `Aut(B)`-orbits, as lists of indices sorted by
/// their least element.
pub fn orbits(b: &LambdaModule, subs: &[Submodule]) -> Vec<Vec<usize>> {
    let index: HashMap<&Submodule, usize> = subs.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut parent: Vec<usize> = (0..subs.len()).collect();
    fn find(parent: &mut [usize], mut k: usize) -> usize {
        while parent[k] != k {
            parent[k] = parent[parent[k]];
            k = parent[k];
        }
        k
    }
    let gens = elementary_automorphisms(b);
    for (k, s) in subs.iter().enumerate() {
        for g in &gens {
            let t = image(b, g, s);
            let Some(&j) = index.get(&t) else { continue };
            let (rk, rj) = (find(&mut parent, k), find(&mut parent, j));
            if rk != rj {
                parent[rk.max(rj)] = rk.min(rj);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..subs.len() {
        let root = find(&mut parent, k);
        groups.entry(root).or_default().push(k);
    }
    groups.into_values().collect()
}

/// Bounds on the shapes of `B` in a census.
#[derive(Clone, Copy, Debug)]
pub struct CensusCaps {
    pub max_parts: usize,
    pub max_part: u32,
    pub max_length: Option<u32>,
}

/// Partitions with at most `max_parts` parts, each at most
/// `min(max_part, n)`, and total at most `max_length`.
pub fn partitions(n: u32, caps: &CensusCaps) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, top: u32, caps: &CensusCaps, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == caps.max_parts {
            return;
        }
        let used: u32 = cur.iter().sum();
        for part in (1..=top).rev() {
            if caps.max_length.is_some_and(|m| used + part > m) {
                continue;
            }
            cur.push(part);
            rec(cur, part, caps, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), caps.max_part.min(n), caps, &mut out);
    out.sort_by(|a, b| (a.iter().sum::<u32>(), a).cmp(&(b.iter().sum::<u32>(), b)));
    out
}

/// One isomorphism class of pairs with a fixed `B`.
#[derive(Clone, Debug)]
pub struct CensusClass {
    pub representative: Pair,
    pub orbit_size: usize,
    pub report: DecompReport,
}

#[derive(Clone, Debug)]
pub struct ShapeCensus {
    pub partition: Vec<u32>,
    pub submodule_count: usize,
    pub classes: Vec<CensusClass>,
    /// Orbits on which the classification was not constant.
    pub split_orbits: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub spec: RingSpec,
    pub caps: CensusCaps,
    pub shapes: Vec<ShapeCensus>,
    pub checks: Vec<CheckResult>,
}

impl Census {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn pair_count(&self) -> usize {
        self.shapes.iter().map(|s| s.submodule_count).sum()
    }

    pub fn indecomposables(&self) -> Vec<&CensusClass> {
        self.shapes.iter().flat_map(|s| &s.classes).filter(|c| c.report.is_indecomposable()).collect()
    }
}

fn census_shape(spec: RingSpec, partition: Vec<u32>) -> Result<ShapeCensus> {
    let b = LambdaModule::new(spec, partition.clone())?;
    let subs = enumerate_submodules(&b, 2)?;
    let reports = subs
        .par_iter()
        .map(|a| classify_s2(&Pair::new(a.clone(), 2)?))
        .collect::<Result<Vec<_>>>()?;
    let mut classes = Vec::new();
    let mut split_orbits = Vec::new();
    for orbit in orbits(&b, &subs) {
        let first = orbit[0];
        if let Some(&k) = orbit.iter().find(|&&k| reports[k].labels != reports[first].labels) {
            split_orbits.push(format!(
                "B={:?}: {} is {} but {} in the same orbit is {}",
                partition, subs[first], reports[first], subs[k], reports[k]
            ));
        }
        classes.push(CensusClass {
            representative: Pair::new(subs[first].clone(), 2)?,
            orbit_size: orbit.len(),
            report: reports[first].clone(),
        });
    }
    Ok(ShapeCensus { partition, submodule_count: subs.len(), classes, split_orbits })
}

/// A generator of a cyclic submodule.
fn cyclic_generator(a: &Submodule) -> Option<Vec<u64>> {
    let b = a.module();
    a.elements().into_iter().find(|x| &Submodule::from_reduced(b, [x.as_slice()]) == a)
}

fn check(name: &'static str, failures: Vec<String>) -> CheckResult {
    CheckResult { name, passed: failures.is_empty(), failures }
}

/// Exhaustive census of `S_2` over every `B` within the caps, with checks:
/// (a) classification is constant on orbits, (b) distinct orbits have
/// distinct reports, (c) the indecomposable classes are exactly the labels
/// fitting the caps, (d) indecomposables have `A` zero or cyclic, (e) their
/// height sequences are distinct and match the labels.
pub fn verify_census(spec: RingSpec, caps: CensusCaps) -> Result<Census> {
    let n = spec.n();
    let cap = cardinality_cap();
    let shapes_wanted = partitions(n, &caps);
    for part in &shapes_wanted {
        let b = LambdaModule::new(spec, part.clone())?;
        if b.cardinality() > cap {
            return Err(Error::CapExceeded { what: "module cardinality".into(), needed: b.cardinality(), cap });
        }
    }
    let shapes = shapes_wanted
        .into_par_iter()
        .map(|part| census_shape(spec, part))
        .collect::<Result<Vec<_>>>()?;

    let a = shapes.iter().flat_map(|s| s.split_orbits.iter().cloned()).collect();

    let mut b_fail = Vec::new();
    let mut total_fail = Vec::new();
    for s in &shapes {
        let mut seen: BTreeMap<String, &Pair> = BTreeMap::new();
        for c in &s.classes {
            if let Some(prev) = seen.insert(c.report.to_string(), &c.representative) {
                b_fail.push(format!("{} and {} share report {}", prev, c.representative, c.report));
            }
        }
        let total: usize = s.classes.iter().map(|c| c.orbit_size).sum();
        if total != s.submodule_count {
            total_fail.push(format!("B={:?}: orbit sizes sum to {total}", s.partition));
        }
    }
    b_fail.extend(total_fail);

    let fits = |l: &Label| {
        let part = l.partition();
        part.len() <= caps.max_parts
            && part.iter().all(|&x| x <= caps.max_part)
            && caps.max_length.is_none_or(|m| part.iter().sum::<u32>() <= m)
    };
    let expected: BTreeSet<Label> = Label::all(n).into_iter().filter(fits).collect();
    let indec = shapes.iter().flat_map(|s| &s.classes).filter(|c| c.report.is_indecomposable());
    let mut found: BTreeMap<Label, usize> = BTreeMap::new();
    let mut c_fail = Vec::new();
    let mut d_fail = Vec::new();
    let mut heights: BTreeMap<Vec<u32>, Label> = BTreeMap::new();
    let mut e_fail = Vec::new();
    for c in indec {
        let label = *c.report.labels.keys().next().expect("one label");
        *found.entry(label).or_default() += 1;
        if c.representative.b().partition() != label.partition().as_slice() {
            c_fail.push(format!("{} classified as {label} with the wrong shape", c.representative));
        }
        let a = c.representative.a();
        if a.is_zero() {
            continue;
        }
        let Some(g) = cyclic_generator(a) else {
            d_fail.push(format!("{} is indecomposable with non-cyclic A", c.representative));
            continue;
        };
        let h = c.representative.b().height_sequence(&g)?;
        if h != label.expected_heights() {
            e_fail.push(format!("{label}: height sequence {h:?}, expected {:?}", label.expected_heights()));
        }
        if let Some(prev) = heights.insert(h.clone(), label) {
            e_fail.push(format!("{prev} and {label} share height sequence {h:?}"));
        }
    }
    for (label, count) in &found {
        if *count != 1 || !expected.contains(label) {
            c_fail.push(format!("{label} found {count} times"));
        }
    }
    for label in &expected {
        if !found.contains_key(label) {
            c_fail.push(format!("{label} missing from the census"));
        }
    }
    let checks = vec![
        check("classification constant on orbits", a),
        check("distinct orbits have distinct reports", b_fail),
        check("indecomposables match the label list", c_fail),
        check("indecomposables have A zero or cyclic", d_fail),
        check("height sequences distinguish indecomposables", e_fail),
    ];
    Ok(Census { spec, caps, shapes, checks })
}
