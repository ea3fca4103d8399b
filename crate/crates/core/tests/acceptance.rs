//! Acceptance criteria 1-10. Each test prints one PASS/FAIL line.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subpair::cli::{cmd_indecomposables, rings_agree};
use subpair::functor::{apply_f, apply_f_morphism, classify_s2, classify_with_witness, pair_to_rep_label, TotalSpace};
use subpair::homs::{nilpotency_check, HomSpace, PairMorphism};
use subpair::module::{LambdaModule, Submodule};
use subpair::oracle::{elementary_automorphisms, enumerate_submodules, is_isomorphic_bruteforce, orbits, verify_census, CensusCaps};
use subpair::pairs::{direct_sum, make_picket, DecompReport, Label, Pair};
use subpair::posetrep::RepLabel;
use subpair::ring::RingKind;
use subpair::RingSpec;

/// Writes past the test harness capture so the line always shows.
fn verdict(criterion: u32, what: &str, ok: bool, detail: &str) {
    let line = format!("{} criterion {criterion}: {what} ({detail})\n", if ok { "PASS" } else { "FAIL" });
    std::io::stdout().lock().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t <= limit, format!("{:.2?} of {:?}", t, limit))
}

fn z(p: u64, n: u32) -> RingSpec {
    RingSpec::zmod(p, n).unwrap()
}

fn apply_rows(b: &LambdaModule, rows: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    x.iter().zip(rows).fold(vec![0; b.rank()], |acc, (&c, r)| b.add(&acc, &b.scale(c, r)))
}

/// A random automorphism of `B`, as a product of elementary ones.
fn random_automorphism(b: &LambdaModule, rng: &mut impl Rng) -> Vec<Vec<u64>> {
    let gens = elementary_automorphisms(b);
    let mut g: Vec<Vec<u64>> = (0..b.rank()).map(|i| b.unit_vector(i).into_coords()).collect();
    if gens.is_empty() {
        return g;
    }
    for _ in 0..4 * b.rank() * b.rank() + 2 {
        let h = gens.choose(rng).unwrap();
        g = g.iter().map(|row| apply_rows(b, h, row)).collect();
    }
    g
}

fn scramble(x: &Pair, rng: &mut impl Rng) -> Pair {
    let b = x.b();
    let g = random_automorphism(b, rng);
    let gens: Vec<Vec<u64>> = x.a().gens().iter().map(|v| apply_rows(b, &g, v)).collect();
    Pair::new(Submodule::generated(b, &gens).unwrap(), x.m()).unwrap()
}

fn random_labels(n: u32, max: usize, rng: &mut impl Rng) -> Vec<Label> {
    let all = Label::all(n);
    (0..rng.gen_range(1..=max)).map(|_| *all.choose(rng).unwrap()).collect()
}

fn sum_of(spec: RingSpec, labels: &[Label]) -> Pair {
    let pairs: Vec<Pair> = labels.iter().map(|l| l.pair(spec).unwrap()).collect();
    direct_sum(spec, &pairs).unwrap().pair
}

fn random_small_pair(spec: RingSpec, rng: &mut impl Rng) -> Pair {
    let labels = random_labels(spec.n(), 2, rng);
    scramble(&sum_of(spec, &labels), rng)
}

#[test]
fn criterion_01_indecomposable_census() {
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut ok = true;
    for n in 1..=6 {
        let out = cmd_indecomposables(RingKind::Zmod, 2, n).unwrap();
        let count = out.json["count"].as_u64().unwrap();
        ok &= out.passed && count == u64::from((n * n + 3 * n) / 2);
        counts.push(count);
    }
    ok &= counts == [2, 5, 9, 14, 20, 27];
    let (fast, t) = within(start, Duration::from_secs(1));
    verdict(1, "one indecomposable per label, each classified to itself", ok && fast, &format!("counts {counts:?}, {t}"));
}

#[test]
fn criterion_02_poset_census() {
    let start = Instant::now();
    let mut ok = true;
    let mut seen = Vec::new();
    for n in 2..=6u32 {
        let all = RepLabel::all(n);
        let filtered = all.iter().filter(|l| l.rep(2, n).unwrap().satisfies_rep_prime()).count();
        ok &= 2 * all.len() as u32 == n * n + 7 * n && 2 * filtered as u32 == n * n + 3 * n;
        seen.push((all.len(), filtered));
    }
    let (fast, t) = within(start, Duration::from_secs(1));
    verdict(2, "indecomposable representations number n²/2+7n/2, and n²/2+3n/2 after rep'", ok && fast, &format!("{seen:?}, {t}"));
}

#[test]
fn criterion_03_functor_table() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for p in [2u64, 3] {
        for n in 1..=6 {
            for label in Label::all(n) {
                let rep = apply_f(&label.pair(z(p, n)).unwrap()).unwrap();
                let rl = pair_to_rep_label(label);
                let model = rl.rep(p, n).unwrap();
                let by_invariants = rep.multiplicities().unwrap() == BTreeMap::from([(rl, 1)]);
                let by_basis = rep.find_iso(&model).unwrap().is_some_and(|h| {
                    rep.is_morphism(&model, &h) && h.inverse().is_some_and(|g| model.is_morphism(&rep, &g))
                });
                if !(by_invariants && by_basis) {
                    failures.push(format!("p={p} {label} -> {rl}"));
                }
                checked += 1;
            }
        }
    }
    let (fast, t) = within(start, Duration::from_secs(5));
    verdict(3, "F(label) matches the correspondence table", failures.is_empty() && fast, &format!("{checked} labels, failures {failures:?}, {t}"));
}

#[test]
fn criterion_04_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut recovered = 0;
    let mut witnesses = 0;
    let trials = 1000;
    for k in 0..trials {
        let p = [2u64, 3][k % 2];
        let n = (k / 2 % 4) as u32 + 1;
        let spec = z(p, n);
        let labels = random_labels(n, 4, &mut rng);
        let x = scramble(&sum_of(spec, &labels), &mut rng);
        let report = classify_with_witness(&x).unwrap();
        if report.labels == DecompReport::from_labels(labels).labels {
            recovered += 1;
        }
        let w = report.witness.unwrap();
        if w.verify() && w.forward.source() == &x && w.backward.target() == &x {
            witnesses += 1;
        }
    }
    let ok = recovered == trials && witnesses == trials;
    verdict(4, "scrambled direct sums are recovered, with verified witnesses", ok, &format!("{recovered}/{trials} recovered, {witnesses}/{trials} witnesses"));
}

#[test]
fn criterion_05_oracle_agreement() {
    let start = Instant::now();
    let spec = z(2, 3);
    let caps = CensusCaps { max_parts: 5, max_part: 3, max_length: Some(5) };
    let census = verify_census(spec, caps).unwrap();
    let mut failures: Vec<String> = census.checks.iter().filter(|c| !c.passed).flat_map(|c| c.failures.clone()).collect();
    // orbits of the generating automorphisms are exactly the isomorphism classes
    let mut compared = 0;
    for shape in &census.shapes {
        let reps: Vec<&Pair> = shape.classes.iter().map(|c| &c.representative).collect();
        for (i, x) in reps.iter().enumerate() {
            for y in &reps[i + 1..] {
                compared += 1;
                if is_isomorphic_bruteforce(x, y).unwrap() {
                    failures.push(format!("{x} and {y} lie in different orbits but are isomorphic"));
                }
            }
        }
    }
    for c in census.indecomposables() {
        let label = *c.report.labels.keys().next().unwrap();
        let expected = match label {
            Label::P { m, l } => (l - m..l).collect::<Vec<_>>(),
            Label::Q { s, t } => vec![s - 1, t - 1],
        };
        let a = c.representative.a();
        if !a.is_zero() {
            let g = a.elements().into_iter().find(|g| &Submodule::generated(a.module(), std::slice::from_ref(g)).unwrap() == a);
            match g {
                Some(g) if c.representative.b().height_sequence(&g).unwrap() == expected => {}
                _ => failures.push(format!("{label}: height sequence differs from {expected:?}")),
            }
        }
    }
    let (fast, t) = within(start, Duration::from_secs(600));
    verdict(
        5,
        "exhaustive census agrees with brute-force orbits",
        failures.is_empty() && fast,
        &format!("{} pairs, {} classes, {compared} brute-force comparisons, failures {failures:?}, {t}", census.pair_count(), census.shapes.iter().map(|s| s.classes.len()).sum::<usize>()),
    );
}

#[test]
fn criterion_06_lifting_isomorphism() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    for p in [2u64, 3] {
        for n in 1..=4 {
            let spec = z(p, n);
            let pickets: Vec<Pair> = Label::all(n)
                .into_iter()
                .filter_map(|l| match l {
                    Label::P { m, l } if m >= 1 => Some(make_picket(spec, m, l).unwrap()),
                    _ => None,
                })
                .collect();
            for x in &pickets {
                // on this domain A⁺ = A, so f(A⁺) ⊆ C⁻ reads f(A) ⊆ rad C
                assert!(x.socle_contained() && &x.a_plus() == x.a());
                for y in &pickets {
                    let q = HomSpace::new(x, y).unwrap().quotient_dim().unwrap();
                    let h = apply_f(x).unwrap().hom_dim(&apply_f(y).unwrap()).unwrap();
                    if q as usize != h {
                        failures.push(format!("{x} -> {y}: {q} vs {h}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    let (fast, t) = within(start, Duration::from_secs(30));
    verdict(6, "dim Hom/N equals dim Hom(F x, F y) on socle-contained pickets", failures.is_empty() && fast, &format!("{checked} ordered pairs, failures {failures:?}, {t}"));
}

#[test]
fn criterion_07_nilpotency() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut zero = 0;
    let chains = 500;
    for k in 0..chains {
        let p = [2u64, 3][k % 2];
        let n = (k / 2 % 4) as u32 + 1;
        let spec = z(p, n);
        let objs: Vec<Pair> = (0..=n + 1).map(|_| random_small_pair(spec, &mut rng)).collect();
        let chain: Vec<PairMorphism> = objs
            .windows(2)
            .map(|w| HomSpace::new(&w[0], &w[1]).unwrap().random_in_ideal(&mut rng))
            .collect();
        if nilpotency_check(&chain).unwrap() {
            zero += 1;
        }
    }
    let mut long_nonzero = true;
    for n in 2..=4 {
        let spec = z(2, n);
        let p1 = make_picket(spec, 1, n).unwrap();
        let p2 = make_picket(spec, 2, n).unwrap();
        let mut chain = vec![PairMorphism::new(&p1, &p2, vec![vec![1]]).unwrap()];
        chain.extend((1..n).map(|_| PairMorphism::mul_p_pow(&p2, 1)));
        long_nonzero &= chain.len() == n as usize && !nilpotency_check(&chain).unwrap();
    }
    verdict(7, "(n+1)-fold composites in N vanish and an n-chain survives", zero == chains && long_nonzero, &format!("{zero}/{chains} zero, explicit n-chain nonzero: {long_nonzero}"));
}

#[test]
fn criterion_08_kernel_characterization() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 1000;
    let (mut agree, mut in_n, mut not_in_n) = (0, 0, 0);
    for k in 0..trials {
        let p = [2u64, 3][k % 2];
        let n = (k / 2 % 4) as u32 + 1;
        let spec = z(p, n);
        let (x, y) = (random_small_pair(spec, &mut rng), random_small_pair(spec, &mut rng));
        let hom = HomSpace::new(&x, &y).unwrap();
        let f = if rng.gen_bool(0.5) { hom.random(&mut rng) } else { hom.random_in_ideal(&mut rng) };
        let killed = apply_f_morphism(&f).unwrap().is_zero();
        if f.in_ideal_n() {
            in_n += 1;
        } else {
            not_in_n += 1;
        }
        if killed == f.in_ideal_n() {
            agree += 1;
        }
    }
    let ok = agree == trials && in_n > 0 && not_in_n > 0;
    verdict(8, "F(f) = 0 exactly when f lies in N", ok, &format!("{agree}/{trials} agree, {in_n} in N, {not_in_n} outside"));
}

#[test]
fn criterion_09_ring_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut labels_ok = 0;
    let mut label_total = 0;
    for n in 1..=4 {
        for label in Label::all(n) {
            label_total += 1;
            if rings_agree(&label.pair(z(2, n)).unwrap()).unwrap() {
                labels_ok += 1;
            }
        }
    }
    let mut random_ok = 0;
    let trials = 200;
    for _ in 0..trials {
        let n = rng.gen_range(1..=4);
        let spec = z(2, n);
        let mut part: Vec<u32> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=n)).collect();
        part.sort_by(|a, b| b.cmp(a));
        let b = LambdaModule::new(spec, part.clone()).unwrap();
        let gens: Vec<Vec<u64>> = (0..rng.gen_range(0..=3))
            .map(|_| part.iter().map(|&l| rng.gen_range(0..spec.order(l))).collect())
            .collect();
        let a = Submodule::generated(&b, &gens).unwrap();
        let e = (0..=n).find(|&e| a.scalar_image(e + 2).is_zero()).unwrap();
        let x = Pair::new(a.scalar_image(e), 2).unwrap();
        if rings_agree(&x).unwrap() {
            random_ok += 1;
        }
    }
    let ok = labels_ok == label_total && random_ok == trials;
    verdict(9, "Z/p^n and F_p[T]/(T^n) give identical decompositions", ok, &format!("labels {labels_ok}/{label_total}, random {random_ok}/{trials}"));
}

#[test]
fn criterion_10_tilde_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let trials = 1000;
    let mut violations = Vec::new();
    let (mut strict_mono, mut strict_meet, mut strict_sum) = (0, 0, 0);
    let (mut cond_meet, mut cond_sum) = (0, 0);
    let random_sub = |b: &LambdaModule, rng: &mut ChaCha8Rng| {
        let elems: Vec<Vec<u64>> = b.elements().collect();
        let gens: Vec<Vec<u64>> = (0..rng.gen_range(0..=2)).map(|_| elems.choose(rng).unwrap().clone()).collect();
        Submodule::generated(b, &gens).unwrap()
    };
    for k in 0..trials {
        let p = [2u64, 3][k % 2];
        let n = rng.gen_range(1..=4);
        let x = random_small_pair(z(p, n), &mut rng);
        let b = x.b();
        let t = TotalSpace::new(&x).unwrap();
        let tl = |c: &Submodule| t.tilde(c).unwrap();
        let mut c = random_sub(b, &mut rng);
        let mut c2 = random_sub(b, &mut rng);
        // steer towards the conditional clauses
        match rng.gen_range(0..4) {
            0 => c = c.sum(&x.a_minus()).unwrap(),
            1 => c2 = c2.intersect(&x.a_plus()).unwrap(),
            _ => {}
        }
        let meet = c.intersect(&c2).unwrap();
        let join = c.sum(&c2).unwrap();
        // (1) on the inclusions C ∩ C' ⊆ C ⊆ C + C'
        for (small, big) in [(&meet, &c), (&c, &join)] {
            if !tl(small).is_subset(&tl(big)) {
                violations.push(format!("monotonicity fails for {small} ⊆ {big} in {x}"));
            } else if tl(small) != tl(big) {
                strict_mono += 1;
            }
        }
        // (2)
        let lhs = tl(&meet);
        let rhs = tl(&c).intersect(&tl(&c2));
        if !lhs.is_subset(&rhs) {
            violations.push(format!("meet inclusion fails for {c}, {c2} in {x}"));
        }
        if x.a_minus().is_subset(&c) || x.a_minus().is_subset(&c2) {
            cond_meet += 1;
            if lhs != rhs {
                violations.push(format!("meet equality fails for {c}, {c2} in {x}"));
            }
        } else if lhs != rhs {
            strict_meet += 1;
        }
        // (3)
        let lhs = tl(&c).sum(&tl(&c2));
        let rhs = tl(&join);
        if !lhs.is_subset(&rhs) {
            violations.push(format!("sum inclusion fails for {c}, {c2} in {x}"));
        }
        if c.is_subset(&x.a_plus()) || c2.is_subset(&x.a_plus()) {
            cond_sum += 1;
            if lhs != rhs {
                violations.push(format!("sum equality fails for {c}, {c2} in {x}"));
            }
        } else if lhs != rhs {
            strict_sum += 1;
        }
    }
    let ok = violations.is_empty() && strict_mono > 0 && strict_meet > 0 && strict_sum > 0 && cond_meet > 0 && cond_sum > 0;
    verdict(
        10,
        "tilde properties hold, strict inclusions are witnessed",
        ok,
        &format!(
            "{trials} triples, strict: monotone {strict_mono}, meet {strict_meet}, sum {strict_sum}; conditional cases: meet {cond_meet}, sum {cond_sum}; violations {violations:?}"
        ),
    );
}

#[test]
fn witness_survives_truncpoly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let spec = RingSpec::truncpoly([2u64, 3][rng.gen_range(0..2)], n).unwrap();
        let labels = random_labels(n, 3, &mut rng);
        let x = scramble(&sum_of(spec, &labels), &mut rng);
        let report = classify_with_witness(&x).unwrap();
        assert_eq!(report.labels, DecompReport::from_labels(labels).labels);
        assert!(report.witness.unwrap().verify());
    }
}

#[test]
fn brute_force_classes_at_p3() {
    // spot census at p = 3: every pair over Z/9 ⊕ Z/3 classified by orbit
    let spec = z(3, 2);
    let b = LambdaModule::new(spec, vec![2, 1]).unwrap();
    let subs = enumerate_submodules(&b, 2).unwrap();
    for orbit in orbits(&b, &subs) {
        let reports: Vec<DecompReport> = orbit.iter().map(|&k| classify_s2(&Pair::new(subs[k].clone(), 2).unwrap()).unwrap()).collect();
        assert!(reports.iter().all(|r| r.labels == reports[0].labels));
    }
}
