//! The `subpair` command line: pair documents in, reports out.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functor::{apply_f, classify_s2, classify_with_witness};
use crate::homs::{HomSpace, PairMorphism};
use crate::module::LambdaModule;
use crate::oracle::{cardinality_cap, is_isomorphic_bruteforce, verify_census, CensusCaps};
use crate::pairs::{DecompReport, Label, Pair};
use crate::ring::{RingKind, RingSpec};

/// Largest `|B|` for the brute-force spot check of `classify --check`.
pub const SPOT_CHECK_CAP: u128 = 256;

#[derive(Parser, Debug)]
#[command(name = "subpair", version, about = "Classify modules over Z/p^n or F_p[T]/(T^n) with a submodule killed by p^2")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Zmod,
    Truncpoly,
}

impl From<RingArg> for RingKind {
    fn from(r: RingArg) -> Self {
        match r {
            RingArg::Zmod => RingKind::Zmod,
            RingArg::Truncpoly => RingKind::Truncpoly,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decompose a pair into indecomposables.
    Classify {
        file: PathBuf,
        /// Also construct an explicit isomorphism onto the direct sum.
        #[arg(long)]
        witness: bool,
        /// Verify the witness and, for small B, compare with brute force.
        #[arg(long)]
        check: bool,
    },
    /// List the indecomposable pairs for a given n.
    Indecomposables {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = RingArg::Zmod)]
        ring: RingArg,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Morphism lengths between two pairs.
    Hom { x: PathBuf, y: PathBuf },
    /// Exhaustive census of all pairs over every B within the caps.
    Census(CensusArgs),
    /// Classify a pair over Z/p^n and its digit mirror over F_p[T]/(T^n).
    CompareRings {
        /// Pair over zmod; without it every label pair is compared.
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        n: u32,
    },
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = RingArg::Zmod)]
    pub ring: RingArg,
    #[arg(long, default_value_t = 3)]
    pub max_parts: usize,
    #[arg(long)]
    pub max_part: Option<u32>,
    #[arg(long)]
    pub max_length: Option<u32>,
}

/// A number given either as a JSON integer or as a decimal string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn value(&self, location: &str) -> Result<i128> {
        match self {
            Num::Int(v) => Ok(*v as i128),
            Num::Str(s) => s.trim().parse().map_err(|_| Error::parse(location, format!("'{s}' is not an integer"))),
        }
    }

    fn unsigned<T: TryFrom<i128>>(&self, location: &str) -> Result<T> {
        let v = self.value(location)?;
        T::try_from(v).map_err(|_| Error::parse(location, format!("{v} is out of range")))
    }
}

/// A coordinate: an integer over `zmod`, a little-endian coefficient array
/// over `truncpoly`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Scalar(Num),
    Poly(Vec<Num>),
}

#[derive(Clone, Debug, Deserialize)]
pub struct RingDocument {
    pub kind: String,
    pub p: Num,
    pub n: Num,
}

#[derive(Clone, Debug, Deserialize)]
pub struct PairDocument {
    pub ring: RingDocument,
    #[serde(rename = "B")]
    pub b: Vec<Num>,
    #[serde(rename = "A", default)]
    pub a: Vec<Vec<Coord>>,
    pub m: Option<Num>,
}

impl PairDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn ring(&self) -> Result<RingSpec> {
        let kind = match self.ring.kind.as_str() {
            "zmod" => RingKind::Zmod,
            "truncpoly" => RingKind::Truncpoly,
            other => return Err(Error::parse("ring.kind", format!("unknown ring kind '{other}'"))),
        };
        let p = self.ring.p.unsigned("ring.p")?;
        let n = self.ring.n.unsigned("ring.n")?;
        RingSpec::new(kind, p, n).map_err(|e| Error::parse("ring", e.to_string()))
    }

    fn coord(spec: &RingSpec, c: &Coord, l: u32, location: &str) -> Result<u64> {
        let p = spec.p() as i128;
        match (spec.kind(), c) {
            (RingKind::Zmod, Coord::Scalar(v)) => {
                let v = v.value(location)?;
                let order = spec.order(l) as i128;
                if !(0..order).contains(&v) {
                    return Err(Error::parse(location, format!("{v} is not reduced modulo {order}")));
                }
                Ok(v as u64)
            }
            (RingKind::Truncpoly, Coord::Poly(coeffs)) => {
                let mut digits = Vec::with_capacity(coeffs.len());
                for (i, c) in coeffs.iter().enumerate() {
                    let at = format!("{location}[{i}]");
                    let v = c.value(&at)?;
                    if !(0..p).contains(&v) {
                        return Err(Error::parse(at, format!("coefficient {v} is not in 0..{p}")));
                    }
                    if v != 0 && i as u32 >= l {
                        return Err(Error::parse(at, format!("T^{i} vanishes in a component of length {l}")));
                    }
                    digits.push(v as u64);
                }
                digits.truncate(l as usize);
                Ok(spec.from_digits(&digits))
            }
            (RingKind::Zmod, Coord::Poly(_)) => Err(Error::parse(location, "zmod coordinates are integers")),
            (RingKind::Truncpoly, Coord::Scalar(_)) => {
                Err(Error::parse(location, "truncpoly coordinates are coefficient arrays"))
            }
        }
    }

    pub fn to_pair(&self) -> Result<Pair> {
        let spec = self.ring()?;
        let partition = self
            .b
            .iter()
            .enumerate()
            .map(|(i, l)| l.unsigned::<u32>(&format!("B[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let b = LambdaModule::new(spec, partition.clone()).map_err(|e| Error::parse("B", e.to_string()))?;
        let mut gens = Vec::with_capacity(self.a.len());
        for (k, g) in self.a.iter().enumerate() {
            if g.len() != partition.len() {
                return Err(Error::parse(
                    format!("A[{k}]"),
                    format!("has {} coordinates, B has {} components", g.len(), partition.len()),
                ));
            }
            let row = g
                .iter()
                .zip(&partition)
                .enumerate()
                .map(|(i, (c, &l))| Self::coord(&spec, c, l, &format!("A[{k}][{i}]")))
                .collect::<Result<Vec<_>>>()?;
            gens.push(row);
        }
        let m = match &self.m {
            Some(m) => m.unsigned("m")?,
            None => 2,
        };
        if m > 2 {
            return Err(Error::parse("m", "only pairs with p^2 A = 0 are supported"));
        }
        let a = crate::module::Submodule::generated(&b, &gens)?;
        Pair::new(a, m).map_err(|e| Error::parse("A", e.to_string()))
    }
}

pub fn read_pair(path: &Path) -> Result<Pair> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    PairDocument::from_json(&text)
        .map_err(|e| match e {
            Error::Parse { location, message } => Error::parse(format!("{}: {location}", path.display()), message),
            e => e,
        })?
        .to_pair()
}

#[derive(Serialize)]
struct RingOut {
    kind: String,
    p: u64,
    n: u32,
}

#[derive(Serialize)]
struct PairOut {
    ring: RingOut,
    #[serde(rename = "B")]
    b: Vec<u32>,
    #[serde(rename = "A")]
    a: Vec<Vec<serde_json::Value>>,
    m: u32,
}

fn code_json(spec: &RingSpec, code: u64, l: u32) -> serde_json::Value {
    match spec.kind() {
        RingKind::Zmod => code.into(),
        RingKind::Truncpoly => {
            let d = spec.digits(code);
            serde_json::Value::from(d[..l as usize].to_vec())
        }
    }
}

fn matrix_json(spec: &RingSpec, target: &LambdaModule, rows: &[Vec<u64>]) -> Vec<Vec<serde_json::Value>> {
    rows.iter()
        .map(|r| r.iter().zip(target.partition()).map(|(&c, &l)| code_json(spec, c, l)).collect())
        .collect()
}

fn pair_out(x: &Pair) -> PairOut {
    let spec = x.spec();
    PairOut {
        ring: RingOut { kind: spec.kind().to_string(), p: spec.p(), n: spec.n() },
        b: x.b().partition().to_vec(),
        a: matrix_json(spec, x.b(), &x.a().gens()),
        m: x.m(),
    }
}

#[derive(Serialize)]
struct LabelOut {
    label: String,
    multiplicity: usize,
    partition: Vec<u32>,
    /// Height sequence of a generator of the summand's `A`, when nonzero.
    heights: Vec<u32>,
}

#[derive(Serialize)]
struct WitnessOut {
    forward: Vec<Vec<serde_json::Value>>,
    backward: Vec<Vec<serde_json::Value>>,
    target_b: Vec<u32>,
}

#[derive(Serialize, Default)]
struct ChecksOut {
    consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
}

#[derive(Serialize)]
struct ClassifyOut {
    input: PairOut,
    decomposition: String,
    labels: Vec<LabelOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessOut>,
    checks: ChecksOut,
}

fn label_out(spec: RingSpec, label: Label, multiplicity: usize) -> Result<LabelOut> {
    let x = label.pair(spec)?;
    let heights = match x.a().gens().first() {
        Some(g) if x.a().is_cyclic() => {
            // the Howell generator of largest order generates a cyclic A
            let g = x.a().gens().into_iter().max_by_key(|g| x.b().order_exponent(g)).unwrap_or(g.clone());
            x.b().height_sequence(&g)?
        }
        _ => Vec::new(),
    };
    Ok(LabelOut { label: label.to_string(), multiplicity, partition: label.partition(), heights })
}

fn labels_out(spec: RingSpec, report: &DecompReport) -> Result<Vec<LabelOut>> {
    report.labels.iter().map(|(&l, &c)| label_out(spec, l, c)).collect()
}

/// Outcome of a command: the report, and whether every verification passed.
pub struct Outcome {
    pub json: serde_json::Value,
    pub text: String,
    pub passed: bool,
}

fn outcome<T: Serialize>(value: &T, text: String, passed: bool) -> Outcome {
    Outcome { json: serde_json::to_value(value).expect("serializable"), text, passed }
}

pub fn cmd_classify(path: &Path, witness: bool, check: bool) -> Result<Outcome> {
    let x = read_pair(path)?;
    classify(&x, witness, check)
}

pub fn classify(x: &Pair, witness: bool, check: bool) -> Result<Outcome> {
    let spec = *x.spec();
    let report = if witness || check { classify_with_witness(x)? } else { classify_s2(x)? };
    let mut checks = ChecksOut { consistent: report.check_consistent(x).is_ok(), ..Default::default() };
    let mut text = format!("pair {x}\ndecomposition {report}\n");
    if check {
        let verified = report.witness.as_ref().is_some_and(|w| w.verify());
        checks.witness_verified = Some(verified);
        text.push_str(&format!("witness verified: {verified}\n"));
        let oracle = if x.b().cardinality() <= SPOT_CHECK_CAP.min(cardinality_cap()) {
            let target = report.target(spec)?.pair;
            if is_isomorphic_bruteforce(x, &target)? { "agree" } else { "disagree" }
        } else {
            "skipped: B above the brute-force cap"
        };
        checks.oracle = Some(oracle.to_string());
        text.push_str(&format!("oracle: {oracle}\n"));
    }
    let passed = checks.consistent && checks.witness_verified != Some(false) && checks.oracle.as_deref() != Some("disagree");
    let witness_out = report.witness.as_ref().map(|w| {
        let t = w.forward.target();
        WitnessOut {
            forward: matrix_json(&spec, t.b(), w.forward.matrix()),
            backward: matrix_json(&spec, x.b(), w.backward.matrix()),
            target_b: t.b().partition().to_vec(),
        }
    });
    if let Some(w) = &report.witness {
        text.push_str(&format!("witness onto {}\n", w.forward.target()));
    }
    let out = ClassifyOut {
        input: pair_out(x),
        decomposition: report.to_string(),
        labels: labels_out(spec, &report)?,
        witness: witness_out,
        checks,
    };
    Ok(outcome(&out, text, passed))
}

#[derive(Serialize)]
struct IndecOut {
    ring: RingOut,
    count: usize,
    expected: u32,
    indecomposables: Vec<IndecEntry>,
}

#[derive(Serialize)]
struct IndecEntry {
    label: String,
    pair: PairOut,
    heights: Vec<u32>,
    classified_as: String,
}

pub fn cmd_indecomposables(kind: RingKind, p: u64, n: u32) -> Result<Outcome> {
    let spec = RingSpec::new(kind, p, n).map_err(|e| Error::parse("--n/--p", e.to_string()))?;
    let expected = (n * n + 3 * n) / 2;
    let mut entries = Vec::new();
    let mut passed = true;
    let mut text = String::new();
    for label in Label::all(n) {
        let x = label.pair(spec)?;
        let report = classify_s2(&x)?;
        passed &= report.labels.len() == 1 && report.labels.get(&label) == Some(&1);
        let heights = label_out(spec, label, 1)?.heights;
        text.push_str(&format!("{label}  {x}  heights {heights:?}\n"));
        entries.push(IndecEntry { label: label.to_string(), pair: pair_out(&x), heights, classified_as: report.to_string() });
    }
    passed &= entries.len() == expected as usize;
    text.push_str(&format!("{} indecomposables (expected {expected})\n", entries.len()));
    let out = IndecOut {
        ring: RingOut { kind: kind.to_string(), p, n },
        count: entries.len(),
        expected,
        indecomposables: entries,
    };
    Ok(outcome(&out, text, passed))
}

#[derive(Serialize)]
struct HomOut {
    hom_length: u32,
    ideal_length: u32,
    quotient_dim: u32,
    rep_hom_dim: usize,
    quotient_equals_rep_hom: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    contains_identity: Option<bool>,
}

pub fn cmd_hom(xp: &Path, yp: &Path) -> Result<Outcome> {
    let x = read_pair(xp)?;
    let y = read_pair(yp)?;
    hom(&x, &y)
}

pub fn hom(x: &Pair, y: &Pair) -> Result<Outcome> {
    if x.spec() != y.spec() {
        return Err(Error::RingMismatch(*x.spec(), *y.spec()));
    }
    let h = HomSpace::new(x, y)?;
    let quotient_dim = h.quotient_dim()?;
    let rep_hom_dim = apply_f(x)?.hom_dim(&apply_f(y)?)?;
    let contains_identity = (x == y).then(|| h.contains(&PairMorphism::identity(x)));
    let out = HomOut {
        hom_length: h.length(),
        ideal_length: h.ideal_length(),
        quotient_dim,
        rep_hom_dim,
        quotient_equals_rep_hom: quotient_dim as usize == rep_hom_dim,
        contains_identity,
    };
    let text = format!(
        "length Hom = {}\nlength N = {}\ndim Hom/N = {}\ndim Hom(F x, F y) = {}\n",
        out.hom_length, out.ideal_length, out.quotient_dim, out.rep_hom_dim
    );
    let passed = out.quotient_equals_rep_hom && contains_identity != Some(false);
    Ok(outcome(&out, text, passed))
}

#[derive(Serialize)]
struct CensusOut {
    ring: RingOut,
    max_parts: usize,
    max_part: u32,
    max_length: Option<u32>,
    pairs: usize,
    shapes: Vec<ShapeOut>,
    indecomposables: Vec<String>,
    checks: Vec<CheckOut>,
    passed: bool,
}

#[derive(Serialize)]
struct ShapeOut {
    #[serde(rename = "B")]
    b: Vec<u32>,
    submodules: usize,
    classes: Vec<ClassOut>,
}

#[derive(Serialize)]
struct ClassOut {
    decomposition: String,
    orbit_size: usize,
}

#[derive(Serialize)]
struct CheckOut {
    check: String,
    passed: bool,
    failures: Vec<String>,
}

pub fn cmd_census(args: &CensusArgs) -> Result<Outcome> {
    let spec = RingSpec::new(args.ring.into(), args.p, args.n).map_err(|e| Error::parse("--p/--n", e.to_string()))?;
    let caps = CensusCaps {
        max_parts: args.max_parts,
        max_part: args.max_part.unwrap_or(args.n).min(args.n),
        max_length: args.max_length,
    };
    let census = verify_census(spec, caps)?;
    let mut text = format!("census over {spec}: {} pairs in {} shapes\n", census.pair_count(), census.shapes.len());
    for c in &census.checks {
        text.push_str(&format!("{} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
        for f in &c.failures {
            text.push_str(&format!("  {f}\n"));
        }
    }
    let out = CensusOut {
        ring: RingOut { kind: spec.kind().to_string(), p: spec.p(), n: spec.n() },
        max_parts: caps.max_parts,
        max_part: caps.max_part,
        max_length: caps.max_length,
        pairs: census.pair_count(),
        shapes: census
            .shapes
            .iter()
            .map(|s| ShapeOut {
                b: s.partition.clone(),
                submodules: s.submodule_count,
                classes: s
                    .classes
                    .iter()
                    .map(|c| ClassOut { decomposition: c.report.to_string(), orbit_size: c.orbit_size })
                    .collect(),
            })
            .collect(),
        indecomposables: census.indecomposables().iter().map(|c| c.report.to_string()).collect(),
        checks: census
            .checks
            .iter()
            .map(|c| CheckOut { check: c.name.to_string(), passed: c.passed, failures: c.failures.clone() })
            .collect(),
        passed: census.passed(),
    };
    Ok(outcome(&out, text, census.passed()))
}

/// The pair over `F_p[T]/(T^n)` whose `A` is generated by the canonical
/// generators of `x`, with each `p`-adic digit `c_i` read as the
/// coefficient of `T^i`. This is not a ring isomorphism.
pub fn mirror_to_truncpoly(x: &Pair) -> Result<Pair> {
    let spec = x.spec();
    if spec.kind() != RingKind::Zmod {
        return Err(Error::parse("ring.kind", "compare-rings expects a pair over zmod"));
    }
    let t = RingSpec::truncpoly(spec.p(), spec.n())?;
    // digit codes coincide, so the canonical generators carry over verbatim
    Pair::from_gens(t, x.b().partition().to_vec(), &x.a().gens(), x.m())
}

#[derive(Serialize)]
struct CompareEntry {
    input: PairOut,
    mirror: PairOut,
    zmod: String,
    truncpoly: String,
    identical: bool,
}

#[derive(Serialize)]
struct CompareOut {
    comparisons: Vec<CompareEntry>,
    identical: bool,
}

fn compare(x: &Pair) -> Result<(CompareEntry, String)> {
    if x.spec().kind() != RingKind::Zmod {
        return Err(Error::parse("ring.kind", "compare-rings expects a pair over zmod"));
    }
    let mirror = mirror_to_truncpoly(x).map_err(|e| Error::inconsistent(format!("mirror of {x} is not a pair: {e}")))?;
    let rz = classify_s2(x)?;
    let rt = classify_s2(&mirror)?;
    let identical = rz.labels == rt.labels;
    let text = format!("{x}\n  zmod      {rz}\n  truncpoly {rt}\n  {}\n", if identical { "identical" } else { "DIFFERENT" });
    let entry = CompareEntry {
        input: pair_out(x),
        mirror: pair_out(&mirror),
        zmod: rz.to_string(),
        truncpoly: rt.to_string(),
        identical,
    };
    Ok((entry, text))
}

/// Whether `x` and its truncpoly mirror have the same decomposition.
pub fn rings_agree(x: &Pair) -> Result<bool> {
    Ok(compare(x)?.0.identical)
}

pub fn cmd_compare_rings(file: Option<&Path>, p: u64, n: u32) -> Result<Outcome> {
    let inputs = match file {
        Some(path) => vec![read_pair(path)?],
        None => {
            let spec = RingSpec::zmod(p, n).map_err(|e| Error::parse("--p/--n", e.to_string()))?;
            Label::all(n).iter().map(|l| l.pair(spec)).collect::<Result<Vec<_>>>()?
        }
    };
    let mut comparisons = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for x in &inputs {
        let (entry, t) = compare(x)?;
        all &= entry.identical;
        text.push_str(&t);
        comparisons.push(entry);
    }
    let out = CompareOut { comparisons, identical: all };
    Ok(outcome(&out, text, all))
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Classify { file, witness, check } => cmd_classify(file, *witness, *check),
        Command::Indecomposables { n, ring, p } => cmd_indecomposables((*ring).into(), *p, *n),
        Command::Hom { x, y } => cmd_hom(x, y),
        Command::Census(args) => cmd_census(args),
        Command::CompareRings { file, p, n } => cmd_compare_rings(file.as_deref(), *p, *n),
    }
}

/// Runs a command, printing its report, and returns the exit code.
pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> i32 {
    match execute(cli) {
        Ok(o) => {
            let body = match cli.format {
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable") + "\n",
                Format::Text => o.text,
            };
            let _ = out.write_all(body.as_bytes());
            if o.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Inconsistent(_) => 1,
                _ => 2,
            }
        }
    }
}
