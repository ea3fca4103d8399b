//! Arithmetic in the chain rings `Z/p^n` and `F_p[T]/(T^n)`.
//!
//! Both rings are commutative local uniserial rings of length `n` with
//! residue field `F_p`. Elements of either ring are encoded by a single
//! `u64` *code*: the base-`p` digit expansion `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`.
//! For `Z/p^n` the code is the canonical residue; for `F_p[T]/(T^n)` the
//! digits are the coefficients of `c_0 + c_1 T + ...`.
//!
//! With this encoding several operations coincide for both kinds:
//! the uniformizer `p` (resp. `T`) has code `p`, multiplication by a power
//! of the uniformizer is `code * p^e mod p^n`, reduction to `Λ/(p^e)` is
//! `code mod p^e`, and the valuation counts trailing zero digits.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible `p^n`.
pub const MAX_MODULUS: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    /// `Z/p^n`
    Zmod,
    /// `F_p[T]/(T^n)`
    Truncpoly,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Zmod => write!(f, "zmod"),
            RingKind::Truncpoly => write!(f, "truncpoly"),
        }
    }
}

/// The base ring `Λ`: its kind, residue characteristic `p` and length `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingSpec {
    kind: RingKind,
    p: u64,
    n: u32,
    modulus: u64,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Zmod => write!(f, "Z/{}^{}", self.p, self.n),
            RingKind::Truncpoly => write!(f, "F_{}[T]/(T^{})", self.p, self.n),
        }
    }
}

impl RingSpec {
    pub fn new(kind: RingKind, p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not a prime")));
        }
        if n == 0 {
            return Err(Error::InvalidRing("length n must be positive".into()));
        }
        let mut modulus = 1u64;
        for _ in 0..n {
            modulus = modulus
                .checked_mul(p)
                .filter(|&q| q <= MAX_MODULUS)
                .ok_or_else(|| Error::InvalidRing(format!("{p}^{n} exceeds 2^62")))?;
        }
        Ok(RingSpec { kind, p, n, modulus })
    }

    pub fn zmod(p: u64, n: u32) -> Result<Self> {
        Self::new(RingKind::Zmod, p, n)
    }

    pub fn truncpoly(p: u64, n: u32) -> Result<Self> {
        Self::new(RingKind::Truncpoly, p, n)
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `p^n`, the number of ring elements.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Code of `p^e` (or `T^e`); zero once `e >= n`.
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.n {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// `p^e` as an integer, for `e <= n`. This is the cardinality of `Λ/(p^e)`.
    pub fn order(&self, e: u32) -> u64 {
        self.p.pow(e.min(self.n))
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// The image of an integer under `Z -> Λ`.
    pub fn from_int(&self, v: i64) -> u64 {
        match self.kind {
            RingKind::Zmod => v.rem_euclid(self.modulus as i64) as u64,
            RingKind::Truncpoly => v.rem_euclid(self.p as i64) as u64,
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            RingKind::Zmod => {
                let s = a + b;
                if s >= self.modulus {
                    s - self.modulus
                } else {
                    s
                }
            }
            RingKind::Truncpoly if self.p == 2 => a ^ b,
            RingKind::Truncpoly => self.digitwise(a, b, |x, y| (x + y) % self.p),
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match self.kind {
            RingKind::Zmod => {
                if a == 0 {
                    0
                } else {
                    self.modulus - a
                }
            }
            RingKind::Truncpoly if self.p == 2 => a,
            RingKind::Truncpoly => self.digitwise(a, 0, |x, _| (self.p - x) % self.p),
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self.kind {
            RingKind::Zmod => ((a as u128 * b as u128) % self.modulus as u128) as u64,
            RingKind::Truncpoly => {
                let da = self.digits(a);
                let db = self.digits(b);
                let n = self.n as usize;
                let mut acc = vec![0u128; n];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate().take(n - i) {
                        acc[i + j] += x as u128 * y as u128;
                    }
                }
                let digits: Vec<u64> = acc.into_iter().map(|c| (c % self.p as u128) as u64).collect();
                self.from_digits(&digits)
            }
        }
    }

    /// `a * p^e`; identical for both kinds on codes.
    pub fn mul_p_pow(&self, a: u64, e: u32) -> u64 {
        if e >= self.n {
            return 0;
        }
        ((a as u128 * self.p.pow(e) as u128) % self.modulus as u128) as u64
    }

    /// The quotient `a / p^e`, for `valuation(a) >= e`. Any other preimage
    /// differs by an element of `p^{n-e}Λ`.
    pub fn div_p_pow(&self, a: u64, e: u32) -> u64 {
        debug_assert!(self.valuation(a) >= e);
        if e >= self.n {
            0
        } else {
            a / self.p.pow(e)
        }
    }

    /// Canonical image of `a` in `Λ/(p^e)`.
    pub fn reduce(&self, a: u64, e: u32) -> u64 {
        if e >= self.n {
            a
        } else {
            a % self.p.pow(e)
        }
    }

    /// Largest `v` with `a ∈ p^vΛ`; `n` for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// The unit `u` with `a = p^{v(a)} u`, chosen as `a / p^{v(a)}` on codes.
    pub fn unit_part(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(a / self.p.pow(self.valuation(a)))
    }

    pub fn inverse(&self, u: u64) -> Result<u64> {
        if !self.is_unit(u) {
            return Err(Error::NotUnit(u));
        }
        // Invert the residue in F_p, then Newton-lift: x <- x(2 - ux).
        let r = u % self.p;
        let mut x = pow_mod(r, self.p - 2, self.p);
        let two = self.from_int(2);
        for _ in 0..=self.n.ilog2() + 1 {
            let ux = self.mul(u, x);
            if ux == 1 {
                return Ok(x);
            }
            x = self.mul(x, self.sub(two, ux));
        }
        if self.mul(u, x) == 1 {
            Ok(x)
        } else {
            Err(Error::inconsistent(format!("inverse lifting failed for {u} in {self}")))
        }
    }

    /// Base-`p` digits of a code, little-endian, length `n`.
    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.n as usize);
        for _ in 0..self.n {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .take(self.n as usize)
            .rev()
            .fold(0u64, |acc, &d| acc * self.p + d % self.p)
    }

    fn digitwise(&self, a: u64, b: u64, op: impl Fn(u64, u64) -> u64) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.n {
            out += op(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale = scale.wrapping_mul(self.p);
        }
        out
    }

    pub fn elem(&self, code: u64) -> Result<RingElem> {
        if code >= self.modulus {
            return Err(Error::BadCoordinate { index: 0, value: code, exponent: self.n });
        }
        Ok(RingElem { spec: *self, code })
    }

    pub fn format_code(&self, code: u64) -> String {
        match self.kind {
            RingKind::Zmod => code.to_string(),
            RingKind::Truncpoly => {
                let terms: Vec<String> = self
                    .digits(code)
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "T".to_string(),
                        (1, c) => format!("{c}T"),
                        (i, 1) => format!("T^{i}"),
                        (i, c) => format!("{c}T^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    (acc % m as u128) as u64
}

/// A ring element carrying its ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    spec: RingSpec,
    code: u64,
}

impl RingElem {
    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    /// Coefficients `c_0, ..., c_{n-1}` (the `p`-adic digits for `Z/p^n`).
    pub fn coefficients(&self) -> Vec<u64> {
        self.spec.digits(self.code)
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::RingMismatch(self.spec, other.spec));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem { spec: self.spec, code: self.spec.add(self.code, other.code) })
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem { spec: self.spec, code: self.spec.mul(self.code, other.code) })
    }

    pub fn neg(&self) -> RingElem {
        RingElem { spec: self.spec, code: self.spec.neg(self.code) }
    }

    pub fn valuation(&self) -> u32 {
        self.spec.valuation(self.code)
    }

    pub fn unit_part(&self) -> Result<RingElem> {
        Ok(RingElem { spec: self.spec, code: self.spec.unit_part(self.code)? })
    }

    pub fn inverse(&self) -> Result<RingElem> {
        Ok(RingElem { spec: self.spec, code: self.spec.inverse(self.code)? })
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec.format_code(self.code))
    }
}
