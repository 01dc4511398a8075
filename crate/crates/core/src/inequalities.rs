//! Exact and interval-decided verification of the factorial inequalities,
//! and evaluation of the covering-number formulas.
//!
//! Integer comparisons are exact. Anything involving `e` or `π` goes through
//! [`ExactReal`], a rational interval whose endpoints are rounded outward to
//! a fixed number of significant bits after every operation.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Digits used first; comparisons still undecided are retried at [`MAX_DIGITS`].
pub const BASE_DIGITS: u32 = 50;
pub const MAX_DIGITS: u32 = 200;

/// Primitive maximal subgroups of `S_n` have order at most `2.6^n`.
pub const PRIMITIVE_BOUND: (u32, u32) = (13, 5);
pub const PRIMITIVE_BOUND_SOURCE: &str = "external assumption: primitive maximal subgroups of S_n have order at most 2.6^n";

fn bits_for(digits: u32) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 16
}

/// `mant · 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn ceil_shr(m: &BigInt, k: u64) -> BigInt {
    -((-m) >> k)
}

impl Dyadic {
    fn int(m: BigInt) -> Self {
        Dyadic { mant: m, exp: 0 }
    }

    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Position just above the leading bit.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn round(mut self, bits: u64, up: bool) -> Self {
        let excess = self.mant.bits() as i64 - bits as i64;
        if excess > 0 {
            self.mant = if up { ceil_shr(&self.mant, excess as u64) } else { &self.mant >> excess as u64 };
            self.exp += excess;
        }
        self
    }

    fn from_rational(q: &BigRational, bits: u64, up: bool) -> Self {
        if q.is_integer() {
            return Dyadic::int(q.to_integer()).round(bits, up);
        }
        let shift = bits as i64 + 2 - (q.numer().bits() as i64 - q.denom().bits() as i64);
        let (num, den) = if shift >= 0 {
            (q.numer() << shift as u64, q.denom().clone())
        } else {
            (q.numer().clone(), q.denom() << (-shift) as u64)
        };
        let mant = if up { -((-num).div_floor(&den)) } else { num.div_floor(&den) };
        Dyadic { mant, exp: -shift }.round(bits, up)
    }

    fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    fn add(&self, other: &Self, bits: u64, up: bool) -> Self {
        if self.is_zero() {
            return other.clone().round(bits, up);
        }
        if other.is_zero() {
            return self.clone().round(bits, up);
        }
        let (big, small) = if self.top() >= other.top() { (self, other) } else { (other, self) };
        let gap = big.top() - small.top();
        if gap > bits as i64 + 4 && big.exp > small.top() {
            // `small` only nudges the last place of `big`
            let s = (big.exp - small.top()) as u64;
            let nudge = if small.mant.is_negative() { -BigInt::one() } else { BigInt::one() };
            return Dyadic { mant: (&big.mant << s) + nudge, exp: big.exp - s as i64 }.round(bits, up);
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let d = (hi.exp - lo.exp) as u64;
        Dyadic { mant: (&hi.mant << d) + &lo.mant, exp: lo.exp }.round(bits, up)
    }

    fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    fn mul(&self, other: &Self, bits: u64, up: bool) -> Self {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }.round(bits, up)
    }

    fn div(&self, other: &Self, bits: u64, up: bool) -> Self {
        let k = bits + other.mant.bits() + 2;
        let num = &self.mant << k;
        let mant = if up { -((-num).div_floor(&other.mant)) } else { num.div_floor(&other.mant) };
        Dyadic { mant, exp: self.exp - k as i64 - other.exp }.round(bits, up)
    }

    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb || self.is_zero() {
            return sa.cmp(&sb);
        }
        let flip = |o: Ordering| if self.mant.is_negative() { o.reverse() } else { o };
        if self.top() != other.top() {
            return flip(self.top().cmp(&other.top()));
        }
        let (a, b) = if self.exp >= other.exp {
            (&self.mant << (self.exp - other.exp) as u64, other.mant.clone())
        } else {
            (self.mant.clone(), &other.mant << (other.exp - self.exp) as u64)
        };
        a.cmp(&b)
    }

    fn log10(&self) -> f64 {
        let b = self.mant.bits();
        let keep = b.min(60);
        let lead = (self.mant.magnitude() >> (b - keep)).to_u64().unwrap_or(0) as f64;
        lead.log10() + (self.exp + (b - keep) as i64) as f64 * std::f64::consts::LOG10_2
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Exact(BigRational),
    Approx { lo: Dyadic, hi: Dyadic, bits: u64 },
}

/// A closed interval: either an exact rational, or dyadic endpoints rounded
/// outward to a fixed number of significant bits.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactReal {
    repr: Repr,
}

impl ExactReal {
    pub fn exact(q: BigRational) -> Self {
        ExactReal { repr: Repr::Exact(q) }
    }

    pub fn int(i: impl Into<BigInt>) -> Self {
        Self::exact(BigRational::from_integer(i.into()))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Self::exact(BigRational::new(p.into(), q.into()))
    }

    /// An enclosure of `[lo, hi]` rounded outward to `bits` bits.
    pub fn interval(lo: BigRational, hi: BigRational, bits: u64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Precondition("interval with lo > hi".into()));
        }
        Ok(ExactReal {
            repr: Repr::Approx {
                lo: Dyadic::from_rational(&lo, bits, false),
                hi: Dyadic::from_rational(&hi, bits, true),
                bits,
            },
        })
    }

    pub fn lo(&self) -> BigRational {
        match &self.repr {
            Repr::Exact(q) => q.clone(),
            Repr::Approx { lo, .. } => lo.to_rational(),
        }
    }

    pub fn hi(&self) -> BigRational {
        match &self.repr {
            Repr::Exact(q) => q.clone(),
            Repr::Approx { hi, .. } => hi.to_rational(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    pub fn width(&self) -> BigRational {
        self.hi() - self.lo()
    }

    fn bits(&self) -> Option<u64> {
        match self.repr {
            Repr::Exact(_) => None,
            Repr::Approx { bits, .. } => Some(bits),
        }
    }

    fn ends(&self, bits: u64) -> (Dyadic, Dyadic) {
        match &self.repr {
            Repr::Exact(q) => (Dyadic::from_rational(q, bits, false), Dyadic::from_rational(q, bits, true)),
            Repr::Approx { lo, hi, .. } => (lo.clone().round(bits, false), hi.clone().round(bits, true)),
        }
    }

    fn approx(lo: Dyadic, hi: Dyadic, bits: u64) -> Self {
        ExactReal { repr: Repr::Approx { lo, hi, bits } }
    }

    /// Re-rounds to `bits` significant bits (exact values become intervals).
    pub fn rounded(&self, bits: u64) -> Self {
        let (lo, hi) = self.ends(bits);
        Self::approx(lo, hi, bits)
    }

    fn common_bits(&self, other: &Self) -> Option<u64> {
        match (self.bits(), other.bits()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr, self.common_bits(other)) {
            (Repr::Exact(a), Repr::Exact(b), _) => Self::exact(a + b),
            (_, _, Some(bits)) => {
                let ((al, ah), (bl, bh)) = (self.ends(bits), other.ends(bits));
                Self::approx(al.add(&bl, bits, false), ah.add(&bh, bits, true), bits)
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Exact(q) => Self::exact(-q),
            Repr::Approx { lo, hi, bits } => Self::approx(hi.neg(), lo.neg(), *bits),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (&self.repr, &other.repr, self.common_bits(other)) {
            (Repr::Exact(a), Repr::Exact(b), _) => Self::exact(a * b),
            (_, _, Some(bits)) => {
                let ((al, ah), (bl, bh)) = (self.ends(bits), other.ends(bits));
                let pairs = [(&al, &bl), (&al, &bh), (&ah, &bl), (&ah, &bh)];
                let lo = pairs.iter().map(|(x, y)| x.mul(y, bits, false)).min_by(|a, b| a.cmp(b)).expect("four");
                let hi = pairs.iter().map(|(x, y)| x.mul(y, bits, true)).max_by(|a, b| a.cmp(b)).expect("four");
                Self::approx(lo, hi, bits)
            }
            _ => unreachable!(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        match &self.repr {
            Repr::Exact(q) if q.is_zero() => Err(Error::Precondition("reciprocal of zero".into())),
            Repr::Exact(q) => Ok(Self::exact(q.recip())),
            Repr::Approx { lo, hi, bits } => {
                if lo.mant.sign() != hi.mant.sign() || lo.is_zero() || hi.is_zero() {
                    return Err(Error::Precondition("reciprocal of an interval containing 0".into()));
                }
                let one = Dyadic::int(BigInt::one());
                Ok(Self::approx(one.div(hi, *bits, false), one.div(lo, *bits, true), *bits))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::int(1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `Some(ordering)` when the intervals are separated (or both exact).
    pub fn compare(&self, other: &Self) -> Option<Ordering> {
        if let (Repr::Exact(a), Repr::Exact(b)) = (&self.repr, &other.repr) {
            return Some(a.cmp(b));
        }
        let bits = self.common_bits(other).expect("one side approximate");
        let ((al, ah), (bl, bh)) = (self.ends(bits), other.ends(bits));
        if ah.cmp(&bl) == Ordering::Less {
            Some(Ordering::Less)
        } else if al.cmp(&bh) == Ordering::Greater {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// `e` to about `digits` decimal digits (memoized).
    pub fn e(digits: u32) -> Self {
        constant(digits, false)
    }

    /// `π` to about `digits` decimal digits (memoized).
    pub fn pi(digits: u32) -> Self {
        constant(digits, true)
    }

    /// `Σ_{k≤K} 1/k!` plus a tail below `2/(K+1)!`.
    fn compute_e(digits: u32) -> Self {
        let bits = bits_for(digits);
        let target = BigInt::from(10u32).pow(digits + 2);
        let mut sum = BigRational::zero();
        let mut fact = BigInt::one();
        let mut k = 0u32;
        loop {
            sum += BigRational::new(BigInt::one(), fact.clone());
            k += 1;
            fact *= k;
            if fact > target {
                break;
            }
        }
        let tail = BigRational::new(BigInt::from(2), fact);
        Self::interval(sum.clone(), sum + tail, bits).expect("ordered")
    }

    /// `π = 16 arctan(1/5) - 4 arctan(1/239)` from alternating partial sums.
    fn compute_pi(digits: u32) -> Self {
        let bits = bits_for(digits);
        let a = arctan_inv(5, digits);
        let b = arctan_inv(239, digits);
        Self::int(16).mul(&a).sub(&Self::int(4).mul(&b)).rounded(bits)
    }

    /// `exp(x)` for rational `0 ≤ x ≤ 1`.
    pub fn exp(x: &BigRational, digits: u32) -> Result<Self> {
        if x.is_negative() || *x > BigRational::one() {
            return Err(Error::Precondition("exp is enclosed for 0 <= x <= 1".into()));
        }
        let bits = bits_for(digits);
        let eps = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 2));
        let mut sum = BigRational::zero();
        let mut term = BigRational::one();
        let mut k = 0u32;
        loop {
            sum += &term;
            k += 1;
            term = term * x / BigRational::from_integer(k.into());
            if term < eps {
                break;
            }
        }
        // tail after this point is at most twice the next term
        let tail = term * BigRational::from_integer(2.into());
        Self::interval(sum.clone(), sum + tail, bits)
    }

    /// Scientific notation of the midpoint with the given significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        match &self.repr {
            Repr::Exact(q) if q.is_integer() && q.numer().bits() < 4000 => q.to_integer().to_string(),
            Repr::Approx { lo, .. } if lo.top().abs() > 4000 => format!("~10^{:.9}", lo.log10()),
            _ => rational_sci(&((self.lo() + self.hi()) / BigRational::from_integer(2.into())), digits),
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(q) => write!(f, "{q}"),
            Repr::Approx { .. } => write!(f, "[{}, {}]", rational_sci(&self.lo(), 20), rational_sci(&self.hi(), 20)),
        }
    }
}

fn rational_sci(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let mut exp = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let scale = |e: i64| -> BigInt {
        let shift = digits as i64 - 1 - e;
        let ten = BigInt::from(10u32);
        if shift >= 0 {
            (&a * BigRational::from_integer(ten.pow(shift as u32))).round().to_integer()
        } else {
            (&a / BigRational::from_integer(ten.pow((-shift) as u32))).round().to_integer()
        }
    };
    let mut m = scale(exp);
    while m.to_string().len() > digits {
        exp += 1;
        m = scale(exp);
    }
    while m.to_string().len() < digits {
        exp -= 1;
        m = scale(exp);
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    format!("{}{head}.{tail}e{exp}", if neg { "-" } else { "" })
}

fn constant(digits: u32, pi: bool) -> ExactReal {
    static CACHE: OnceLock<Mutex<HashMap<(u32, bool), ExactReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("constant cache").get(&(digits, pi)) {
        return v.clone();
    }
    let v = if pi { ExactReal::compute_pi(digits) } else { ExactReal::compute_e(digits) };
    cache.lock().expect("constant cache").insert((digits, pi), v.clone());
    v
}

fn arctan_inv(x: u32, digits: u32) -> ExactReal {
    let eps = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(digits + 4));
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = BigInt::from(x);
    let mut sum = BigRational::zero();
    let mut k = 0u32;
    loop {
        let term = BigRational::new(BigInt::one(), BigInt::from(2 * k + 1) * &power);
        if term < eps {
            // partial sums alternate around the limit
            let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return ExactReal::interval(lo, hi, bits_for(digits)).expect("ordered");
        }
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= &x2;
        k += 1;
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of distinct prime divisors.
pub fn omega_count(x: u64) -> Result<u32> {
    if x == 0 {
        return Err(Error::Precondition("omega(0) is undefined".into()));
    }
    let mut x = x;
    let mut count = 0;
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            count += 1;
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    Ok(count + u32::from(x > 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SigmaKind {
    Exact(String),
    Bounds(String, String),
    /// `(n, m) = (9, 1)` is outside the closed formula.
    Excluded(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaValue {
    pub n: u64,
    pub m: u64,
    /// Which branch of the theorem applies: 1 odd n ≥ 7, 2 n = 5, 3 even n ≥ 8, 4 n = 6.
    pub case: u8,
    pub kind: SigmaKind,
}

impl SigmaValue {
    pub fn exact(&self) -> Option<BigUint> {
        match &self.kind {
            SigmaKind::Exact(v) => v.parse().ok(),
            _ => None,
        }
    }

    pub fn bounds(&self) -> Option<(BigUint, BigUint)> {
        match &self.kind {
            SigmaKind::Exact(v) => Some((v.parse().ok()?, v.parse().ok()?)),
            SigmaKind::Bounds(lo, hi) => Some((lo.parse().ok()?, hi.parse().ok()?)),
            SigmaKind::Excluded(_) => None,
        }
    }
}

impl fmt::Display for SigmaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SigmaKind::Exact(v) => write!(f, "sigma(n={}, m={}) = {v}", self.n, self.m),
            SigmaKind::Bounds(lo, hi) => write!(f, "{lo} <= sigma(n={}, m={}) <= {hi}", self.n, self.m),
            SigmaKind::Excluded(why) => write!(f, "sigma(n={}, m={}): {why}", self.n, self.m),
        }
    }
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            out.push(p);
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// The covering number of `A_n^m ⋊ C_{2m}` (odd case) from the closed formulas.
pub fn sigma_formula(n: u64, m: u64) -> Result<SigmaValue> {
    if n < 5 || m < 1 {
        return Err(Error::Precondition(format!("need n >= 5 and m >= 1, got n = {n}, m = {m}")));
    }
    let w = BigUint::from(omega_count(2 * m)?);
    let mm = m as u32;
    let (case, kind) = if n == 5 {
        let lo = BigUint::from(10u32).pow(mm);
        let hi = &w + BigUint::from(5u32).pow(mm) + &lo;
        if prime_factors(m).iter().all(|&p| p == 2 || p == 3) {
            (2, SigmaKind::Exact(hi.to_string()))
        } else {
            (2, SigmaKind::Bounds(lo.to_string(), hi.to_string()))
        }
    } else if n == 6 {
        (4, SigmaKind::Exact((w + BigUint::from(2u32) * BigUint::from(6u32).pow(mm)).to_string()))
    } else if n % 2 == 1 {
        if (n, m) == (9, 1) {
            (1, SigmaKind::Excluded("the closed formula is stated for m != 1 when n = 9".into()))
        } else {
            let sum: BigUint = (1..=(n - 1) / 2).map(|i| binomial(n, i).pow(mm)).sum();
            (1, SigmaKind::Exact((w + sum).to_string()))
        }
    } else {
        let half = binomial(n, n / 2) / 2u32;
        let lo = half.pow(mm);
        let tail: BigUint = (1..=n / 3).map(|i| binomial(n, i).pow(mm)).sum();
        let hi = w + &lo + tail;
        (3, SigmaKind::Bounds(lo.to_string(), hi.to_string()))
    };
    Ok(SigmaValue { n, m, case, kind })
}

/// Bounds for `σ(A_5 ≀ C_m)` in the even case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WreathBounds {
    pub m: u64,
    /// From the counting argument; only worked out for `m = 2`.
    pub lower: Option<String>,
    /// Size of the cover by the twist kernels, the point stabilizers of
    /// four points and the Sylow-5 normalizers.
    pub upper: String,
}

/// `ω(m) + 4·5^{m-1} + 6·6^{m-1}` above; for `m = 2`, the socle plus
/// `⌈1440/40⌉` below, since the 1440 elements of type (5) lie only in
/// type-`s` (40 each) and type-`d` (24 each) subgroups.
pub fn wreath_a5_bounds(m: u64) -> Result<WreathBounds> {
    if m < 2 {
        return Err(Error::Precondition(format!("need m >= 2, got {m}")));
    }
    let e = (m - 1) as u32;
    let upper = BigUint::from(omega_count(m)?) + 4u32 * BigUint::from(5u32).pow(e) + 6u32 * BigUint::from(6u32).pow(e);
    let lower = (m == 2).then(|| (1 + 1440u32.div_ceil(40)).to_string());
    Ok(WreathBounds { m, lower, upper: upper.to_string() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub params: Vec<(String, u64)>,
    /// The lemma's numeric hypothesis, where it has one beyond the parameter ranges.
    pub hypothesis: Option<Verdict>,
    pub conclusion: Verdict,
    pub lhs: String,
    pub rhs: String,
    pub note: Option<String>,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.conclusion == Verdict::Holds
    }
}

impl fmt::Display for InequalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({}): {} ({} vs {})", self.name, params.join(", "), self.conclusion, self.lhs, self.rhs)?;
        if let Some(h) = self.hypothesis {
            write!(f, "; hypothesis {h}")?;
        }
        if let Some(n) = &self.note {
            write!(f, "; {n}")?;
        }
        Ok(())
    }
}

/// Named inequality with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inequality {
    /// Both Stirling bounds for `n!`.
    Stirling { n: u64 },
    /// `((n/a)!)^a a! ≥ ((n/b)!)^b b!` for divisors `a ≤ b` of `n ≥ 8`.
    Ab { n: u64, a: u64, b: u64 },
    /// `((n-1)/2)! ((n-3)/2)! ≥ (n/a)!^a a!` for odd `n ∉ {9, 15}` and a proper divisor `a ≥ 3`.
    Estimprim { n: u64, a: u64 },
    /// Intransitive maximal subgroups of `S_n` beat transitive ones, odd `n ≥ 11`.
    Corsizes { n: u64 },
    /// Hypothesis and direct conclusion `|K|^a ≥ |A_n|^b` for `a > b`.
    Tremezz { n: u64, a: u64, b: u64 },
}

impl std::str::FromStr for Inequality {
    type Err = Error;

    /// `name:k=v,k=v`, e.g. `ab:n=8,a=2,b=4`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut get = std::collections::HashMap::new();
        for kv in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("bad parameter {kv}")))?;
            get.insert(k.trim(), v.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad value {v}")))?);
        }
        let need = |k: &str| get.get(k).copied().ok_or_else(|| Error::Parse(format!("{name} needs {k}")));
        Inequality::build(name, &need)
    }
}

impl Inequality {
    pub fn build(name: &str, need: &dyn Fn(&str) -> Result<u64>) -> Result<Self> {
        Ok(match name {
            "stirling" => Inequality::Stirling { n: need("n")? },
            "ab" => Inequality::Ab { n: need("n")?, a: need("a")?, b: need("b")? },
            "estimprim" => Inequality::Estimprim { n: need("n")?, a: need("a")? },
            "corsizes" => Inequality::Corsizes { n: need("n")? },
            "tremezz" => Inequality::Tremezz { n: need("n")?, a: need("a")?, b: need("b")? },
            other => return Err(Error::Parse(format!("unknown inequality {other}"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Inequality::Stirling { .. } => "stirling",
            Inequality::Ab { .. } => "ab",
            Inequality::Estimprim { .. } => "estimprim",
            Inequality::Corsizes { .. } => "corsizes",
            Inequality::Tremezz { .. } => "tremezz",
        }
    }

    fn params(&self) -> Vec<(String, u64)> {
        let p = |k: &str, v: u64| (k.to_string(), v);
        match *self {
            Inequality::Stirling { n } | Inequality::Corsizes { n } => vec![p("n", n)],
            Inequality::Ab { n, a, b } | Inequality::Tremezz { n, a, b } => vec![p("n", n), p("a", a), p("b", b)],
            Inequality::Estimprim { n, a } => vec![p("n", n), p("a", a)],
        }
    }
}

fn fact_pow(k: u64, e: u64) -> BigUint {
    factorial(k).pow(e as u32)
}

fn report(ineq: &Inequality, hypothesis: Option<Verdict>, conclusion: Verdict, lhs: String, rhs: String) -> InequalityReport {
    InequalityReport { name: ineq.name().into(), params: ineq.params(), hypothesis, conclusion, lhs, rhs, note: None }
}

/// Checks a named inequality; parameters outside the lemma's range are errors.
pub fn check_inequality(ineq: &Inequality) -> Result<InequalityReport> {
    match *ineq {
        Inequality::Stirling { n } => {
            if n == 0 {
                return Err(Error::Precondition("stirling needs n >= 1".into()));
            }
            let fact = ExactReal::int(BigInt::from(factorial(n)));
            Ok(stirling_with(n, &fact))
        }
        Inequality::Ab { n, a, b } => {
            if n < 8 || a == 0 || b == 0 || n % a != 0 || n % b != 0 || a > b {
                return Err(Error::Precondition(format!("ab needs n >= 8 and divisors a <= b of n, got {n}, {a}, {b}")));
            }
            let lhs = fact_pow(n / a, a) * factorial(a);
            let rhs = fact_pow(n / b, b) * factorial(b);
            Ok(report(ineq, None, Verdict::from_bool(lhs >= rhs), lhs.to_string(), rhs.to_string()))
        }
        Inequality::Estimprim { n, a } => {
            if n % 2 == 0 || n == 9 || n == 15 || a < 3 || a >= n || n % a != 0 {
                return Err(Error::Precondition(format!(
                    "estimprim needs odd n not in {{9, 15}} and a proper divisor a >= 3, got {n}, {a}"
                )));
            }
            let lhs = factorial((n - 1) / 2) * factorial((n - 3) / 2);
            let rhs = fact_pow(n / a, a) * factorial(a);
            Ok(report(ineq, None, Verdict::from_bool(lhs >= rhs), lhs.to_string(), rhs.to_string()))
        }
        Inequality::Corsizes { n } => {
            if n < 11 || n % 2 == 0 {
                return Err(Error::Precondition(format!("corsizes needs odd n >= 11, got {n}")));
            }
            // smallest intransitive maximal subgroup: type ((n-1)/2, (n+1)/2)
            let intransitive = factorial((n - 1) / 2) * factorial((n + 1) / 2);
            let imprimitive = (2..n)
                .filter(|a| n % a == 0)
                .map(|a| fact_pow(n / a, a) * factorial(a))
                .max()
                .unwrap_or_default();
            let (p, q) = PRIMITIVE_BOUND;
            let prim_ok = BigUint::from(q).pow(n as u32) * &intransitive >= BigUint::from(p).pow(n as u32);
            let ok = intransitive > imprimitive && prim_ok;
            let mut r = report(
                ineq,
                None,
                Verdict::from_bool(ok),
                intransitive.to_string(),
                format!("max({imprimitive}, 2.6^{n})"),
            );
            r.note = Some(format!("primitive comparison relies on the {PRIMITIVE_BOUND_SOURCE}"));
            Ok(r)
        }
        Inequality::Tremezz { n, a, b } => {
            if a <= b || b == 0 || n < 5 {
                return Err(Error::Precondition(format!("tremezz needs a > b >= 1 and n >= 5, got {n}, {a}, {b}")));
            }
            let alt = factorial(n) / 2u32;
            let (k, lhs_h, rhs_h) = if n % 2 == 1 {
                let k = factorial((n - 1) / 2) * factorial((n + 1) / 2) / 2u32;
                let lhs = ExactReal::int(BigInt::from(n * n - 1).pow(a as u32));
                let rhs = |digits| {
                    ExactReal::int(4)
                        .pow(a)
                        .mul(&ExactReal::e(digits).pow(2 * (a - b)))
                        .mul(&ExactReal::int(n).pow(2 * b))
                };
                (k, lhs, Box::new(rhs) as Box<dyn Fn(u32) -> ExactReal>)
            } else {
                let k = factorial(n / 2).pow(2);
                let lhs = ExactReal::int(BigInt::from(n).pow(a as u32));
                let rhs = |digits| {
                    ExactReal::int(2).pow(a).mul(&ExactReal::e(digits).pow(a - b)).mul(&ExactReal::int(n).pow(b))
                };
                (k, lhs, Box::new(rhs) as Box<dyn Fn(u32) -> ExactReal>)
            };
            let hyp = decide_ge(&lhs_h, &*rhs_h);
            let lhs = k.pow(a as u32);
            let rhs = alt.pow(b as u32);
            let mut r = report(ineq, Some(hyp), Verdict::from_bool(lhs >= rhs), lhs.to_string(), rhs.to_string());
            r.note = Some(format!(
                "hypothesis {} vs {}; conclusion |K|^a vs |A_n|^b",
                lhs_h.to_sci(12),
                rhs_h(BASE_DIGITS).to_sci(12)
            ));
            Ok(r)
        }
    }
}

/// `lhs ≥ rhs(digits)`, refining from 50 to 200 digits.
fn decide_ge(lhs: &ExactReal, rhs: &dyn Fn(u32) -> ExactReal) -> Verdict {
    for digits in [BASE_DIGITS, MAX_DIGITS] {
        match lhs.compare(&rhs(digits)) {
            Some(Ordering::Greater | Ordering::Equal) => return Verdict::Holds,
            Some(Ordering::Less) => return Verdict::Fails,
            None => {}
        }
    }
    Verdict::Undecided
}

/// Both Stirling bounds, squared to avoid roots:
/// `2πn (n/e)^{2n} e^{2/(12n+1)} < (n!)^2 < 2πn (n/e)^{2n} e^{2/(12n)}`.
fn stirling_with(n: u64, fact: &ExactReal) -> InequalityReport {
    let ineq = Inequality::Stirling { n };
    let sq = fact.mul(fact);
    let mut verdicts = (Verdict::Undecided, Verdict::Undecided);
    let mut shown = (String::new(), String::new());
    for digits in [BASE_DIGITS, MAX_DIGITS] {
        let bits = bits_for(digits);
        let e = ExactReal::e(digits);
        let pi = ExactReal::pi(digits);
        let ratio = ExactReal::int(n).div(&e).expect("e > 0");
        let core = ExactReal::int(2).mul(&pi).mul(&ExactReal::int(n)).mul(&ratio.pow(2 * n));
        let lower = core.mul(&ExactReal::exp(&BigRational::new(2.into(), (12 * n + 1).into()), digits).expect("x <= 1"));
        let upper = core.mul(&ExactReal::exp(&BigRational::new(2.into(), (12 * n).into()), digits).expect("x <= 1"));
        let sq = sq.rounded(bits);
        let lo_ok = lower.compare(&sq).map(|o| o == Ordering::Less);
        let hi_ok = sq.compare(&upper).map(|o| o == Ordering::Less);
        let v = |x: Option<bool>| x.map_or(Verdict::Undecided, Verdict::from_bool);
        verdicts = (v(lo_ok), v(hi_ok));
        shown = (lower.to_sci(15), upper.to_sci(15));
        if lo_ok.is_some() && hi_ok.is_some() {
            break;
        }
    }
    let conclusion = match verdicts {
        (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
        (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
        _ => Verdict::Undecided,
    };
    let mut r = report(&ineq, None, conclusion, format!("(n!)^2 = {}", sq.to_sci(15)), format!("bounds {} / {}", shown.0, shown.1));
    r.note = Some(format!("lower bound {}, upper bound {}", verdicts.0, verdicts.1));
    r
}

/// Stirling for every `1 ≤ n ≤ max`, keeping `n!` as a rounded interval.
pub fn sweep_stirling(max: u64) -> Vec<InequalityReport> {
    let bits = bits_for(MAX_DIGITS);
    let mut facts = Vec::with_capacity(max as usize);
    let mut fact = ExactReal::int(1);
    for n in 1..=max {
        fact = fact.mul(&ExactReal::int(n));
        if fact.is_exact() && fact.lo().numer().bits() > bits {
            fact = fact.rounded(bits);
        }
        facts.push(fact.clone());
    }
    facts.into_par_iter().enumerate().map(|(i, f)| stirling_with(i as u64 + 1, &f)).collect()
}

/// `estimprim` for odd `n` in the range and every proper divisor `a ≥ 3`.
pub fn sweep_estimprim(lo: u64, hi: u64) -> Vec<InequalityReport> {
    (lo..=hi)
        .filter(|n| n % 2 == 1 && *n != 9 && *n != 15)
        .flat_map(|n| (3..n).filter(move |a| n % a == 0).map(move |a| Inequality::Estimprim { n, a }))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|q| check_inequality(q).expect("in range"))
        .collect()
}

/// `ab` for every `8 ≤ n ≤ max` and divisor pair `a ≤ b`; `a == b` is trivial and skipped.
pub fn sweep_ab(max: u64) -> Vec<InequalityReport> {
    (8..=max)
        .flat_map(|n| {
            let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            let pairs: Vec<(u64, u64)> =
                divs.iter().flat_map(|&a| divs.iter().filter(move |&&b| a < b).map(move |&b| (a, b))).collect();
            pairs.into_iter().map(move |(a, b)| Inequality::Ab { n, a, b })
        })
        .collect::<Vec<_>>()
        .par_iter()
        .map(|q| check_inequality(q).expect("in range"))
        .collect()
}

/// Arithmetic over integers, rationals, `e`, `π`, factorials and binomials.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ratio(i64, i64),
    E,
    Pi,
    Factorial(u64),
    Binomial(u64, u64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

impl Expr {
    pub fn int(i: i64) -> Self {
        Expr::Int(i.into())
    }

    pub fn times(self, other: Expr) -> Self {
        Expr::Mul(Box::new(self), Box::new(other))
    }

    pub fn over(self, other: Expr) -> Self {
        Expr::Div(Box::new(self), Box::new(other))
    }

    pub fn plus(self, other: Expr) -> Self {
        Expr::Add(Box::new(self), Box::new(other))
    }

    pub fn pow(self, e: u64) -> Self {
        Expr::Pow(Box::new(self), e)
    }

    pub fn product(items: impl IntoIterator<Item = Expr>) -> Self {
        items.into_iter().fold(Expr::int(1), Expr::times)
    }

    pub fn eval(&self, digits: u32) -> Result<ExactReal> {
        Ok(match self {
            Expr::Int(i) => ExactReal::int(i.clone()),
            Expr::Ratio(p, q) => {
                if *q == 0 {
                    return Err(Error::Precondition("zero denominator".into()));
                }
                ExactReal::ratio(*p, *q)
            }
            Expr::E => ExactReal::e(digits),
            Expr::Pi => ExactReal::pi(digits),
            Expr::Factorial(n) => ExactReal::int(BigInt::from(factorial(*n))),
            Expr::Binomial(n, k) => ExactReal::int(BigInt::from(binomial(*n, *k))),
            Expr::Add(a, b) => a.eval(digits)?.add(&b.eval(digits)?),
            Expr::Mul(a, b) => a.eval(digits)?.mul(&b.eval(digits)?),
            Expr::Div(a, b) => a.eval(digits)?.div(&b.eval(digits)?)?,
            Expr::Pow(a, e) => a.eval(digits)?.pow(*e),
        })
    }
}

/// `lhs ≥ rhs`, exactly when both sides are exact, else by interval separation.
pub fn compare_exact(lhs: &Expr, rhs: &Expr) -> Result<Verdict> {
    for digits in [BASE_DIGITS, MAX_DIGITS] {
        match lhs.eval(digits)?.compare(&rhs.eval(digits)?) {
            Some(Ordering::Less) => return Ok(Verdict::Fails),
            Some(_) => return Ok(Verdict::Holds),
            None => {}
        }
    }
    Ok(Verdict::Undecided)
}

/// The numeric spot checks used for the degree-7 and degree-9 arguments.
pub fn spot_checks() -> Vec<(String, Verdict)> {
    let checks = [
        (
            "72^6 >= 2*6*2520^2*504",
            Expr::int(72).pow(6),
            Expr::product([Expr::int(2), Expr::int(6), Expr::int(2520).pow(2), Expr::int(504)]),
        ),
        ("(72/21)^2 >= 40/7", Expr::Ratio(72, 21).pow(2), Expr::Ratio(40, 7)),
        ("1440*144 >= 648*288", Expr::int(1440).times(Expr::int(144)), Expr::int(648).times(Expr::int(288))),
    ];
    checks
        .into_iter()
        .map(|(name, l, r)| (name.to_string(), compare_exact(&l, &r).expect("well formed")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wreath_bounds() {
        let b = wreath_a5_bounds(2).unwrap();
        assert_eq!((b.lower.as_deref(), b.upper.as_str()), (Some("37"), "57"));
        assert_eq!(wreath_a5_bounds(3).unwrap().upper, (1 + 4 * 25 + 6 * 36).to_string());
        assert!(wreath_a5_bounds(1).is_err());
    }

    #[test]
    fn omega() {
        assert_eq!(omega_count(12).unwrap(), 2);
        assert_eq!(omega_count(2).unwrap(), 1);
        assert_eq!(omega_count(60).unwrap(), 3);
        assert_eq!(omega_count(1).unwrap(), 0);
        assert!(omega_count(0).is_err());
    }

    #[test]
    fn sigma_examples() {
        let s = |n, m| sigma_formula(n, m).unwrap();
        assert_eq!(s(5, 2).exact().unwrap(), 126u32.into());
        assert_eq!(s(7, 2).exact().unwrap(), 1716u32.into());
        assert_eq!(s(8, 2).bounds().unwrap(), (1225u32.into(), 2074u32.into()));
        assert_eq!(s(5, 7).kind, SigmaKind::Bounds("10000000".into(), (1 + 2 + 78125 + 10_000_000 - 1).to_string()));
        assert_eq!(s(6, 3).exact().unwrap(), 434u32.into());
        assert!(matches!(s(9, 1).kind, SigmaKind::Excluded(_)));
        assert_eq!(s(5, 1).exact().unwrap(), 16u32.into());
        // m = 1 reproduces the symmetric-group shape
        for n in [7u64, 11, 13] {
            let want: BigUint = BigUint::one() + (1..=(n - 1) / 2).map(|i| binomial(n, i)).sum::<BigUint>();
            assert_eq!(s(n, 1).exact().unwrap(), want);
        }
        assert!(sigma_formula(4, 1).is_err());
    }

    #[test]
    fn constants_enclose() {
        let e = ExactReal::e(50);
        let pi = ExactReal::pi(50);
        let e_ref: BigRational = BigRational::new(
            "27182818284590452353602874713526624977572470936999595749669676277240766303535".parse().unwrap(),
            BigInt::from(10u32).pow(76),
        );
        let pi_ref: BigRational = BigRational::new(
            "31415926535897932384626433832795028841971693993751058209749445923078164062862".parse().unwrap(),
            BigInt::from(10u32).pow(76),
        );
        assert!(e.lo() <= e_ref && e_ref <= e.hi());
        assert!(pi.lo() <= pi_ref && pi_ref <= pi.hi());
        let tiny = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(48));
        assert!(e.width() < tiny && pi.width() < tiny);
        // refinement nests
        let e2 = ExactReal::e(200);
        assert!(e.lo() <= e2.lo() && e2.hi() <= e.hi());
        let one = ExactReal::exp(&BigRational::one(), 60).unwrap();
        assert!(one.lo() <= e.hi() && e.lo() <= one.hi());
    }

    #[test]
    fn named_examples() {
        let r = check_inequality(&Inequality::Estimprim { n: 21, a: 3 }).unwrap();
        assert!(r.holds());
        assert_eq!((r.lhs.as_str(), r.rhs.as_str()), ("1316818944000", "768144384000"));
        let r = check_inequality(&Inequality::Ab { n: 8, a: 2, b: 4 }).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.conclusion), ("1152", "384", Verdict::Holds));
        let r = check_inequality(&Inequality::Tremezz { n: 15, a: 3, b: 2 }).unwrap();
        assert_eq!((r.hypothesis, r.conclusion), (Some(Verdict::Fails), Verdict::Holds));
        let r = check_inequality(&Inequality::Stirling { n: 10 }).unwrap();
        assert_eq!(r.conclusion, Verdict::Holds);
        let r = check_inequality(&Inequality::Corsizes { n: 11 }).unwrap();
        assert!(r.holds() && r.note.unwrap().contains("external"));
        assert!(check_inequality(&Inequality::Estimprim { n: 15, a: 3 }).is_err());
        assert!(check_inequality(&Inequality::Ab { n: 8, a: 4, b: 2 }).is_err());
        assert_eq!("ab:n=8,a=2,b=4".parse::<Inequality>().unwrap(), Inequality::Ab { n: 8, a: 2, b: 4 });
        assert!("ab:n=8".parse::<Inequality>().is_err());
    }

    #[test]
    fn ab_fails_when_b_is_n() {
        // b = n puts n! on the right, which beats every smaller product
        let r = check_inequality(&Inequality::Ab { n: 8, a: 4, b: 8 }).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs.as_str(), r.conclusion), ("384", "40320", Verdict::Fails));
    }

    #[test]
    fn spot_checks_hold() {
        for (name, v) in spot_checks() {
            assert_eq!(v, Verdict::Holds, "{name}");
        }
        let undecidable = compare_exact(&Expr::E, &Expr::E).unwrap();
        assert_eq!(undecidable, Verdict::Undecided);
        assert_eq!(compare_exact(&Expr::Pi, &Expr::Ratio(22, 7)).unwrap(), Verdict::Fails);
        assert_eq!(compare_exact(&Expr::int(3), &Expr::int(3)).unwrap(), Verdict::Holds);
    }

    #[test]
    fn small_sweeps() {
        assert!(sweep_stirling(200).iter().all(|r| r.holds()));
        assert!(sweep_estimprim(21, 99).iter().all(|r| r.holds()));
    }

    #[test]
    fn rounding_is_outward() {
        let third = BigRational::new(1.into(), 3.into());
        let x = ExactReal::interval(third.clone(), third.clone(), 20).unwrap();
        assert!(x.lo() < third && third < x.hi());
        let y = x.mul(&x).pow(5);
        let t10 = third.pow(10);
        assert!(y.lo() <= t10 && t10 <= y.hi());
        assert_eq!(rational_sci(&BigRational::new(12345.into(), 1.into()), 3), "1.23e4");
        assert_eq!(rational_sci(&third, 3), "3.33e-1");
    }
}
