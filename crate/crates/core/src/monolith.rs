//! The monolithic groups `G = A_n^m ⋊ <g>`.
//!
//! Odd case: `g = (1, ..., 1, t) d` with `t = (1 2)` and `d = (1 2 ... m)`,
//! so `g` has order `2m`. Even case: `A_n ≀ C_m`, where `g = d`.
//!
//! Elements are kept in the normal form `(x_1, ..., x_m) g^k` with every
//! `x_i` even. The ambient wreath product `S_n ≀ C_m` is used for
//! multiplication: `(w) d^s · (v) d^u = (w_i v_{i+s}) d^{s+u}`, indices mod m.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, Universe};
use crate::perm::{alternating_elements, CycleType, Permutation, ENUMERATION_DEGREE_LIMIT};

/// Largest group order that may be enumerated.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    Odd,
    EvenWreath,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::Odd => write!(f, "odd"),
            Case::EvenWreath => write!(f, "even"),
        }
    }
}

impl std::str::FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" | "Odd" => Ok(Case::Odd),
            "even" | "EvenWreath" | "wreath" => Ok(Case::EvenWreath),
            other => Err(Error::Parse(format!("unknown case {other:?} (expected odd|even)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub n: usize,
    pub m: usize,
    pub case: Case,
}

impl GroupSpec {
    pub fn new(n: usize, m: usize, case: Case) -> Result<Self> {
        if n < 5 || n > crate::perm::MAX_POINTS {
            return Err(Error::Precondition(format!("alternating degree {n} outside 5..=16")));
        }
        if m == 0 {
            return Err(Error::Precondition("need at least one socle factor".into()));
        }
        Ok(GroupSpec { n, m, case })
    }

    pub fn odd(n: usize, m: usize) -> Self {
        GroupSpec::new(n, m, Case::Odd).expect("valid spec")
    }

    pub fn even(n: usize, m: usize) -> Self {
        GroupSpec::new(n, m, Case::EvenWreath).expect("valid spec")
    }

    /// Order of `G / soc(G)`.
    pub fn twist_modulus(&self) -> usize {
        match self.case {
            Case::Odd => 2 * self.m,
            Case::EvenWreath => self.m,
        }
    }

    pub fn alternating_order(&self) -> u128 {
        (1..=self.n as u128).product::<u128>() / 2
    }

    pub fn socle_order(&self) -> u128 {
        self.alternating_order().pow(self.m as u32)
    }

    pub fn order(&self) -> u128 {
        self.socle_order() * self.twist_modulus() as u128
    }

    pub fn enumerable(&self) -> bool {
        self.n <= ENUMERATION_DEGREE_LIMIT && self.order() <= ENUMERATION_LIMIT
    }

    pub fn tau(&self) -> Permutation {
        Permutation::transposition(self.n, 1, 2)
    }

    /// Which components of `g^k` carry `t` (all false in the even case).
    pub fn twist_pattern(&self, k: usize) -> TwistPattern {
        let k = k % self.twist_modulus();
        let m = self.m;
        let pattern = match self.case {
            Case::EvenWreath => vec![false; m],
            Case::Odd => (1..=m)
                .map(|d| {
                    if k == 0 {
                        false
                    } else if k < m {
                        d > m - k
                    } else if k == m {
                        true
                    } else {
                        d <= 2 * m - k
                    }
                })
                .collect(),
        };
        TwistPattern { k, pattern }
    }

    pub fn identity(&self) -> MonolithElement {
        MonolithElement { base: vec![Permutation::identity(self.n); self.m], twist: 0 }
    }

    /// Normal-form element; rejects odd components or an out-of-range twist.
    pub fn element(&self, base: Vec<Permutation>, twist: usize) -> Result<MonolithElement> {
        if base.len() != self.m {
            return Err(Error::Precondition(format!("expected {} components, got {}", self.m, base.len())));
        }
        if let Some(bad) = base.iter().find(|x| x.degree() != self.n || !x.is_even()) {
            return Err(Error::Precondition(format!("component {bad} is not in A_{}", self.n)));
        }
        Ok(MonolithElement { base, twist: twist % self.twist_modulus() })
    }

    /// `g^k` in the ambient wreath product, computed by repeated multiplication of `g`.
    pub fn gamma_power(&self, k: usize) -> Result<AmbientElement> {
        if self.case != Case::Odd {
            return Err(Error::WrongCase("gamma is defined for the odd case".into()));
        }
        let mut w = vec![Permutation::identity(self.n); self.m];
        w[self.m - 1] = self.tau();
        let gamma = AmbientElement { w, shift: 1 % self.m };
        let mut acc = AmbientElement { w: vec![Permutation::identity(self.n); self.m], shift: 0 };
        for _ in 0..k {
            acc = acc.mul(&gamma);
        }
        Ok(acc)
    }

    /// `(x_d t_d) d^k` for the element `(x) g^k`.
    pub fn ambient(&self, e: &MonolithElement) -> AmbientElement {
        let pattern = self.twist_pattern(e.twist);
        let tau = self.tau();
        let w = e
            .base
            .iter()
            .zip(&pattern.pattern)
            .map(|(x, &t)| if t { x.then(&tau) } else { *x })
            .collect();
        AmbientElement { w, shift: e.twist % self.m }
    }

    /// Normal form of an ambient element, or `None` when it lies outside `G`.
    pub fn in_group(&self, a: &AmbientElement) -> Option<MonolithElement> {
        if a.w.len() != self.m || a.shift >= self.m {
            return None;
        }
        let parity: Vec<bool> = a.w.iter().map(|x| !x.is_even()).collect();
        let candidates: Vec<usize> = match self.case {
            Case::EvenWreath => vec![a.shift],
            Case::Odd => vec![a.shift, a.shift + self.m],
        };
        let matching: Vec<usize> =
            candidates.into_iter().filter(|&k| self.twist_pattern(k).pattern == parity).collect();
        if matching.len() != 1 {
            return None;
        }
        let k = matching[0];
        let pattern = self.twist_pattern(k);
        let tau = self.tau();
        let base = a
            .w
            .iter()
            .zip(&pattern.pattern)
            .map(|(w, &t)| if t { w.then(&tau) } else { *w })
            .collect();
        Some(MonolithElement { base, twist: k })
    }

    pub fn multiply(&self, a: &MonolithElement, b: &MonolithElement) -> MonolithElement {
        let prod = self.ambient(a).mul(&self.ambient(b));
        self.in_group(&prod).expect("G is closed under multiplication")
    }

    pub fn checked_multiply(&self, a: &MonolithElement, b: &MonolithElement) -> Result<MonolithElement> {
        for e in [a, b] {
            if e.base.len() != self.m || e.base.iter().any(|x| x.degree() != self.n) {
                return Err(Error::GroupMismatch(format!("element {e} does not belong to {self}")));
            }
        }
        Ok(self.multiply(a, b))
    }

    pub fn inverse(&self, a: &MonolithElement) -> MonolithElement {
        self.in_group(&self.ambient(a).inverse()).expect("G is closed under inversion")
    }

    /// The odd permutation `x_1 t_1 x_{1+k} t_{1+k} ...` attached to an element
    /// whose twist is coprime to `2m` (`r = 1`), or the `r` strand products
    /// `x_i x_{i+r} ... x_{i+m-r} t` of an element with twist exactly `r | m`.
    pub fn product_invariant(&self, e: &MonolithElement, r: usize) -> Result<Vec<Permutation>> {
        if self.case != Case::Odd {
            return Err(Error::WrongCase("product invariants are defined for the odd case".into()));
        }
        let m = self.m;
        let k = e.twist;
        let tau = self.tau();
        if r == 1 {
            if num_integer::gcd(k, 2 * m) != 1 {
                return Err(Error::Precondition(format!("twist {k} is not coprime to {}", 2 * m)));
            }
            let pattern = self.twist_pattern(k);
            let mut acc = Permutation::identity(self.n);
            for j in 0..m {
                let d = (j * k) % m;
                acc = acc.then(&e.base[d]);
                if pattern.pattern[d] {
                    acc = acc.then(&tau);
                }
            }
            return Ok(vec![acc]);
        }
        if m % r != 0 || k != r {
            return Err(Error::Precondition(format!("twist {k} incompatible with strand step {r} (m = {m})")));
        }
        Ok((0..r)
            .map(|i| {
                let mut acc = Permutation::identity(self.n);
                let mut d = i;
                while d < m {
                    acc = acc.then(&e.base[d]);
                    d += r;
                }
                acc.then(&tau)
            })
            .collect())
    }

    /// For odd `m` and twist 2: `x_1 x_3 ... x_m t x_2 x_4 ... x_{m-1} t`.
    pub fn odd_square_invariant(&self, e: &MonolithElement) -> Result<Permutation> {
        if self.case != Case::Odd || self.m % 2 == 0 || e.twist != 2 {
            return Err(Error::Precondition("needs odd case, odd m and twist 2".into()));
        }
        let tau = self.tau();
        let mut acc = Permutation::identity(self.n);
        for d in (0..self.m).step_by(2) {
            acc = acc.then(&e.base[d]);
        }
        acc = acc.then(&tau);
        for d in (1..self.m).step_by(2) {
            acc = acc.then(&e.base[d]);
        }
        Ok(acc.then(&tau))
    }

    /// Cycle type of `xy` for `(x, y) e` outside the socle of `A_n ≀ C_2`.
    pub fn element_type(&self, e: &MonolithElement) -> Result<CycleType> {
        if self.case != Case::EvenWreath || self.m != 2 {
            return Err(Error::WrongCase("element types are defined for A_n wr C_2".into()));
        }
        if e.twist == 0 {
            return Err(Error::WrongCase("socle elements have no type".into()));
        }
        Ok(e.base[0].then(&e.base[1]).cycle_type())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case {
            Case::Odd => write!(f, "A{}^{} x| C{}", self.n, self.m, 2 * self.m),
            Case::EvenWreath => write!(f, "A{} wr C{}", self.n, self.m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistPattern {
    pub k: usize,
    pub pattern: Vec<bool>,
}

/// `(x_1, ..., x_m) g^twist` with all `x_i` even.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonolithElement {
    pub twist: usize,
    pub base: Vec<Permutation>,
}

impl MonolithElement {
    pub fn is_socle(&self) -> bool {
        self.twist == 0
    }
}

impl fmt::Display for MonolithElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.base.iter().map(|x| x.to_string()).collect();
        write!(f, "({})·g^{}", parts.join(","), self.twist)
    }
}

impl fmt::Debug for MonolithElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(w_1, ..., w_m) d^shift` in `S_n ≀ C_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AmbientElement {
    pub w: Vec<Permutation>,
    pub shift: usize,
}

impl AmbientElement {
    pub fn mul(&self, other: &AmbientElement) -> AmbientElement {
        let m = self.w.len();
        let w = (0..m).map(|d| self.w[d].then(&other.w[(d + self.shift) % m])).collect();
        AmbientElement { w, shift: (self.shift + other.shift) % m }
    }

    pub fn inverse(&self) -> AmbientElement {
        let m = self.w.len();
        let back = (m - self.shift) % m;
        let w = (0..m).map(|d| self.w[(d + back) % m].inverse()).collect();
        AmbientElement { w, shift: back }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.w.iter().all(|x| x.is_identity())
    }
}

/// An enumerated monolithic group. Elements are ordered by twist, then
/// lexicographically by the base components (each in lexicographic order of
/// image tables), so indices are stable across runs.
#[derive(Clone, Debug)]
pub struct MonolithGroup {
    spec: GroupSpec,
    alternating: Vec<Permutation>,
    alt_index: Vec<u32>,
    socle_order: usize,
}

impl MonolithGroup {
    pub fn enumerate(spec: GroupSpec) -> Result<Self> {
        if !spec.enumerable() {
            return Err(Error::Capacity(format!(
                "{spec} has order {} above the enumeration limit {ENUMERATION_LIMIT}",
                spec.order()
            )));
        }
        let alternating = alternating_elements(spec.n)?;
        let total: usize = (1..=spec.n).product();
        let mut alt_index = vec![u32::MAX; total];
        for (i, x) in alternating.iter().enumerate() {
            alt_index[x.rank()] = i as u32;
        }
        Ok(MonolithGroup { spec, socle_order: spec.socle_order() as usize, alternating, alt_index })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn alternating(&self) -> &[Permutation] {
        &self.alternating
    }

    pub fn alt_index(&self, x: &Permutation) -> Option<usize> {
        let v = self.alt_index[x.rank()];
        (v != u32::MAX).then_some(v as usize)
    }

    pub fn socle_order(&self) -> usize {
        self.socle_order
    }

    /// Index range of the elements with a given twist.
    pub fn twist_slice(&self, k: usize) -> std::ops::Range<usize> {
        k * self.socle_order..(k + 1) * self.socle_order
    }

    pub fn elements(&self) -> impl Iterator<Item = (usize, MonolithElement)> + '_ {
        (0..self.order()).map(move |i| (i, self.element(i)))
    }
}

impl Group for MonolithGroup {
    type Elem = MonolithElement;

    fn identity(&self) -> MonolithElement {
        self.spec.identity()
    }

    fn mul(&self, a: &MonolithElement, b: &MonolithElement) -> MonolithElement {
        self.spec.multiply(a, b)
    }

    fn inv(&self, a: &MonolithElement) -> MonolithElement {
        self.spec.inverse(a)
    }
}

impl Universe for MonolithGroup {
    fn order(&self) -> usize {
        self.socle_order * self.spec.twist_modulus()
    }

    fn element(&self, i: usize) -> MonolithElement {
        let a = self.alternating.len();
        let twist = i / self.socle_order;
        let mut rest = i % self.socle_order;
        let mut base = vec![Permutation::identity(self.spec.n); self.spec.m];
        for d in (0..self.spec.m).rev() {
            base[d] = self.alternating[rest % a];
            rest /= a;
        }
        MonolithElement { base, twist }
    }

    fn index_of(&self, e: &MonolithElement) -> Option<usize> {
        if e.base.len() != self.spec.m || e.twist >= self.spec.twist_modulus() {
            return None;
        }
        let a = self.alternating.len();
        let mut idx = 0usize;
        for x in &e.base {
            if x.degree() != self.spec.n {
                return None;
            }
            idx = idx * a + self.alt_index(x)?;
        }
        Some(e.twist * self.socle_order + idx)
    }

    fn generators(&self) -> Vec<MonolithElement> {
        let n = self.spec.n;
        let mut gens: Vec<MonolithElement> = (3..=n)
            .map(|k| {
                let mut base = vec![Permutation::identity(n); self.spec.m];
                base[0] = Permutation::from_cycles(n, &[&[1, 2, k]]).expect("3-cycle");
                MonolithElement { base, twist: 0 }
            })
            .collect();
        if self.spec.twist_modulus() > 1 {
            gens.push(MonolithElement { base: vec![Permutation::identity(n); self.spec.m], twist: 1 });
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::closure;

    fn p(s: &str) -> Permutation {
        Permutation::parse(5, s).unwrap()
    }

    #[test]
    fn gamma_powers() {
        let spec = GroupSpec::odd(5, 2);
        let g2 = spec.gamma_power(2).unwrap();
        assert_eq!(g2.shift, 0);
        assert_eq!(g2.w, vec![p("(12)"), p("(12)")]);
        assert!(spec.gamma_power(4).unwrap().is_identity());
        let spec3 = GroupSpec::odd(5, 3);
        let g1 = spec3.gamma_power(1).unwrap();
        let taus: Vec<usize> = (0..3).filter(|&d| !g1.w[d].is_identity()).map(|d| d + 1).collect();
        assert_eq!(taus, vec![3]);
        assert!(GroupSpec::even(5, 2).gamma_power(1).is_err());
    }

    #[test]
    fn gamma_powers_match_twist_patterns() {
        for m in 1..=5 {
            let spec = GroupSpec::odd(5, m);
            for k in 0..2 * m {
                let g = spec.gamma_power(k).unwrap();
                let got: Vec<bool> = g.w.iter().map(|x| !x.is_identity()).collect();
                assert_eq!(got, spec.twist_pattern(k).pattern, "m={m} k={k}");
                assert_eq!(g.shift, k % m);
            }
            assert!(spec.gamma_power(2 * m).unwrap().is_identity());
        }
    }

    #[test]
    fn in_group_patterns() {
        let spec = GroupSpec::odd(5, 2);
        let e = spec.in_group(&AmbientElement { w: vec![p("(123)"), p("(345)")], shift: 0 }).unwrap();
        assert_eq!(e.twist, 0);
        let e = spec.in_group(&AmbientElement { w: vec![p("(123)"), p("(12)")], shift: 1 }).unwrap();
        assert_eq!(e.twist, 1);
        assert!(spec.in_group(&AmbientElement { w: vec![p("(12)"), p("(12)")], shift: 1 }).is_none());
    }

    #[test]
    fn inverse_twist() {
        let spec = GroupSpec::odd(5, 2);
        let e = spec.element(vec![p("(123)"), p("(12)(34)")], 1).unwrap();
        let inv = spec.inverse(&e);
        assert_eq!(inv.twist, 3);
        assert_eq!(spec.multiply(&e, &inv), spec.identity());
        assert_eq!(spec.multiply(&e, &spec.identity()), e);
    }

    #[test]
    fn orders_and_enumeration() {
        assert_eq!(GroupSpec::even(5, 2).order(), 7200);
        assert_eq!(GroupSpec::odd(5, 2).order(), 14400);
        assert_eq!(GroupSpec::odd(5, 1).order(), 120);
        assert!(!GroupSpec::odd(7, 2).enumerable());
        assert!(MonolithGroup::enumerate(GroupSpec::odd(7, 2)).is_err());
        let g = MonolithGroup::enumerate(GroupSpec::odd(5, 1)).unwrap();
        assert_eq!(closure(&g, &g.generators()).count(), 120);
        for i in 0..g.order() {
            assert_eq!(g.index(&g.element(i)), i);
        }
    }

    #[test]
    fn product_invariants() {
        let spec = GroupSpec::odd(5, 2);
        let id = spec.element(vec![Permutation::identity(5); 2], 1).unwrap();
        assert_eq!(spec.product_invariant(&id, 1).unwrap(), vec![p("(12)")]);
        let (x1, x2) = (p("(123)"), p("(345)"));
        let e = spec.element(vec![x1, x2], 1).unwrap();
        let eta = spec.product_invariant(&e, 1).unwrap()[0];
        assert_eq!(eta, x1.then(&x2).then(&p("(12)")));
        assert!(!eta.is_even());
        let e2 = spec.element(vec![x1, x2], 2).unwrap();
        assert_eq!(spec.product_invariant(&e2, 2).unwrap(), vec![x1.then(&p("(12)")), x2.then(&p("(12)"))]);
        assert!(spec.product_invariant(&e2, 1).is_err());
    }

    #[test]
    fn element_types() {
        let spec = GroupSpec::even(5, 2);
        let x = p("(12345)");
        let e = spec.element(vec![x, x.inverse()], 1).unwrap();
        assert_eq!(spec.element_type(&e).unwrap().parts(), &[1, 1, 1, 1, 1]);
        let e = spec.element(vec![p("(123)"), Permutation::identity(5)], 1).unwrap();
        assert_eq!(spec.element_type(&e).unwrap().nontrivial(), vec![3]);
        assert!(spec.element_type(&spec.identity()).is_err());
    }
}
