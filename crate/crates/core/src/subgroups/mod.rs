//! Maximal subgroups of `G`: socle-containing kernels `H_r`, normalizers of
//! product subgroups `M × M^{a_2} × ... × M^{a_m}` and normalizers of twisted
//! diagonals, each with a closed-form membership test and a brute-force
//! conjugation test.

pub mod catalog;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{is_maximal, Universe};
use crate::monolith::{Case, GroupSpec, MonolithElement, MonolithGroup};
use crate::perm::Permutation;

pub use catalog::{catalog_an_maximals, named_family, AnMaxSubgroup, Catalog, MaxKind, NamedFamily, SnMaxSubgroup};

/// A maximal (or candidate) subgroup of `G`, in canonical form.
///
/// `Product` stores `a_1 = 1, a_2, ..., a_m` with `a_d` the least element of
/// its right coset `N_{A_n}(M) a_d` whenever such an even representative
/// exists. `Diagonal` stores one conjugator per slot; slot `c` belongs to
/// block `c mod (m/q)` and the first `m/q` conjugators are the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubgroupDescriptor {
    Socle,
    TwistKernel { r: usize },
    Product { m: usize, conj: Vec<Permutation> },
    Diagonal { q: usize, conj: Vec<Permutation> },
    CatalogEntry { name: String },
}

impl SubgroupDescriptor {
    pub fn is_product(&self) -> bool {
        matches!(self, SubgroupDescriptor::Product { .. })
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, SubgroupDescriptor::Diagonal { .. })
    }

    pub fn product_factor(&self) -> Option<usize> {
        match self {
            SubgroupDescriptor::Product { m, .. } => Some(*m),
            _ => None,
        }
    }
}

/// Which closed-form criterion decides product-type membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductRule {
    /// Twist 0: every `a_d x_d a_d^-1` normalizes `M`.
    Socle,
    /// Twist coprime to `2m`.
    Coprime,
    /// Twist `r` dividing `m`.
    Divisor,
    /// Odd `m`, twist 2.
    OddSquare,
    /// `A_n ≀ C_2`, twist 1: `x l^-1, l y ∈ M`.
    Wreath,
    General,
}

#[derive(Clone, Debug)]
pub struct NormalizedCosets {
    pub descriptor: SubgroupDescriptor,
    /// No even rewrite exists for some slot; the given representative is kept.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pr2Report {
    pub n: usize,
    /// Primitive maximals of `S_n` (other than `A_n`) containing a `(2,n-2)`-cycle.
    pub primitive_hits: usize,
    pub imprimitive_subgroups: usize,
    /// Imprimitive maximals containing an `(n-1)`-cycle.
    pub imprimitive_hits: usize,
    /// Intransitive maximals containing both kinds.
    pub intransitive_hits: usize,
}

impl Pr2Report {
    pub fn passed(&self) -> bool {
        self.primitive_hits == 0 && self.imprimitive_hits == 0 && self.intransitive_hits == 0
    }
}

/// Membership tests and enumeration of maximal subgroups of one group `G`.
#[derive(Debug)]
pub struct Families {
    spec: GroupSpec,
    catalog: Arc<Catalog>,
    cache: Mutex<HashMap<SubgroupDescriptor, Arc<BitSet>>>,
}

impl Families {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        Ok(Families { spec, catalog: Arc::new(Catalog::new(spec.n)?), cache: Mutex::new(HashMap::new()) })
    }

    pub fn with_catalog(spec: GroupSpec, catalog: Arc<Catalog>) -> Result<Self> {
        if catalog.degree() != spec.n {
            return Err(Error::GroupMismatch(format!("catalog of degree {} for {spec}", catalog.degree())));
        }
        Ok(Families { spec, catalog, cache: Mutex::new(HashMap::new()) })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    /// Stable text form.
    pub fn describe(&self, d: &SubgroupDescriptor) -> String {
        match d {
            SubgroupDescriptor::Socle => "socle".into(),
            SubgroupDescriptor::TwistKernel { r } => format!("Hr[r={r}]"),
            SubgroupDescriptor::Product { m, conj } => {
                let mut parts = vec![format!("M={}", self.catalog.an(*m).name)];
                parts.extend(conj.iter().enumerate().skip(1).map(|(d, a)| format!("a{}={a}", d + 1)));
                format!("prod[{}]", parts.join("; "))
            }
            SubgroupDescriptor::Diagonal { q, conj } => {
                if conj.len() == 2 && *q == 2 {
                    return format!("diag[alpha={}]", conj[1]);
                }
                let s = conj.len() / q;
                let mut parts = vec![format!("q={q}")];
                parts.extend(conj.iter().enumerate().skip(s).map(|(c, b)| format!("b{}={b}", c + 1)));
                format!("diag[{}]", parts.join("; "))
            }
            SubgroupDescriptor::CatalogEntry { name } => format!("cat[{name}]"),
        }
    }

    fn check_shape(&self, d: &SubgroupDescriptor) -> Result<()> {
        let m = self.spec.m;
        let ok = match d {
            SubgroupDescriptor::Socle => true,
            SubgroupDescriptor::TwistKernel { r } => *r >= 1 && self.spec.twist_modulus() % r == 0,
            SubgroupDescriptor::Product { m: idx, conj } => {
                *idx < self.catalog.an_maximals().len()
                    && conj.len() == m
                    && conj[0].is_identity()
                    && conj.iter().all(|a| a.degree() == self.spec.n)
            }
            SubgroupDescriptor::Diagonal { q, conj } => {
                *q >= 2
                    && m % q == 0
                    && conj.len() == m
                    && conj[..m / q].iter().all(|b| b.is_identity())
                    && conj.iter().all(|a| a.degree() == self.spec.n)
            }
            SubgroupDescriptor::CatalogEntry { .. } => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("malformed descriptor {d:?} for {}", self.spec)))
        }
    }

    pub fn product_rule(&self, e: &MonolithElement) -> ProductRule {
        let m = self.spec.m;
        let k = e.twist;
        match self.spec.case {
            _ if k == 0 => ProductRule::Socle,
            Case::EvenWreath if m == 2 => ProductRule::Wreath,
            Case::EvenWreath => ProductRule::General,
            Case::Odd if k.gcd(&(2 * m)) == 1 => ProductRule::Coprime,
            Case::Odd if k < m && m % k == 0 || k == m => ProductRule::Divisor,
            Case::Odd if m % 2 == 1 && k == 2 => ProductRule::OddSquare,
            Case::Odd => ProductRule::General,
        }
    }

    /// Closed-form test for `e ∈ N_G(M × M^{a_2} × ... × M^{a_m})`.
    pub fn membership_product(&self, e: &MonolithElement, idx: usize, a: &[Permutation]) -> bool {
        let m = self.spec.m;
        let tau = self.spec.tau();
        let x = &e.base;
        let nm = |p: Permutation| self.catalog.normalizes(idx, &p);
        match self.product_rule(e) {
            ProductRule::Socle => (0..m).all(|d| nm(a[d].then(&x[d]).then(&a[d].inverse()))),
            ProductRule::Wreath => {
                let l = &a[1];
                self.catalog.contains(idx, &x[0].then(&l.inverse())) && self.catalog.contains(idx, &l.then(&x[1]))
            }
            ProductRule::Coprime => {
                let k = e.twist;
                let pattern = self.spec.twist_pattern(k).pattern;
                let step = if k < m { k } else { k - m };
                (0..m).all(|d| {
                    let t = if pattern[d] { x[d].then(&tau) } else { x[d] };
                    nm(a[d].then(&t).then(&a[(d + step) % m].inverse()))
                })
            }
            ProductRule::Divisor => {
                let r = e.twist;
                (0..r).all(|i| nm(a[m - r + i].then(&x[m - r + i]).then(&tau).then(&a[i].inverse())))
                    && (0..m - r).all(|i| nm(a[i].then(&x[i]).then(&a[r + i].inverse())))
            }
            ProductRule::OddSquare => {
                nm(a[m - 2].then(&x[m - 2]).then(&tau).then(&a[0].inverse()))
                    && nm(a[m - 1].then(&x[m - 1]).then(&tau).then(&a[1].inverse()))
                    && (0..m - 2).all(|i| nm(a[i].then(&x[i]).then(&a[i + 2].inverse())))
            }
            ProductRule::General => {
                let amb = self.spec.ambient(e);
                (0..m).all(|d| nm(a[d].then(&amb.w[d]).then(&a[(d + amb.shift) % m].inverse())))
            }
        }
    }

    /// Closed-form test for `e ∈ N_G(Δ)`.
    pub fn membership_diagonal(&self, e: &MonolithElement, q: usize, b: &[Permutation]) -> bool {
        let m = self.spec.m;
        let s = m / q;
        let x = &e.base;
        if self.spec.case == Case::EvenWreath && m == 2 && e.twist == 1 {
            let ay = b[1].then(&x[1]);
            return ay.then(&ay) == x[0].then(&x[1]);
        }
        if self.spec.case == Case::Odd && e.twist == 1 {
            let tau = self.spec.tau();
            let bij = |i: usize, j: usize| b[(i - 1) * s + j - 1];
            let xt = |t: usize| x[t - 1];
            let lhs = bij(q, s).then(&xt(m)).then(&tau);
            return (2..=q).all(|i| lhs.then(&bij(i, 1)) == bij(i - 1, s).then(&xt((i - 1) * s)))
                && (2..=q).all(|i| (1..s).all(|j| xt(j).then(&bij(i, j + 1)) == bij(i, j).then(&xt((i - 1) * s + j))));
        }
        let amb = self.spec.ambient(e);
        let k = amb.shift;
        (0..m).all(|d| {
            let j = (d + k) % s;
            let c = (j + m - k) % m;
            b[d].then(&amb.w[d]) == b[c].then(&amb.w[c]).then(&b[(d + k) % m])
        })
    }

    /// Closed-form membership for any descriptor of `G`.
    pub fn contains(&self, e: &MonolithElement, d: &SubgroupDescriptor) -> bool {
        match d {
            SubgroupDescriptor::Socle => e.twist == 0,
            SubgroupDescriptor::TwistKernel { r } => e.twist % r == 0,
            SubgroupDescriptor::Product { m, conj } => self.membership_product(e, *m, conj),
            SubgroupDescriptor::Diagonal { q, conj } => self.membership_diagonal(e, *q, conj),
            SubgroupDescriptor::CatalogEntry { .. } => false,
        }
    }

    /// Membership decided by conjugating generators of the normalized subgroup
    /// with the group multiplication.
    pub fn contains_brute(&self, e: &MonolithElement, d: &SubgroupDescriptor) -> bool {
        let spec = &self.spec;
        let m = spec.m;
        let einv = spec.inverse(e);
        let conj = |z: &MonolithElement| spec.multiply(&spec.multiply(&einv, z), e);
        let slot = |d: usize, p: Permutation| {
            let mut z = spec.identity();
            z.base[d] = p;
            z
        };
        match d {
            SubgroupDescriptor::Socle | SubgroupDescriptor::TwistKernel { .. } => {
                let r = match d {
                    SubgroupDescriptor::TwistKernel { r } => *r,
                    _ => spec.twist_modulus(),
                };
                // C_M has a unique subgroup of index r: the elements whose
                // (M/r)-th power is trivial.
                let mut p = spec.identity();
                for _ in 0..spec.twist_modulus() / r {
                    p = spec.multiply(&p, e);
                }
                p.is_socle()
            }
            SubgroupDescriptor::Product { m: idx, conj: a } => {
                let gens = &self.catalog.an(*idx).generators;
                (0..m).all(|dd| {
                    gens.iter().all(|s| {
                        let z = conj(&slot(dd, a[dd].inverse().then(s).then(&a[dd])));
                        z.twist == 0
                            && (0..m).all(|j| self.catalog.contains(*idx, &a[j].then(&z.base[j]).then(&a[j].inverse())))
                    })
                })
            }
            SubgroupDescriptor::Diagonal { q, conj: b } => {
                let s = m / q;
                let alt_gens = self.catalog.alternating().generators();
                (0..s).all(|j| {
                    alt_gens.iter().all(|t| {
                        let mut z = spec.identity();
                        for c in (j..m).step_by(s) {
                            z.base[c] = b[c].inverse().then(t).then(&b[c]);
                        }
                        let w = conj(&z);
                        w.twist == 0
                            && (0..m).all(|c| w.base[c] == b[c].inverse().then(&w.base[c % s]).then(&b[c]))
                    })
                })
            }
            SubgroupDescriptor::CatalogEntry { .. } => false,
        }
    }

    fn check_group(&self, g: &MonolithGroup) -> Result<()> {
        if *g.spec() != self.spec {
            return Err(Error::GroupMismatch(format!("universe {} vs families for {}", g.spec(), self.spec)));
        }
        Ok(())
    }

    /// Element bitset of a descriptor, computed once with the closed-form test.
    pub fn expand(&self, g: &MonolithGroup, d: &SubgroupDescriptor) -> Result<Arc<BitSet>> {
        self.check_group(g)?;
        self.check_shape(d)?;
        if let Some(hit) = self.cache.lock().expect("cache lock").get(d) {
            return Ok(hit.clone());
        }
        let set = Arc::new(BitSet::from_indices(
            g.order(),
            g.elements().filter(|(_, e)| self.contains(e, d)).map(|(i, _)| i),
        ));
        Ok(self.cache.lock().expect("cache lock").entry(d.clone()).or_insert(set).clone())
    }

    /// Same as [`Families::expand`] but with the conjugation test, uncached.
    pub fn expand_brute(&self, g: &MonolithGroup, d: &SubgroupDescriptor) -> Result<BitSet> {
        self.check_group(g)?;
        self.check_shape(d)?;
        Ok(BitSet::from_indices(g.order(), g.elements().filter(|(_, e)| self.contains_brute(e, d)).map(|(i, _)| i)))
    }

    /// Rewrites product-type representatives into least even coset members.
    pub fn normalized_cosets(&self, d: &SubgroupDescriptor) -> Result<NormalizedCosets> {
        let SubgroupDescriptor::Product { m: idx, conj } = d else {
            return Ok(NormalizedCosets { descriptor: d.clone(), flagged: false });
        };
        if *idx >= self.catalog.an_maximals().len() || conj.len() != self.spec.m {
            return Err(Error::Precondition(format!("malformed product descriptor {d:?}")));
        }
        let sym = self.catalog.symmetric();
        let normalizer = sym.members(&self.catalog.an(*idx).normalizer_elements);
        let mut flagged = false;
        let mut out = vec![Permutation::identity(self.spec.n)];
        for b in &conj[1..] {
            match normalizer.iter().map(|v| v.then(b)).filter(|a| a.is_even()).min() {
                Some(a) => out.push(a),
                None => {
                    flagged = true;
                    out.push(*b);
                }
            }
        }
        Ok(NormalizedCosets { descriptor: SubgroupDescriptor::Product { m: *idx, conj: out }, flagged })
    }

    /// Least elements of the right cosets `N_{A_n}(M) a` in `A_n`.
    pub fn coset_minima(&self, idx: usize) -> Vec<Permutation> {
        let alt = self.catalog.alternating();
        let nm: Vec<Permutation> = self
            .catalog
            .symmetric()
            .members(&self.catalog.an(idx).normalizer_elements)
            .into_iter()
            .filter(|v| v.is_even())
            .collect();
        let reps: BTreeSet<Permutation> =
            alt.elements().iter().map(|a| nm.iter().map(|v| v.then(a)).min().expect("identity")).collect();
        reps.into_iter().collect()
    }

    /// The maximal subgroups of `G` for `m <= 2`, in canonical order.
    ///
    /// Socle-containing subgroups are the kernels `H_r` for primes `r` dividing
    /// the twist modulus. Product types use every catalog entry `M` whose
    /// `S_n`-normalizer has odd elements (any entry in the even case), with all
    /// coset choices. Diagonal types appear only in the even case: over an
    /// even number of odd-case factors no element of twist 1 normalizes a
    /// diagonal, so those normalizers sit inside `H_2`.
    pub fn enumerate_maximals(&self) -> Result<Vec<SubgroupDescriptor>> {
        let m = self.spec.m;
        if m > 2 {
            return Err(Error::Unsupported(format!("maximal subgroup lists are built for m <= 2, got {}", self.spec)));
        }
        let modulus = self.spec.twist_modulus();
        let mut out = Vec::new();
        for r in (2..=modulus).filter(|&r| modulus % r == 0 && is_prime(r)) {
            out.push(if r == modulus { SubgroupDescriptor::Socle } else { SubgroupDescriptor::TwistKernel { r } });
        }
        let id = Permutation::identity(self.spec.n);
        for entry in self.catalog.an_maximals() {
            if self.spec.case == Case::Odd && entry.normalizer_elements.count() == entry.order() {
                continue;
            }
            if m == 1 {
                out.push(SubgroupDescriptor::Product { m: entry.index, conj: vec![id] });
                continue;
            }
            for a in self.coset_minima(entry.index) {
                out.push(SubgroupDescriptor::Product { m: entry.index, conj: vec![id, a] });
            }
        }
        if self.spec.case == Case::EvenWreath && m == 2 {
            for alpha in self.catalog.symmetric().elements() {
                out.push(SubgroupDescriptor::Diagonal { q: 2, conj: vec![id, *alpha] });
            }
        }
        out.sort();
        Ok(out)
    }

    /// Expands every descriptor and checks maximality (primitive coset action)
    /// and pairwise distinctness. Returns the expanded sets in input order.
    pub fn certify_maximal(&self, g: &MonolithGroup, list: &[SubgroupDescriptor]) -> Result<Vec<Arc<BitSet>>> {
        let sets = list.par_iter().map(|d| self.expand(g, d)).collect::<Result<Vec<_>>>()?;
        let flags: Vec<bool> = sets.par_iter().map(|s| is_maximal(g, s)).collect();
        if let Some(i) = flags.iter().position(|ok| !ok) {
            return Err(Error::Verification(format!("{} is not maximal", self.describe(&list[i]))));
        }
        let distinct: std::collections::HashSet<&BitSet> = sets.iter().map(|s| s.as_ref()).collect();
        if distinct.len() != sets.len() {
            return Err(Error::Verification("two descriptors expand to the same subgroup".into()));
        }
        Ok(sets)
    }
}

impl fmt::Display for ProductRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProductRule::Socle => "socle",
            ProductRule::Coprime => "coprime twist",
            ProductRule::Divisor => "twist dividing m",
            ProductRule::OddSquare => "twist 2, m odd",
            ProductRule::Wreath => "wreath",
            ProductRule::General => "general",
        };
        f.write_str(s)
    }
}

fn is_prime(r: usize) -> bool {
    r >= 2 && (2..r).take_while(|d| d * d <= r).all(|d| r % d != 0)
}

/// Exhaustive check over the `S_n` catalog: no primitive maximal subgroup
/// contains a `(2,n-2)`-cycle, no imprimitive one an `(n-1)`-cycle, and no
/// intransitive one both.
pub fn check_pr2(n: usize) -> Result<Pr2Report> {
    if n % 2 == 0 || !(5..=7).contains(&n) {
        return Err(Error::Unsupported(format!("check_pr2 needs odd n in 5..=7, got {n}")));
    }
    let cat = Catalog::new(n)?;
    let sym = cat.symmetric();
    let shape = |p: &Permutation| p.cycle_type().nontrivial();
    let two = |p: &Permutation| shape(p) == vec![(n - 2) as u8, 2];
    let long = |p: &Permutation| shape(p) == vec![(n - 1) as u8];
    let mut report =
        Pr2Report { n, primitive_hits: 0, imprimitive_subgroups: 0, imprimitive_hits: 0, intransitive_hits: 0 };
    for k in cat.sn_maximals() {
        let members = sym.members(&k.elements);
        match k.kind {
            MaxKind::Primitive { .. } => report.primitive_hits += members.iter().any(two) as usize,
            MaxKind::Imprimitive { .. } => {
                report.imprimitive_subgroups += 1;
                report.imprimitive_hits += members.iter().any(long) as usize;
            }
            MaxKind::Intransitive { .. } => {
                report.intransitive_hits += (members.iter().any(two) && members.iter().any(long)) as usize
            }
            MaxKind::Alternating => {}
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monolith::GroupSpec;
    use crate::perm::count_roots;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    fn breakdown(f: &Families, list: &[SubgroupDescriptor]) -> Vec<(String, usize)> {
        let mut h: std::collections::BTreeMap<String, usize> = Default::default();
        for d in list {
            let key = match d {
                SubgroupDescriptor::Product { m, .. } => format!("prod{}", f.catalog().an(*m).order()),
                SubgroupDescriptor::Diagonal { .. } => "diag".into(),
                other => f.describe(other),
            };
            *h.entry(key).or_default() += 1;
        }
        h.into_iter().collect()
    }

    #[test]
    fn census_odd_5_2() {
        let f = Families::new(GroupSpec::odd(5, 2)).unwrap();
        let list = f.enumerate_maximals().unwrap();
        assert_eq!(list.len(), 162);
        assert_eq!(
            breakdown(&f, &list),
            vec![("Hr[r=2]".into(), 1), ("prod10".into(), 36), ("prod12".into(), 25), ("prod6".into(), 100)]
        );
        let g = MonolithGroup::enumerate(*f.spec()).unwrap();
        f.certify_maximal(&g, &list).unwrap();
    }

    #[test]
    fn census_even_5_2() {
        let f = Families::new(GroupSpec::even(5, 2)).unwrap();
        let list = f.enumerate_maximals().unwrap();
        assert_eq!(
            breakdown(&f, &list),
            vec![
                ("diag".into(), 120),
                ("prod10".into(), 36),
                ("prod12".into(), 25),
                ("prod6".into(), 100),
                ("socle".into(), 1)
            ]
        );
        let g = MonolithGroup::enumerate(*f.spec()).unwrap();
        f.certify_maximal(&g, &list).unwrap();
    }

    #[test]
    fn degree_one_wreath_matches_symmetric_catalog() {
        for n in [5, 6] {
            let spec = GroupSpec::odd(n, 1);
            let f = Families::new(spec).unwrap();
            let g = MonolithGroup::enumerate(spec).unwrap();
            let list = f.enumerate_maximals().unwrap();
            let sets = f.certify_maximal(&g, &list).unwrap();
            let sym = f.catalog().symmetric();
            let to_sym = |s: &BitSet| {
                let mut v: Vec<usize> = s.iter().map(|i| sym.index(&spec.ambient(&g.element(i)).w[0])).collect();
                v.sort_unstable();
                v
            };
            let mut ours: Vec<Vec<usize>> = sets.iter().map(|s| to_sym(s)).collect();
            let mut theirs: Vec<Vec<usize>> = f.catalog().sn_maximals().iter().map(|k| k.elements.iter().collect()).collect();
            ours.sort();
            theirs.sort();
            assert_eq!(ours, theirs, "n = {n}");
        }
    }

    #[test]
    fn supplement_element_from_construction() {
        let spec = GroupSpec::odd(5, 2);
        let f = Families::new(spec).unwrap();
        let idx = f.catalog().find("stab(1)").unwrap().index;
        let a2 = p(5, "(123)");
        let tau = spec.tau();
        // x_1 = a_2 and x_1 x_2 t an odd element of N(M) = Stab(1).
        let eta = p(5, "(2345)");
        let x2 = a2.inverse().then(&eta).then(&tau);
        let e = spec.element(vec![a2, x2], 1).unwrap();
        let d = SubgroupDescriptor::Product { m: idx, conj: vec![Permutation::identity(5), a2] };
        assert!(f.contains(&e, &d));
        assert!(f.contains_brute(&e, &d));
        let bad = spec.element(vec![a2, a2.inverse().then(&p(5, "(12)(345)")).then(&tau)], 1).unwrap();
        assert!(!f.contains(&bad, &d));
        assert!(!f.contains_brute(&bad, &d));
    }

    #[test]
    fn twist_one_slice_count_matches_shape() {
        let spec = GroupSpec::odd(5, 2);
        let f = Families::new(spec).unwrap();
        let g = MonolithGroup::enumerate(spec).unwrap();
        for name in ["stab(1)", "intr{45}", "D10#1"] {
            let entry = f.catalog().find(name).unwrap();
            let d = SubgroupDescriptor::Product { m: entry.index, conj: vec![Permutation::identity(5), p(5, "(135)")] };
            let set = f.expand(&g, &d).unwrap();
            let slice = BitSet::from_indices(g.order(), g.twist_slice(1));
            let odd = entry.normalizer_elements.count() - entry.order();
            assert_eq!(set.intersection_count(&slice), entry.order() * odd, "{name}");
        }
    }

    #[test]
    fn wreath_diagonal_criteria() {
        let spec = GroupSpec::even(5, 2);
        let f = Families::new(spec).unwrap();
        let id = Permutation::identity(5);
        let diag = |alpha: Permutation| SubgroupDescriptor::Diagonal { q: 2, conj: vec![id, alpha] };
        for x in f.catalog().alternating().elements() {
            let e = spec.element(vec![*x, x.inverse()], 1).unwrap();
            assert_eq!(f.contains(&e, &diag(id)), x.then(x).is_identity());
        }
        let c = p(5, "(12345)");
        for x in f.catalog().alternating().elements().iter().step_by(7) {
            let e = spec.element(vec![*x, x.inverse().then(&c)], 1).unwrap();
            for alpha in f.catalog().symmetric().elements() {
                let member = f.contains(&e, &diag(*alpha));
                assert_eq!(member, *alpha == c.then(&c).then(x));
                assert_eq!(member, f.contains_brute(&e, &diag(*alpha)));
            }
        }
    }

    #[test]
    fn odd_diagonals_have_no_supplement() {
        let spec = GroupSpec::odd(5, 2);
        let f = Families::new(spec).unwrap();
        let g = MonolithGroup::enumerate(spec).unwrap();
        let id = Permutation::identity(5);
        let odd_twist: Vec<MonolithElement> =
            g.twist_slice(1).chain(g.twist_slice(3)).map(|i| g.element(i)).collect();
        for alpha in f.catalog().symmetric().elements() {
            let d = SubgroupDescriptor::Diagonal { q: 2, conj: vec![id, *alpha] };
            assert!(odd_twist.iter().all(|e| !f.contains(e, &d)));
        }
    }

    fn diagonal_census(spec: GroupSpec, f: &Families, conj: Vec<Permutation>) -> HashMap<Permutation, u64> {
        let alt = f.catalog().alternating().elements().to_vec();
        let d = SubgroupDescriptor::Diagonal { q: 3, conj };
        let mut counts: HashMap<Permutation, u64> = HashMap::new();
        for x in &alt {
            for y in &alt {
                for z in &alt {
                    let e = spec.element(vec![*x, *y, *z], 1).unwrap();
                    if f.contains(&e, &d) {
                        assert!(f.contains_brute(&e, &d));
                        *counts.entry(x.then(y).then(z).then(&spec.tau())).or_default() += 1;
                    }
                }
            }
        }
        counts
    }

    #[test]
    fn diagonal_root_census_three_factors() {
        let spec = GroupSpec::odd(5, 3);
        let f = Families::new(spec).unwrap();
        let id = Permutation::identity(5);
        let counts = diagonal_census(spec, &f, vec![id, p(5, "(12)"), p(5, "(245)")]);
        for b in f.catalog().symmetric().elements() {
            let want = if b.is_even() { 0 } else { count_roots(b, 3).unwrap() };
            assert_eq!(counts.get(b).copied().unwrap_or(0), want, "{b}");
        }
        // With both conjugators odd the parity constraints admit no twist-1
        // element at all, so the root count only applies to supplements.
        assert!(diagonal_census(spec, &f, vec![id, p(5, "(12)"), p(5, "(2453)")]).is_empty());
    }

    #[test]
    fn coset_normalization() {
        let spec = GroupSpec::odd(5, 2);
        let f = Families::new(spec).unwrap();
        let id = Permutation::identity(5);
        let mut seen = BTreeSet::new();
        for i in 1..=5 {
            let idx = f.catalog().find(&format!("stab({i})")).unwrap().index;
            for b in f.catalog().symmetric().elements() {
                let d = SubgroupDescriptor::Product { m: idx, conj: vec![id, *b] };
                let once = f.normalized_cosets(&d).unwrap();
                assert!(!once.flagged);
                let twice = f.normalized_cosets(&once.descriptor).unwrap();
                assert_eq!(once.descriptor, twice.descriptor);
                seen.insert(once.descriptor);
            }
        }
        assert_eq!(seen.len(), 25);
        let idx = f.catalog().find("stab(1)").unwrap().index;
        let a = p(5, "(123)");
        let b = p(5, "(2345)").then(&a);
        let d = SubgroupDescriptor::Product { m: idx, conj: vec![id, b] };
        let want = f.coset_minima(idx).into_iter().find(|r| f.catalog().conjugate_index(idx, r) == f.catalog().conjugate_index(idx, &a));
        assert_eq!(f.normalized_cosets(&d).unwrap().descriptor, SubgroupDescriptor::Product { m: idx, conj: vec![id, want.unwrap()] });
    }

    #[test]
    fn fano_products_cannot_be_rewritten_by_odd_elements() {
        let f = Families::new(GroupSpec::even(7, 2)).unwrap();
        let entry = f.catalog().an_maximals().iter().find(|m| m.order() == 168).unwrap();
        let id = Permutation::identity(7);
        let d = SubgroupDescriptor::Product { m: entry.index, conj: vec![id, p(7, "(12)")] };
        assert!(f.normalized_cosets(&d).unwrap().flagged);
    }

    #[test]
    fn descriptor_text() {
        let f = Families::new(GroupSpec::odd(5, 2)).unwrap();
        let idx = f.catalog().find("stab(1)").unwrap().index;
        let id = Permutation::identity(5);
        let d = SubgroupDescriptor::Product { m: idx, conj: vec![id, p(5, "(123)")] };
        assert_eq!(f.describe(&d), "prod[M=stab(1); a2=(123)]");
        assert_eq!(f.describe(&SubgroupDescriptor::Diagonal { q: 2, conj: vec![id, p(5, "(12)")] }), "diag[alpha=(12)]");
        assert_eq!(f.describe(&SubgroupDescriptor::TwistKernel { r: 2 }), "Hr[r=2]");
        assert_eq!(f.describe(&SubgroupDescriptor::Socle), "socle");
    }

    #[test]
    fn pr2_claims() {
        let five = check_pr2(5).unwrap();
        assert!(five.passed());
        assert_eq!(five.imprimitive_subgroups, 0);
        let seven = check_pr2(7).unwrap();
        assert!(seven.passed());
        assert!(check_pr2(6).is_err());
    }
}
