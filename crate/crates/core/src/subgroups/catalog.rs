//! Maximal subgroups of `A_n` and `S_n` for small `n`.
//!
//! For `5 <= n <= 7` the catalogs are complete: every maximal subgroup of
//! `S_n` comes from an intransitive, imprimitive or primitive family seeded by
//! a representative, all conjugates are listed, and each `A_n` entry is
//! either `K ∩ A_n` for such a `K` (kept only when it is maximal in `A_n`) or
//! one of the two `PSL(2,7)` classes of `A_7`. Maximality of every entry is
//! checked by primitivity of the coset action; completeness can be checked
//! with the two-generator oracle (see [`Catalog::verify_complete`]).

use std::collections::HashMap;
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{conjugates, is_maximal, normalizer, subgroup_generators, verify_maximal_list, PermGroup};
use crate::group::Universe;
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MaxKind {
    /// Stabilizer of the smaller orbit (points 1-based, sorted).
    Intransitive { orbit: Vec<u8> },
    /// Stabilizer of a block system.
    Imprimitive { blocks: Vec<Vec<u8>> },
    Primitive { tag: &'static str },
    /// `A_n` inside `S_n`.
    Alternating,
}

impl MaxKind {
    fn moved_by(&self, g: &Permutation) -> MaxKind {
        let img = |pts: &[u8]| {
            let mut v: Vec<u8> = pts.iter().map(|&p| g.image(p as usize) as u8).collect();
            v.sort_unstable();
            v
        };
        match self {
            MaxKind::Intransitive { orbit } => MaxKind::Intransitive { orbit: img(orbit) },
            MaxKind::Imprimitive { blocks } => {
                let mut b: Vec<Vec<u8>> = blocks.iter().map(|x| img(x)).collect();
                b.sort();
                MaxKind::Imprimitive { blocks: b }
            }
            other => other.clone(),
        }
    }

    /// `(k, n-k)` for intransitive entries.
    pub fn intransitive_type(&self, n: usize) -> Option<(usize, usize)> {
        match self {
            MaxKind::Intransitive { orbit } => Some((n - orbit.len(), orbit.len())),
            _ => None,
        }
    }

    pub fn block_size(&self) -> Option<usize> {
        match self {
            MaxKind::Imprimitive { blocks } => Some(blocks[0].len()),
            _ => None,
        }
    }
}

fn digits(pts: &[u8]) -> String {
    let sep = if pts.iter().any(|&p| p >= 10) { "," } else { "" };
    pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for MaxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxKind::Intransitive { orbit } if orbit.len() == 1 => write!(f, "stab({})", orbit[0]),
            MaxKind::Intransitive { orbit } => write!(f, "intr{{{}}}", digits(orbit)),
            MaxKind::Imprimitive { blocks } => {
                let parts: Vec<String> = blocks.iter().map(|b| digits(b)).collect();
                write!(f, "imp{{{}}}", parts.join("|"))
            }
            MaxKind::Primitive { tag } => write!(f, "{tag}"),
            MaxKind::Alternating => write!(f, "alt"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SnMaxSubgroup {
    pub kind: MaxKind,
    pub name: String,
    /// Over the `S_n` universe.
    pub elements: BitSet,
}

#[derive(Clone, Debug)]
pub struct AnMaxSubgroup {
    pub index: usize,
    pub kind: MaxKind,
    pub name: String,
    /// Over the `A_n` universe.
    pub elements: BitSet,
    /// `N_{S_n}(M)`, over the `S_n` universe.
    pub normalizer_elements: BitSet,
    pub generators: Vec<Permutation>,
    /// Conjugacy class under `A_n` (entries of one class share the number).
    pub class: usize,
}

impl AnMaxSubgroup {
    pub fn order(&self) -> usize {
        self.elements.count()
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    n: usize,
    sym: PermGroup,
    alt: PermGroup,
    sn: Vec<SnMaxSubgroup>,
    an: Vec<AnMaxSubgroup>,
    by_set: HashMap<BitSet, usize>,
}

fn perm_from_fn(n: usize, f: impl Fn(usize) -> usize) -> Permutation {
    let images: Vec<usize> = (0..n).map(|i| f(i) + 1).collect();
    Permutation::from_images(&images).expect("bijection")
}

/// Primitive maximal subgroups of `S_n` other than `A_n`, as generators.
fn primitive_seed(n: usize) -> Option<(&'static str, Vec<Permutation>)> {
    match n {
        5 | 7 => {
            let root = if n == 5 { 2 } else { 3 };
            let tag = if n == 5 { "F20" } else { "AGL(1,7)" };
            Some((tag, vec![perm_from_fn(n, |x| (x + 1) % n), perm_from_fn(n, |x| (x * root) % n)]))
        }
        6 => {
            // PGL(2,5) on the projective line; point 5 is infinity.
            let inv = [5usize, 4, 2, 3, 1, 0];
            Some((
                "PGL(2,5)",
                vec![
                    perm_from_fn(6, |x| if x == 5 { 5 } else { (x + 1) % 5 }),
                    perm_from_fn(6, |x| if x == 5 { 5 } else { (2 * x) % 5 }),
                    perm_from_fn(6, |x| inv[x]),
                ],
            ))
        }
        _ => None,
    }
}

/// Tag for `K ∩ A_n` with `K` primitive.
fn primitive_an_tag(n: usize) -> &'static str {
    match n {
        5 => "D10",
        6 => "PSL(2,5)",
        _ => "7:3",
    }
}

/// `GL(3,2)` acting on the seven nonzero vectors of `F_2^3`.
pub fn fano_group_generators() -> Vec<Permutation> {
    let act = |f: fn(u8) -> u8| perm_from_fn(7, |i| f(i as u8 + 1) as usize - 1);
    vec![
        act(|v| v ^ ((v >> 1) & 1)),
        act(|v| ((v << 1) | (v >> 2)) & 7),
    ]
}

impl Catalog {
    /// Complete catalogs for `5 <= n <= 7`.
    pub fn new(n: usize) -> Result<Self> {
        if !(5..=7).contains(&n) {
            return Err(Error::Unsupported(format!("maximal subgroup catalog needs 5 <= n <= 7, got {n}")));
        }
        let sym = PermGroup::symmetric(n)?;
        let alt = PermGroup::alternating(n)?;

        let mut seeds: Vec<(MaxKind, BitSet)> = Vec::new();
        for k in 1..=n {
            if 2 * k >= n {
                break;
            }
            let orbit: Vec<u8> = ((n - k + 1) as u8..=n as u8).collect();
            let set = sym.subset(|p| orbit.iter().all(|&x| orbit.contains(&(p.image(x as usize) as u8))));
            seeds.push((MaxKind::Intransitive { orbit }, set));
        }
        for b in 2..n {
            if n % b != 0 {
                continue;
            }
            let blocks: Vec<Vec<u8>> =
                (0..n / b).map(|j| ((j * b + 1) as u8..=((j + 1) * b) as u8).collect()).collect();
            let block_of = |x: usize| (x - 1) / b;
            let set = sym.subset(|p| {
                (1..=n).all(|x| (1..=n).all(|y| (block_of(x) == block_of(y)) == (block_of(p.image(x)) == block_of(p.image(y)))))
            });
            seeds.push((MaxKind::Imprimitive { blocks }, set));
        }
        let prim = primitive_seed(n).expect("seed exists for 5 <= n <= 7");
        let prim_group = PermGroup::generated(n, &prim.1)?;
        seeds.push((MaxKind::Primitive { tag: prim.0 }, sym.set_of(prim_group.elements())));

        let mut sn = vec![SnMaxSubgroup {
            kind: MaxKind::Alternating,
            name: format!("A{n}"),
            elements: sym.subset(|p| p.is_even()),
        }];
        for (kind, set) in &seeds {
            for (ordinal, (conj, g)) in conjugates(&sym, set).into_iter().enumerate() {
                let moved = kind.moved_by(&sym.element(g));
                let name = match &moved {
                    MaxKind::Primitive { tag } => format!("{tag}#{}", ordinal + 1),
                    other => other.to_string(),
                };
                sn.push(SnMaxSubgroup { kind: moved, name, elements: conj });
            }
        }

        let to_alt = |s: &BitSet| BitSet::from_indices(alt.order(), s.iter().filter_map(|i| alt.index_of(&sym.element(i))));
        let to_sym = |s: &BitSet| BitSet::from_indices(sym.order(), s.iter().map(|i| sym.index(&alt.element(i))));

        let mut candidates: Vec<(MaxKind, String, BitSet)> = Vec::new();
        for k in sn.iter().skip(1) {
            let kind = match &k.kind {
                MaxKind::Primitive { .. } => MaxKind::Primitive { tag: primitive_an_tag(n) },
                other => other.clone(),
            };
            let name = match &kind {
                MaxKind::Primitive { tag } => format!("{tag}#{}", k.name.rsplit('#').next().unwrap_or("1")),
                other => other.to_string(),
            };
            let m = to_alt(&k.elements);
            if is_maximal(&alt, &m) {
                candidates.push((kind, name, m));
            }
        }
        if n == 7 {
            let fano = PermGroup::generated(7, &fano_group_generators())?;
            let rep = alt.set_of(fano.elements());
            let mut all: Vec<BitSet> = conjugates(&sym, &to_sym(&rep)).into_iter().map(|(c, _)| to_alt(&c)).collect();
            all.sort();
            for (j, m) in all.into_iter().enumerate() {
                candidates.push((MaxKind::Primitive { tag: "L3(2)" }, format!("L3(2)#{}", j + 1), m));
            }
        }

        let mut an: Vec<AnMaxSubgroup> = Vec::new();
        let mut by_set = HashMap::new();
        let mut class_of: HashMap<BitSet, usize> = HashMap::new();
        let mut classes = 0;
        for (kind, name, elements) in candidates {
            if by_set.contains_key(&elements) {
                continue;
            }
            let class = match class_of.get(&elements) {
                Some(&c) => c,
                None => {
                    for (c, _) in conjugates(&alt, &elements) {
                        class_of.insert(c, classes);
                    }
                    classes += 1;
                    classes - 1
                }
            };
            let as_sym = to_sym(&elements);
            let normalizer_elements = normalizer(&sym, &as_sym);
            let generators = subgroup_generators(&alt, &elements);
            by_set.insert(elements.clone(), an.len());
            an.push(AnMaxSubgroup {
                index: an.len(),
                kind,
                name,
                elements,
                normalizer_elements,
                generators,
                class,
            });
        }
        Ok(Catalog { n, sym, alt, sn, an, by_set })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn symmetric(&self) -> &PermGroup {
        &self.sym
    }

    pub fn alternating(&self) -> &PermGroup {
        &self.alt
    }

    pub fn an_maximals(&self) -> &[AnMaxSubgroup] {
        &self.an
    }

    pub fn sn_maximals(&self) -> &[SnMaxSubgroup] {
        &self.sn
    }

    pub fn an(&self, index: usize) -> &AnMaxSubgroup {
        &self.an[index]
    }

    /// Catalog index of a subgroup of `A_n` given as a bitset, if listed.
    pub fn lookup(&self, set: &BitSet) -> Option<usize> {
        self.by_set.get(set).copied()
    }

    pub fn find(&self, name: &str) -> Option<&AnMaxSubgroup> {
        self.an.iter().find(|m| m.name == name)
    }

    pub fn contains(&self, index: usize, x: &Permutation) -> bool {
        self.alt.index_of(x).is_some_and(|i| self.an[index].elements.contains(i))
    }

    /// `x ∈ N_{S_n}(M)`.
    pub fn normalizes(&self, index: usize, x: &Permutation) -> bool {
        self.an[index].normalizer_elements.contains(x.rank())
    }

    /// `M^a` as a catalog index.
    pub fn conjugate_index(&self, index: usize, a: &Permutation) -> Option<usize> {
        let ai = a.inverse();
        let set = BitSet::from_indices(
            self.alt.order(),
            self.alt.members(&self.an[index].elements).iter().map(|x| self.alt.index(&ai.then(x).then(a))),
        );
        self.lookup(&set)
    }

    /// Runs the two-generator oracle against both lists.
    pub fn verify_complete(&self) -> std::result::Result<(), String> {
        let an: Vec<BitSet> = self.an.iter().map(|m| m.elements.clone()).collect();
        verify_maximal_list(&self.alt, &an).map_err(|e| format!("A_{}: {e}", self.n))?;
        let sn: Vec<BitSet> = self.sn.iter().map(|m| m.elements.clone()).collect();
        verify_maximal_list(&self.sym, &sn).map_err(|e| format!("S_{}: {e}", self.n))
    }

    /// Every entry of both lists is maximal (primitivity of the coset action).
    pub fn all_maximal(&self) -> bool {
        self.an.iter().all(|m| is_maximal(&self.alt, &m.elements))
            && self.sn.iter().all(|k| is_maximal(&self.sym, &k.elements))
    }
}

pub fn catalog_an_maximals(n: usize) -> Result<Catalog> {
    Catalog::new(n)
}

/// Representatives of the families of `S_8` and `S_9` that the bounds for
/// `n >= 8` refer to. Maximality is taken from the literature, not checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedFamily {
    /// `S_k × S_{n-k}`, moving `{1..k}` and `{k+1..n}`.
    Intransitive(usize),
    /// `S_b ≀ S_{n/b}` on consecutive blocks of size `b`.
    Imprimitive(usize),
    /// `AGL(2,3)` on the nine points of `F_3^2`.
    Agl23,
}

pub fn named_family(n: usize, family: NamedFamily) -> Result<PermGroup> {
    if !(5..=9).contains(&n) {
        return Err(Error::Unsupported(format!("named families are built for n <= 9, got {n}")));
    }
    let cyc = |pts: Vec<usize>| -> Result<Permutation> { Permutation::from_cycles(n, &[&pts]) };
    let mut gens = Vec::new();
    match family {
        NamedFamily::Intransitive(k) => {
            if k == 0 || k >= n {
                return Err(Error::Precondition(format!("orbit size {k} out of range")));
            }
            for (lo, hi) in [(1, k), (k + 1, n)] {
                if hi > lo {
                    gens.push(Permutation::transposition(n, lo, lo + 1));
                    gens.push(cyc((lo..=hi).collect())?);
                }
            }
        }
        NamedFamily::Imprimitive(b) => {
            if b < 2 || b >= n || n % b != 0 {
                return Err(Error::Precondition(format!("block size {b} does not split {n}")));
            }
            gens.push(Permutation::transposition(n, 1, 2));
            gens.push(cyc((1..=b).collect())?);
            let shift: Vec<usize> = (0..n).map(|x| (x + b) % n + 1).collect();
            gens.push(Permutation::from_images(&shift)?);
            let mut swap: Vec<usize> = (1..=n).collect();
            for i in 0..b {
                swap.swap(i, b + i);
            }
            gens.push(Permutation::from_images(&swap)?);
        }
        NamedFamily::Agl23 => {
            if n != 9 {
                return Err(Error::Precondition("AGL(2,3) acts on 9 points".into()));
            }
            let affine = |f: fn(usize, usize) -> (usize, usize)| {
                perm_from_fn(9, |p| {
                    let (x, y) = f(p % 3, p / 3);
                    x % 3 + 3 * (y % 3)
                })
            };
            gens.push(affine(|x, y| (x + 1, y)));
            gens.push(affine(|x, y| (y, 2 * x)));
            gens.push(affine(|x, y| (x + y, y)));
            gens.push(affine(|x, y| (2 * x, y)));
        }
    }
    PermGroup::generated(n, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_histogram(c: &Catalog) -> Vec<(usize, usize)> {
        let mut h: std::collections::BTreeMap<usize, usize> = Default::default();
        for m in c.an_maximals() {
            *h.entry(m.order()).or_default() += 1;
        }
        h.into_iter().collect()
    }

    #[test]
    fn a5_and_s5() {
        let c = Catalog::new(5).unwrap();
        assert_eq!(order_histogram(&c), vec![(6, 10), (10, 6), (12, 5)]);
        assert_eq!(c.sn_maximals().len(), 1 + 5 + 10 + 6);
        for m in c.an_maximals() {
            assert_eq!(m.normalizer_elements.count(), 2 * m.order());
        }
        assert!(c.find("stab(1)").is_some());
        assert!(c.find("intr{45}").is_some());
        assert!(c.all_maximal());
    }

    #[test]
    fn a6_has_twelve_a5() {
        let c = Catalog::new(6).unwrap();
        assert_eq!(order_histogram(&c), vec![(24, 30), (36, 10), (60, 12)]);
        let a5: Vec<_> = c.an_maximals().iter().filter(|m| m.order() == 60).collect();
        let classes: std::collections::BTreeSet<usize> = a5.iter().map(|m| m.class).collect();
        assert_eq!(classes.len(), 2);
        assert_eq!(c.sn_maximals().len(), 53);
    }

    #[test]
    fn a7_and_s7_counts() {
        let c = Catalog::new(7).unwrap();
        assert_eq!(order_histogram(&c), vec![(72, 35), (120, 21), (168, 30), (360, 7)]);
        assert_eq!(c.sn_maximals().len(), 1 + 7 + 21 + 35 + 120);
        for m in c.an_maximals() {
            let expected = if m.order() == 168 { 168 } else { 2 * m.order() };
            assert_eq!(m.normalizer_elements.count(), expected, "{}", m.name);
        }
    }

    #[test]
    fn small_catalogs_are_complete() {
        for n in [5, 6] {
            Catalog::new(n).unwrap().verify_complete().unwrap();
        }
    }

    #[test]
    fn degree_seven_catalog_is_complete() {
        Catalog::new(7).unwrap().verify_complete().unwrap();
    }

    #[test]
    fn named_family_orders() {
        assert_eq!(named_family(9, NamedFamily::Intransitive(4)).unwrap().order(), 24 * 120);
        assert_eq!(named_family(9, NamedFamily::Imprimitive(3)).unwrap().order(), 1296);
        assert_eq!(named_family(9, NamedFamily::Agl23).unwrap().order(), 432);
        assert_eq!(named_family(8, NamedFamily::Imprimitive(4)).unwrap().order(), 24 * 24 * 2);
        assert_eq!(PermGroup::generated(7, &fano_group_generators()).unwrap().order(), 168);
    }

    #[test]
    fn out_of_range() {
        assert!(Catalog::new(4).is_err());
        assert!(Catalog::new(8).is_err());
    }
}
