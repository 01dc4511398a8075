//! Finite groups with an indexed element universe, and the exhaustive
//! algorithms the rest of the crate builds on: subgroup closure, coset
//! tables, maximality via primitivity of the coset action, normalizers and a
//! lattice oracle for maximal subgroups of small groups.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::perm::{Permutation, ENUMERATION_DEGREE_LIMIT};

pub trait Group {
    type Elem: Clone + Eq + Hash + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// `g^-1 a g`.
    fn conj(&self, a: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(&self.inv(g), a), g)
    }
}

/// A finite group whose elements carry a stable index `0..order()`.
pub trait Universe: Group {
    fn order(&self) -> usize;
    fn element(&self, i: usize) -> Self::Elem;
    fn index_of(&self, e: &Self::Elem) -> Option<usize>;
    fn generators(&self) -> Vec<Self::Elem>;

    fn index(&self, e: &Self::Elem) -> usize {
        self.index_of(e).unwrap_or_else(|| panic!("{e:?} is not in the universe"))
    }
}

/// A permutation group given by its full element list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Permutation>,
    lookup: Lookup,
    generators: Vec<Permutation>,
}

#[derive(Clone, Debug)]
enum Lookup {
    Rank(Vec<u32>),
    Map(HashMap<Permutation, u32>),
}

impl PermGroup {
    /// Group with the given elements, sorted lexicographically. The element
    /// list must be closed under multiplication; this is not checked.
    pub fn from_elements(degree: usize, mut elements: Vec<Permutation>, generators: Vec<Permutation>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let lookup = if degree <= ENUMERATION_DEGREE_LIMIT {
            let total: usize = (1..=degree).product();
            let mut table = vec![u32::MAX; total];
            for (i, e) in elements.iter().enumerate() {
                table[e.rank()] = i as u32;
            }
            Lookup::Rank(table)
        } else {
            Lookup::Map(elements.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect())
        };
        PermGroup { degree, elements, lookup, generators }
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        let elements = crate::perm::all_permutations(n)?;
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::transposition(n, 1, 2));
            let cycle: Vec<usize> = (1..=n).collect();
            gens.push(Permutation::from_cycles(n, &[&cycle])?);
        }
        Ok(PermGroup::from_elements(n, elements, gens))
    }

    pub fn alternating(n: usize) -> Result<Self> {
        let elements = crate::perm::alternating_elements(n)?;
        let gens = (3..=n)
            .map(|k| Permutation::from_cycles(n, &[&[1, 2, k]]))
            .collect::<Result<Vec<_>>>()?;
        Ok(PermGroup::from_elements(n, elements, gens))
    }

    /// Subgroup of `S_degree` generated by `gens`.
    pub fn generated(degree: usize, gens: &[Permutation]) -> Result<Self> {
        if degree > ENUMERATION_DEGREE_LIMIT + 1 {
            return Err(Error::Capacity(format!("degree {degree} too large for closure")));
        }
        let id = Permutation::identity(degree);
        let mut seen: std::collections::HashSet<Permutation> = [id].into_iter().collect();
        let mut queue = vec![id];
        while let Some(e) = queue.pop() {
            for g in gens {
                let next = e.then(g);
                if seen.insert(next) {
                    queue.push(next);
                }
            }
        }
        Ok(PermGroup::from_elements(degree, seen.into_iter().collect(), gens.to_vec()))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Elements of a subset, in index order.
    pub fn members(&self, set: &BitSet) -> Vec<Permutation> {
        set.iter().map(|i| self.elements[i]).collect()
    }

    pub fn subset<F: Fn(&Permutation) -> bool>(&self, pred: F) -> BitSet {
        BitSet::from_indices(self.order(), (0..self.order()).filter(|&i| pred(&self.elements[i])))
    }

    pub fn set_of(&self, perms: &[Permutation]) -> BitSet {
        BitSet::from_indices(self.order(), perms.iter().map(|p| self.index(p)))
    }
}

impl Group for PermGroup {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.then(b)
    }

    fn inv(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }
}

impl Universe for PermGroup {
    fn order(&self) -> usize {
        self.elements.len()
    }

    fn element(&self, i: usize) -> Permutation {
        self.elements[i]
    }

    fn index_of(&self, e: &Permutation) -> Option<usize> {
        if e.degree() != self.degree {
            return None;
        }
        match &self.lookup {
            Lookup::Rank(t) => {
                let v = t[e.rank()];
                (v != u32::MAX).then_some(v as usize)
            }
            Lookup::Map(m) => m.get(e).map(|&v| v as usize),
        }
    }

    fn generators(&self) -> Vec<Permutation> {
        self.generators.clone()
    }
}

/// Subgroup generated by `gens`, as a bitset. If `abort_above` is set and the
/// closure grows past it, returns `None`.
pub fn closure_bounded<U: Universe>(u: &U, gens: &[U::Elem], abort_above: Option<usize>) -> Option<BitSet> {
    let mut set = BitSet::new(u.order());
    let id = u.identity();
    set.insert(u.index(&id));
    let mut queue = vec![id];
    let mut count = 1usize;
    while let Some(e) = queue.pop() {
        for g in gens {
            let next = u.mul(&e, g);
            if set.insert(u.index(&next)) {
                count += 1;
                if abort_above.is_some_and(|limit| count > limit) {
                    return None;
                }
                queue.push(next);
            }
        }
    }
    Some(set)
}

pub fn closure<U: Universe>(u: &U, gens: &[U::Elem]) -> BitSet {
    closure_bounded(u, gens, None).expect("unbounded closure")
}

/// Checks that a subset is a subgroup (closed under products, contains 1).
pub fn is_subgroup<U: Universe>(u: &U, set: &BitSet) -> bool {
    if !set.contains(u.index(&u.identity())) {
        return false;
    }
    let gens = subgroup_generators(u, set);
    closure(u, &gens) == *set
}

/// A small generating set of a subgroup, chosen greedily in index order.
/// Does not verify that `set` is closed.
pub fn subgroup_generators<U: Universe>(u: &U, set: &BitSet) -> Vec<U::Elem> {
    let mut gens = Vec::new();
    let mut span = closure(u, &gens);
    for i in set.iter() {
        if !span.contains(i) {
            gens.push(u.element(i));
            span = closure(u, &gens);
        }
    }
    gens
}

/// Right cosets `H g`: a label per element and the coset count.
pub fn right_coset_labels<U: Universe>(u: &U, h: &BitSet) -> (Vec<u32>, usize) {
    let hs: Vec<U::Elem> = h.iter().map(|i| u.element(i)).collect();
    let mut labels = vec![u32::MAX; u.order()];
    let mut next = 0u32;
    for i in 0..u.order() {
        if labels[i] != u32::MAX {
            continue;
        }
        let g = u.element(i);
        for x in &hs {
            labels[u.index(&u.mul(x, &g))] = next;
        }
        next += 1;
    }
    (labels, next as usize)
}

/// Is `h` a maximal subgroup of the universe? Decided by primitivity of the
/// action of the universe generators on the right cosets of `h`.
pub fn is_maximal<U: Universe>(u: &U, h: &BitSet) -> bool {
    let (labels, k) = right_coset_labels(u, h);
    if k < 2 {
        return false;
    }
    let mut reps = vec![usize::MAX; k];
    for (i, &l) in labels.iter().enumerate() {
        if reps[l as usize] == usize::MAX {
            reps[l as usize] = i;
        }
    }
    let actions: Vec<Vec<u32>> = u
        .generators()
        .iter()
        .map(|g| reps.iter().map(|&r| labels[u.index(&u.mul(&u.element(r), g))]).collect())
        .collect();
    is_primitive(k, &actions)
}

/// Primitivity of a transitive action of `gens` on `0..k`: the finest block
/// containing `{0, b}` must be everything for each `b`.
pub fn is_primitive(k: usize, gens: &[Vec<u32>]) -> bool {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for b in 1..k {
        let mut parent: Vec<usize> = (0..k).collect();
        let mut classes = k;
        let mut pending = vec![(0usize, b)];
        let (r0, rb) = (find(&mut parent, 0), find(&mut parent, b));
        parent[rb] = r0;
        classes -= 1;
        while let Some((x, y)) = pending.pop() {
            for g in gens {
                let (gx, gy) = (g[x] as usize, g[y] as usize);
                let (a, c) = (find(&mut parent, gx), find(&mut parent, gy));
                if a != c {
                    parent[c] = a;
                    classes -= 1;
                    pending.push((gx, gy));
                }
            }
        }
        if classes > 1 {
            return false;
        }
    }
    true
}

/// `{g^-1 x g : x in set}`.
pub fn conjugate_set<U: Universe>(u: &U, set: &BitSet, g: &U::Elem) -> BitSet {
    let gi = u.inv(g);
    BitSet::from_indices(u.order(), set.iter().map(|i| u.index(&u.mul(&u.mul(&gi, &u.element(i)), g))))
}

/// Normalizer of a subgroup inside the universe.
pub fn normalizer<U: Universe>(u: &U, h: &BitSet) -> BitSet {
    let gens = subgroup_generators(u, h);
    BitSet::from_indices(
        u.order(),
        (0..u.order()).filter(|&i| {
            let g = u.element(i);
            gens.iter().all(|x| h.contains(u.index(&u.conj(x, &g))))
        }),
    )
}

/// Distinct conjugates of a subgroup, with the least-index conjugator of each.
pub fn conjugates<U: Universe>(u: &U, h: &BitSet) -> Vec<(BitSet, usize)> {
    let mut seen: HashMap<BitSet, usize> = HashMap::new();
    let mut out = Vec::new();
    for i in 0..u.order() {
        let c = conjugate_set(u, h, &u.element(i));
        if !seen.contains_key(&c) {
            seen.insert(c.clone(), i);
            out.push((c, i));
        }
    }
    out.sort();
    out
}

/// Conjugacy classes as bitsets, ordered by least element index.
pub fn conjugacy_classes<U: Universe>(u: &U) -> Vec<BitSet> {
    let mut assigned = BitSet::new(u.order());
    let mut classes = Vec::new();
    for i in 0..u.order() {
        if assigned.contains(i) {
            continue;
        }
        let x = u.element(i);
        let class = BitSet::from_indices(u.order(), (0..u.order()).map(|j| u.index(&u.conj(&x, &u.element(j)))));
        assigned.union_with(&class);
        classes.push(class);
    }
    classes
}

/// Outcome of the two-generator lattice oracle.
#[derive(Clone, Debug)]
pub struct LatticeReport {
    /// Inclusion-maximal proper subgroups generated by at most two elements.
    pub maximals: Vec<BitSet>,
    /// Each reported subgroup passed the primitivity test.
    pub all_verified_maximal: bool,
    pub pairs_closed: usize,
}

/// Finds the maximal subgroups of a small group: every proper subgroup
/// generated by a class representative and one further element is closed,
/// conjugates are added, and the inclusion-maximal ones are kept and then
/// verified maximal by primitivity of the coset action.
pub fn lattice_maximals<U: Universe>(u: &U) -> LatticeReport {
    let order = u.order();
    let reps: Vec<U::Elem> = conjugacy_classes(u).iter().map(|c| u.element(c.first().unwrap())).collect();
    let mut found: Vec<BitSet> = Vec::new();
    let mut known: std::collections::HashSet<BitSet> = Default::default();
    let mut pairs_closed = 0;
    for g in &reps {
        let gi = u.index(g);
        for hi in 0..order {
            if found.iter().any(|k| k.contains(gi) && k.contains(hi)) {
                continue;
            }
            pairs_closed += 1;
            let h = u.element(hi);
            if let Some(sub) = closure_bounded(u, &[g.clone(), h], Some(order / 2)) {
                if known.contains(&sub) {
                    continue;
                }
                for (c, _) in conjugates(u, &sub) {
                    if known.insert(c.clone()) {
                        found.push(c);
                    }
                }
            }
        }
    }
    let mut maximals: Vec<BitSet> = found
        .iter()
        .filter(|s| !found.iter().any(|t| t != *s && s.is_subset(t)))
        .cloned()
        .collect();
    maximals.sort();
    let all_verified_maximal = maximals.iter().all(|m| is_maximal(u, m));
    LatticeReport { maximals, all_verified_maximal, pairs_closed }
}

/// Checks a proposed list of maximal subgroups: each entry must be maximal,
/// and every pair (class representative, element) not lying in a common entry
/// must generate the whole group. Returns the first counterexample pair.
pub fn verify_maximal_list<U: Universe>(u: &U, list: &[BitSet]) -> std::result::Result<(), String> {
    for (i, m) in list.iter().enumerate() {
        if !is_maximal(u, m) {
            return Err(format!("entry {i} is not maximal"));
        }
    }
    let order = u.order();
    for class in conjugacy_classes(u) {
        let gi = class.first().unwrap();
        let g = u.element(gi);
        let containing: Vec<&BitSet> = list.iter().filter(|m| m.contains(gi)).collect();
        for hi in 0..order {
            if containing.iter().any(|m| m.contains(hi)) {
                continue;
            }
            if closure_bounded(u, &[g.clone(), u.element(hi)], Some(order / 2)).is_some() {
                return Err(format!("elements {gi} and {hi} generate a proper subgroup outside the list"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_alternating_orders() {
        for n in 5..=8 {
            let s = PermGroup::symmetric(n).unwrap();
            let a = PermGroup::alternating(n).unwrap();
            let fact: usize = (1..=n).product();
            assert_eq!(s.order(), fact);
            assert_eq!(a.order(), fact / 2);
        }
    }

    #[test]
    fn closure_of_generators_is_whole_group() {
        let s = PermGroup::symmetric(5).unwrap();
        assert_eq!(closure(&s, &s.generators()).count(), 120);
        let a = PermGroup::alternating(6).unwrap();
        assert_eq!(closure(&a, &a.generators()).count(), 360);
    }

    #[test]
    fn point_stabilizer_is_maximal_klein_is_not() {
        let s = PermGroup::symmetric(5).unwrap();
        let stab = s.subset(|p| p.image(5) == 5);
        assert!(is_subgroup(&s, &stab));
        assert!(is_maximal(&s, &stab));
        let klein = s.subset(|p| p.image(5) == 5 && p.is_even() && p.order() <= 2);
        assert!(is_subgroup(&s, &klein));
        assert!(!is_maximal(&s, &klein));
    }

    #[test]
    fn lattice_oracle_small_groups() {
        let a5 = PermGroup::alternating(5).unwrap();
        let rep = lattice_maximals(&a5);
        assert!(rep.all_verified_maximal);
        let mut orders: Vec<usize> = rep.maximals.iter().map(|m| m.count()).collect();
        orders.sort();
        assert_eq!(orders, [vec![6; 10], vec![10; 6], vec![12; 5]].concat());

        let v4 = PermGroup::generated(4, &[
            Permutation::parse(4, "(12)(34)").unwrap(),
            Permutation::parse(4, "(13)(24)").unwrap(),
        ])
        .unwrap();
        assert_eq!(v4.order(), 4);
        let rep = lattice_maximals(&v4);
        assert_eq!(rep.maximals.len(), 3);
        assert!(verify_maximal_list(&v4, &rep.maximals).is_ok());
    }

    #[test]
    fn normalizer_of_sylow5_in_a5() {
        let a5 = PermGroup::alternating(5).unwrap();
        let c = Permutation::parse(5, "(12345)").unwrap();
        let p = closure(&a5, &[c]);
        assert_eq!(normalizer(&a5, &p).count(), 10);
        assert_eq!(conjugates(&a5, &p).len(), 6);
    }
}
