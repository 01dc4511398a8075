//! Covers by subgroups: target sets, cover checks, greedy and exact minimum
//! covers with a replayable proof tree, definite unbeatability and the
//! lower-bound combination for forced subfamilies.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{PermGroup, Universe};
use crate::monolith::{Case, GroupSpec, MonolithElement, MonolithGroup};
use crate::perm::Permutation;
use crate::subgroups::{Families, SubgroupDescriptor};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
const PROOF_NODE_LIMIT: usize = 200_000;

/// The ten 4-cycles used for `n = 5`.
pub const PI_FIVE: [&str; 10] =
    ["(2354)", "(4521)", "(4132)", "(1253)", "(4531)", "(3245)", "(1352)", "(2314)", "(4125)", "(3541)"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recipe {
    Pi,
    Sigma,
    A,
    B,
    C,
    Omega1,
    /// `Ω_r` for a prime `r` dividing `2m`.
    Omega(usize),
    Whole,
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Pi => f.write_str("Pi"),
            Recipe::Sigma => f.write_str("Sigma"),
            Recipe::A => f.write_str("A"),
            Recipe::B => f.write_str("B"),
            Recipe::C => f.write_str("C"),
            Recipe::Omega1 => f.write_str("Omega_1"),
            Recipe::Omega(r) => write!(f, "Omega_{r}"),
            Recipe::Whole => f.write_str("G"),
        }
    }
}

impl std::str::FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Pi" | "pi" => Recipe::Pi,
            "Sigma" | "sigma" => Recipe::Sigma,
            "A" => Recipe::A,
            "B" => Recipe::B,
            "C" => Recipe::C,
            "Omega_1" | "omega1" => Recipe::Omega1,
            "G" | "whole" => Recipe::Whole,
            other => match other.strip_prefix("Omega_").or_else(|| other.strip_prefix("omega")) {
                Some(r) => Recipe::Omega(r.parse().map_err(|_| Error::Parse(format!("bad target {s}")))?),
                None => return Err(Error::Parse(format!("unknown target {s}"))),
            },
        })
    }
}

/// A subset of `S_n` (indexed by lexicographic rank) or of an enumerated `G`.
#[derive(Clone, Debug)]
pub struct TargetSet {
    pub name: String,
    /// `"S5"`, or the group spec.
    pub space: String,
    pub elements: BitSet,
    pub provenance: String,
}

impl TargetSet {
    pub fn custom(name: &str, space: &str, elements: BitSet, provenance: &str) -> Self {
        TargetSet { name: name.into(), space: space.into(), elements, provenance: provenance.into() }
    }

    pub fn len(&self) -> usize {
        self.elements.count()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn shape(p: &Permutation) -> Vec<u8> {
    p.cycle_type().nontrivial()
}

/// Membership predicate for the permutation-level sets.
fn perm_predicate(n: usize, m: usize, recipe: Recipe) -> Result<Box<dyn Fn(&Permutation) -> bool + Send + Sync>> {
    let nn = n as u8;
    let unsupported = || Err(Error::Unsupported(format!("target {recipe} is not defined for n = {n}, m = {m}")));
    Ok(match recipe {
        Recipe::Pi if n == 5 => {
            let listed: Vec<Permutation> = PI_FIVE.iter().map(|s| Permutation::parse(5, s)).collect::<Result<_>>()?;
            Box::new(move |p| listed.contains(p))
        }
        Recipe::Pi | Recipe::Sigma if n % 2 == 1 || recipe == Recipe::Sigma => {
            Box::new(|p| p.cycle_type().parts().len() == 2)
        }
        Recipe::A if n % 2 == 1 => Box::new(move |p| shape(p) == vec![nn - 2, 2]),
        Recipe::A if n == 6 => Box::new(|p| shape(p) == vec![3, 2]),
        Recipe::B if n % 2 == 1 => Box::new(move |p| shape(p) == vec![nn - 1]),
        Recipe::B if n == 6 => Box::new(|p| shape(p) == vec![6]),
        Recipe::C if n == 6 => Box::new(|p| shape(p) == vec![3]),
        Recipe::C if n % 2 == 1 => {
            if m % 2 == 0 || (n, m) == (5, 3) {
                Box::new(|_| false)
            } else if n == 5 && (m == 5 || m == 7) {
                let chosen = twelve_five_cycles();
                Box::new(move |p| chosen.contains(p))
            } else {
                Box::new(move |p| shape(p) == vec![nn])
            }
        }
        _ => return unsupported(),
    })
}

/// Two 5-cycles from each Sylow 5-subgroup of `S_5`: the lexicographically
/// least generator `c` and its inverse.
pub fn twelve_five_cycles() -> Vec<Permutation> {
    let mut out: Vec<Permutation> = Vec::new();
    for c in crate::perm::all_permutations(5).expect("S_5") {
        if shape(&c) != vec![5] {
            continue;
        }
        let subgroup: Vec<Permutation> = (1..5).map(|e| c.pow(e)).collect();
        if subgroup.iter().any(|x| out.contains(x)) {
            continue;
        }
        out.push(c);
        out.push(c.inverse());
    }
    out.sort();
    out
}

/// A permutation-level target as a subset of `S_n`.
pub fn perm_target(sym: &PermGroup, m: usize, recipe: Recipe) -> Result<TargetSet> {
    let n = sym.degree();
    let pred = perm_predicate(n, m, recipe)?;
    Ok(TargetSet {
        name: recipe.to_string(),
        space: format!("S{n}"),
        elements: sym.subset(|p| pred(p)),
        provenance: format!("scan of S_{n} for {recipe} (m = {m})"),
    })
}

/// The closed-form size of a target, where one is known.
pub fn closed_form_size(spec: &GroupSpec, recipe: Recipe) -> Result<u128> {
    let n = spec.n as u128;
    let a = spec.alternating_order();
    let m = spec.m as u32;
    let size = |r: Recipe| -> Result<u128> {
        Ok(match (r, spec.n) {
            (Recipe::Pi, 5) => 10,
            (Recipe::Pi | Recipe::Sigma, _) => {
                // n! / (k(n-k)) for each unordered split, halved when k = n-k
                let fact: u128 = (1..=n).product();
                (1..n).map(|k| fact / (k * (n - k))).sum::<u128>() / 2
            }
            (Recipe::A, 6) => 120,
            (Recipe::B, 6) => 120,
            (Recipe::C, 6) => 40,
            (Recipe::A, _) => a / (n - 2),
            (Recipe::B, _) => 2 * a / (n - 1),
            (Recipe::C, _) => {
                if m % 2 == 0 || (spec.n, m) == (5, 3) {
                    0
                } else if spec.n == 5 && (m == 5 || m == 7) {
                    12
                } else {
                    2 * a / n
                }
            }
            _ => unreachable!(),
        })
    };
    if matches!(recipe, Recipe::Omega(_)) && spec.m == 1 {
        return Err(Error::Precondition("Omega_r needs m >= 2".into()));
    }
    Ok(match recipe {
        Recipe::Whole => spec.order(),
        Recipe::Omega1 => size(Recipe::Pi)? * a.pow(m - 1),
        Recipe::Omega(r) if spec.m % r == 0 => size(Recipe::A)? * size(Recipe::B)? * a.pow(m - 2),
        Recipe::Omega(2) => size(Recipe::C)? * a.pow(m - 1),
        Recipe::Omega(r) => return Err(Error::Precondition(format!("{r} does not divide 2m"))),
        other => size(other)?,
    })
}

/// Builds a target by scanning `S_n` or the enumerated group.
pub fn build_target(g: &MonolithGroup, recipe: Recipe) -> Result<TargetSet> {
    let spec = *g.spec();
    let (n, m) = (spec.n, spec.m);
    let space = spec.to_string();
    let scan = |pred: &(dyn Fn(&MonolithElement) -> bool + Sync)| {
        let idx: Vec<usize> = (0..g.order()).into_par_iter().filter(|&i| pred(&g.element(i))).collect();
        BitSet::from_indices(g.order(), idx)
    };
    let needs_odd = || {
        if spec.case == Case::Odd {
            Ok(())
        } else {
            Err(Error::WrongCase(format!("{recipe} is defined for the odd case")))
        }
    };
    let elements = match recipe {
        Recipe::Whole => BitSet::full(g.order()),
        Recipe::Omega1 => {
            needs_odd()?;
            let pi = perm_predicate(n, m, Recipe::Pi)?;
            let tau = spec.tau();
            scan(&|e| {
                e.twist == 1 && {
                    let prod = e.base.iter().fold(Permutation::identity(n), |acc, x| acc.then(x));
                    pi(&prod.then(&tau))
                }
            })
        }
        Recipe::Omega(r) => {
            needs_odd()?;
            if m == 1 {
                return Err(Error::Precondition("Omega_r needs m >= 2".into()));
            }
            if m % r == 0 && r >= 2 {
                let a = perm_predicate(n, m, Recipe::A)?;
                let b = perm_predicate(n, m, Recipe::B)?;
                scan(&|e| {
                    e.twist == r && {
                        let strands = spec.product_invariant(e, r).expect("twist r divides m");
                        a(&strands[0]) && b(&strands[1])
                    }
                })
            } else if r == 2 && m % 2 == 1 {
                let c = perm_predicate(n, m, Recipe::C)?;
                scan(&|e| e.twist == 2 && c(&spec.odd_square_invariant(e).expect("twist 2, m odd")))
            } else {
                return Err(Error::Precondition(format!("Omega_{r} needs a prime r dividing 2m")));
            }
        }
        other => return Err(Error::Precondition(format!("{other} is a subset of S_n; use perm_target"))),
    };
    let target = TargetSet {
        name: recipe.to_string(),
        space,
        elements,
        provenance: format!("scan of {spec} for {recipe}"),
    };
    let expected = closed_form_size(&spec, recipe)?;
    if target.len() as u128 != expected {
        return Err(Error::Verification(format!("{recipe} has {} elements, closed form {expected}", target.len())));
    }
    Ok(target)
}

/// `Ok(())` when the union covers the target, else the least uncovered index.
pub fn covers_check(family: &[&BitSet], target: &BitSet) -> Result<std::result::Result<(), usize>> {
    if family.iter().any(|s| s.len() != target.len()) {
        return Err(Error::SizeMismatch { left: target.len(), right: family.iter().map(|s| s.len()).find(|&l| l != target.len()).unwrap_or(0) });
    }
    let mut rest = target.clone();
    for s in family {
        rest.difference_with(s);
    }
    Ok(match rest.first() {
        None => Ok(()),
        Some(i) => Err(i),
    })
}

/// Descriptor-level cover check over an enumerated group, element by element
/// (no expansion), reporting the least uncovered element.
pub fn covers_group(fam: &Families, g: &MonolithGroup, family: &[SubgroupDescriptor]) -> Result<Option<usize>> {
    if g.spec() != fam.spec() {
        return Err(Error::GroupMismatch("universe and families disagree".into()));
    }
    let missing = (0..g.order()).into_par_iter().find_first(|&i| {
        let e = g.element(i);
        !family.iter().any(|d| fam.contains(&e, d))
    });
    Ok(missing)
}

/// Greedy cover: repeatedly take the candidate with the largest uncovered
/// gain, ties to the lowest index.
pub fn greedy_cover(target: &BitSet, candidates: &[BitSet]) -> Result<Vec<usize>> {
    let mut rest = target.clone();
    let mut chosen = Vec::new();
    while !rest.is_empty() {
        let (best, gain) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.intersection_count(&rest)))
            .fold((usize::MAX, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if gain == 0 {
            return Err(Error::Infeasible { uncovered: rest.count(), residual: rest.iter().take(16).collect() });
        }
        chosen.push(best);
        rest.difference_with(&candidates[best]);
    }
    Ok(chosen)
}

/// Why a subtree of the search can be discarded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Bound {
    /// Uncovered elements no two of which share an available candidate.
    Disjoint { witnesses: Vec<usize> },
    /// `ceil(uncovered / largest available gain)`.
    Counting { uncovered: usize, max_gain: usize },
}

impl Bound {
    pub fn value(&self) -> usize {
        match self {
            Bound::Disjoint { witnesses } => witnesses.len(),
            Bound::Counting { uncovered, max_gain } => {
                if *uncovered == 0 {
                    0
                } else if *max_gain == 0 {
                    usize::MAX / 2
                } else {
                    uncovered.div_ceil(*max_gain)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ProofNode {
    /// The chosen family covers the target.
    Covered { size: usize },
    Pruned { bound: Bound },
    /// Branch on the candidates containing `element`; the `i`-th child also
    /// excludes the earlier ones.
    Branch { element: usize, children: Vec<(usize, ProofNode)> },
    /// Search stopped by the budget.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Exact,
    Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofLog {
    pub greedy_upper: usize,
    pub root_lower: usize,
    pub nodes: u64,
    /// `None` when the tree exceeded the size kept in memory.
    pub tree: Option<ProofNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactCover {
    pub status: SolveStatus,
    pub lo: usize,
    pub hi: usize,
    pub family: Vec<usize>,
    pub log: ProofLog,
}

struct Solver<'a> {
    candidates: &'a [BitSet],
    containing: Vec<Vec<usize>>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    kept: usize,
    exhausted: bool,
}

impl Solver<'_> {
    fn lower_bound(&self, rest: &BitSet, excluded: &BitSet) -> Bound {
        let mut order: Vec<(usize, usize)> = rest
            .iter()
            .map(|e| (self.containing[e].iter().filter(|&&c| !excluded.contains(c)).count(), e))
            .collect();
        order.sort_unstable();
        let mut used = BitSet::new(self.candidates.len());
        let mut witnesses = Vec::new();
        for &(_, e) in &order {
            let avail: Vec<usize> = self.containing[e].iter().copied().filter(|&c| !excluded.contains(c)).collect();
            if avail.iter().all(|&c| !used.contains(c)) {
                for c in avail {
                    used.insert(c);
                }
                witnesses.push(e);
            }
        }
        let disjoint = Bound::Disjoint { witnesses };
        let max_gain = (0..self.candidates.len())
            .filter(|&c| !excluded.contains(c))
            .map(|c| self.candidates[c].intersection_count(rest))
            .max()
            .unwrap_or(0);
        let counting = Bound::Counting { uncovered: rest.count(), max_gain };
        if counting.value() > disjoint.value() {
            counting
        } else {
            disjoint
        }
    }

    fn search(&mut self, rest: &BitSet, chosen: &mut Vec<usize>, excluded: &mut BitSet) -> ProofNode {
        self.nodes += 1;
        if rest.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return ProofNode::Covered { size: chosen.len() };
        }
        if self.nodes > self.budget {
            self.exhausted = true;
            return ProofNode::Open;
        }
        let bound = self.lower_bound(rest, excluded);
        if chosen.len() + bound.value() >= self.best.len() {
            return ProofNode::Pruned { bound };
        }
        let element = rest
            .iter()
            .min_by_key(|&e| (self.containing[e].iter().filter(|&&c| !excluded.contains(c)).count(), e))
            .expect("nonempty");
        let options: Vec<usize> = self.containing[element].iter().copied().filter(|&c| !excluded.contains(c)).collect();
        let mut children = Vec::new();
        let mut newly_excluded = Vec::new();
        for c in options {
            chosen.push(c);
            let next = rest.difference(&self.candidates[c]);
            let child = self.search(&next, chosen, excluded);
            chosen.pop();
            self.kept += 1;
            children.push((c, child));
            excluded.insert(c);
            newly_excluded.push(c);
            if self.exhausted {
                break;
            }
        }
        for c in newly_excluded {
            excluded.remove(c);
        }
        ProofNode::Branch { element, children }
    }
}

/// Exact minimum cover of `target` by `candidates` (branch and bound).
/// Exceeding `budget` search nodes yields an interval instead.
pub fn min_cover_exact(target: &BitSet, candidates: &[BitSet], budget: u64) -> Result<ExactCover> {
    if candidates.iter().any(|c| c.len() != target.len()) {
        return Err(Error::SizeMismatch { left: target.len(), right: candidates[0].len() });
    }
    let greedy = greedy_cover(target, candidates)?;
    let mut containing = vec![Vec::new(); target.len()];
    for (ci, c) in candidates.iter().enumerate() {
        for e in c.intersection(target).iter() {
            containing[e].push(ci);
        }
    }
    let mut solver = Solver {
        candidates,
        containing,
        best: greedy.clone(),
        nodes: 0,
        budget,
        kept: 0,
        exhausted: false,
    };
    let empty = BitSet::new(candidates.len());
    let root_lower = solver.lower_bound(target, &empty).value();
    // Search for a cover strictly smaller than greedy; a one-larger sentinel
    // lets the search also reproduce the greedy size when it is optimal.
    solver.best = (0..=greedy.len()).collect();
    let tree = solver.search(&target.clone(), &mut Vec::new(), &mut BitSet::new(candidates.len()));
    let family = if solver.best.len() <= greedy.len() { solver.best.clone() } else { greedy.clone() };
    let hi = family.len();
    let (status, lo) = if solver.exhausted { (SolveStatus::Interval, root_lower.min(hi)) } else { (SolveStatus::Exact, hi) };
    let tree = (solver.kept <= PROOF_NODE_LIMIT).then_some(tree);
    Ok(ExactCover {
        status,
        lo,
        hi,
        family,
        log: ProofLog { greedy_upper: greedy.len(), root_lower, nodes: solver.nodes, tree },
    })
}

/// Replays a proof tree: checks that every branch lists exactly the
/// available candidates through an uncovered element, that every pruned
/// node's bound is valid and reaches `claimed`, and that every covered leaf
/// has at least `claimed` members. Success proves no cover smaller than
/// `claimed` exists.
pub fn replay_proof(target: &BitSet, candidates: &[BitSet], tree: &ProofNode, claimed: usize) -> bool {
    fn walk(
        node: &ProofNode,
        rest: &BitSet,
        depth: usize,
        excluded: &mut BitSet,
        candidates: &[BitSet],
        claimed: usize,
    ) -> bool {
        match node {
            ProofNode::Open => false,
            ProofNode::Covered { size } => rest.is_empty() && *size == depth && depth >= claimed,
            ProofNode::Pruned { bound } => {
                let avail = |e: usize| -> Vec<usize> {
                    (0..candidates.len()).filter(|&c| !excluded.contains(c) && candidates[c].contains(e)).collect()
                };
                let valid = match bound {
                    Bound::Disjoint { witnesses } => {
                        let mut used = BitSet::new(candidates.len());
                        witnesses.iter().all(|&e| {
                            rest.contains(e)
                                && avail(e).into_iter().all(|c| used.insert(c))
                        })
                    }
                    Bound::Counting { uncovered, max_gain } => {
                        *uncovered == rest.count()
                            && (0..candidates.len())
                                .filter(|&c| !excluded.contains(c))
                                .all(|c| candidates[c].intersection_count(rest) <= *max_gain)
                    }
                };
                valid && depth + bound.value() >= claimed
            }
            ProofNode::Branch { element, children } => {
                if !rest.contains(*element) {
                    return false;
                }
                let options: Vec<usize> =
                    (0..candidates.len()).filter(|&c| !excluded.contains(c) && candidates[c].contains(*element)).collect();
                if options.len() != children.len() || options.iter().zip(children).any(|(o, (c, _))| o != c) {
                    return false;
                }
                let mut ok = true;
                let mut added = Vec::new();
                for (c, child) in children {
                    ok &= walk(child, &rest.difference(&candidates[*c]), depth + 1, excluded, candidates, claimed);
                    excluded.insert(*c);
                    added.push(*c);
                }
                for c in added {
                    excluded.remove(c);
                }
                ok
            }
        }
    }
    walk(tree, target, 0, &mut BitSet::new(candidates.len()), candidates, claimed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionStatus {
    Pass,
    /// A member missing the target set.
    EmptyMember { member: usize },
    /// An element of the target outside every member.
    Uncovered { element: usize },
    /// An element of the target in two members.
    Overlap { first: usize, second: usize, element: usize },
    /// A maximal subgroup outside the family meeting the target more than a member.
    Dominated { outsider: usize, outsider_hits: usize, member: usize, member_hits: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct UnbeatableReport {
    pub family_size: usize,
    pub conditions: [ConditionStatus; 4],
    pub min_member_hits: usize,
    pub max_outsider_hits: usize,
    pub note: String,
}

impl UnbeatableReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| *c == ConditionStatus::Pass)
    }
}

/// The four conditions of definite unbeatability of `family` on `pi`.
/// `all_max` must list every maximal subgroup (with `complete = true`):
/// condition (4) is checked against maximal subgroups only, which suffices
/// because `pi ∩ K ⊆ pi ∩ M` whenever `K ≤ M`.
pub fn check_unbeatable(
    family: &[&BitSet],
    pi: &BitSet,
    all_max: &[&BitSet],
    complete: bool,
) -> Result<UnbeatableReport> {
    if !complete {
        return Err(Error::Precondition("condition (4) needs a complete list of maximal subgroups".into()));
    }
    let hits: Vec<usize> = family.iter().map(|h| h.intersection_count(pi)).collect();
    let c1 = match hits.iter().position(|&c| c == 0) {
        Some(member) => ConditionStatus::EmptyMember { member },
        None => ConditionStatus::Pass,
    };
    let mut rest = pi.clone();
    for h in family {
        rest.difference_with(h);
    }
    let c2 = match rest.first() {
        Some(element) => ConditionStatus::Uncovered { element },
        None => ConditionStatus::Pass,
    };
    let mut c3 = ConditionStatus::Pass;
    'outer: for i in 0..family.len() {
        let pi_i = family[i].intersection(pi);
        for j in i + 1..family.len() {
            if let Some(element) = pi_i.intersection(family[j]).first() {
                c3 = ConditionStatus::Overlap { first: i, second: j, element };
                break 'outer;
            }
        }
    }
    let (member, min_hits) = hits.iter().copied().enumerate().min_by_key(|&(i, h)| (h, i)).unwrap_or((0, 0));
    let mut max_outsider = 0;
    let mut c4 = ConditionStatus::Pass;
    for (k, kset) in all_max.iter().enumerate() {
        if family.iter().any(|h| h == kset) {
            continue;
        }
        let kh = kset.intersection_count(pi);
        max_outsider = max_outsider.max(kh);
        if kh > min_hits && c4 == ConditionStatus::Pass {
            c4 = ConditionStatus::Dominated { outsider: k, outsider_hits: kh, member, member_hits: min_hits };
        }
    }
    Ok(UnbeatableReport {
        family_size: family.len(),
        conditions: [c1, c2, c3, c4],
        min_member_hits: min_hits,
        max_outsider_hits: max_outsider,
        note: "condition (4) checked over maximal subgroups; a subgroup K <= M meets the target in a subset of M's intersection".into(),
    })
}

/// One forced member of every cover by maximal subgroups: `witness` lies in
/// `member` and in no other maximal subgroup.
#[derive(Clone, Debug, Serialize)]
pub struct ForcedMember {
    pub member: usize,
    pub witness: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBound {
    pub forced: usize,
    pub unbeatable: usize,
    pub value: usize,
    pub justification: Vec<String>,
}

/// Finds, for each listed member, an element lying in it and in no other
/// maximal subgroup of the complete list.
pub fn private_witnesses(members: &[usize], all_max: &[&BitSet], universe: usize) -> Result<Vec<ForcedMember>> {
    let mut multiplicity = vec![0u16; universe];
    for s in all_max {
        for e in s.iter() {
            multiplicity[e] = multiplicity[e].saturating_add(1);
        }
    }
    members
        .iter()
        .map(|&k| {
            all_max[k]
                .iter()
                .find(|&e| multiplicity[e] == 1)
                .map(|witness| ForcedMember { member: k, witness })
                .ok_or_else(|| Error::Verification(format!("maximal subgroup {k} has no private element")))
        })
        .collect()
}

/// `|K_1| + σ(Ω) ≤ σ(G)`: the forced family must avoid `omega`, and the
/// unbeatable family on `omega` must have passed its check.
pub fn lower_bound_combine(
    forced: &[ForcedMember],
    all_max: &[&BitSet],
    omega: &BitSet,
    unbeatable: &UnbeatableReport,
) -> Result<LowerBound> {
    if !unbeatable.passed() {
        return Err(Error::Verification(format!("the family on Omega is not definitely unbeatable: {:?}", unbeatable.conditions)));
    }
    let mut justification = Vec::new();
    for f in forced {
        let k = all_max[f.member];
        if !k.contains(f.witness) || all_max.iter().enumerate().any(|(j, s)| j != f.member && s.contains(f.witness)) {
            return Err(Error::Verification(format!("element {} is not private to member {}", f.witness, f.member)));
        }
        if let Some(e) = k.intersection(omega).first() {
            return Err(Error::Violation(format!("forced member {} meets Omega at element {e}", f.member)));
        }
    }
    justification.push(format!("{} members forced by private elements and disjoint from Omega", forced.len()));
    justification.push(format!("definitely unbeatable family of size {} on Omega", unbeatable.family_size));
    Ok(LowerBound {
        forced: forced.len(),
        unbeatable: unbeatable.family_size,
        value: forced.len() + unbeatable.family_size,
        justification,
    })
}

/// The cover realizing the upper bound for the odd case: `H_r` for each prime
/// `r | 2m`, and product types over the per-degree families (point
/// stabilizers and `(3,2)` types for `n = 5`, the twelve `A_5` for `n = 6`,
/// all intransitive maximals for `n = 7`).
pub fn build_theorem_cover(fam: &Families) -> Result<Vec<SubgroupDescriptor>> {
    let spec = *fam.spec();
    if spec.case != Case::Odd || !(5..=7).contains(&spec.n) {
        return Err(Error::Unsupported(format!("explicit theorem covers exist for the odd case with n in 5..=7, not {spec}")));
    }
    let cat = fam.catalog();
    let n = spec.n;
    let picks: Vec<usize> = cat
        .an_maximals()
        .iter()
        .filter(|m| match n {
            5 => matches!(m.kind.intransitive_type(5), Some((4, 1)) | Some((3, 2))),
            6 => m.order() == 60,
            _ => m.kind.intransitive_type(n).is_some(),
        })
        .map(|m| m.index)
        .collect();
    let mut count: u128 = 0;
    for &i in &picks {
        count += ((cat.alternating().order() / cat.an(i).order()) as u128).pow(spec.m as u32 - 1);
    }
    if count > 1_000_000 {
        return Err(Error::Capacity(format!("theorem cover for {spec} has {count} product-type members")));
    }
    let modulus = 2 * spec.m;
    let mut out: Vec<SubgroupDescriptor> = (2..=modulus)
        .filter(|&r| modulus % r == 0 && (2..r).all(|d| r % d != 0))
        .map(|r| if r == modulus { SubgroupDescriptor::Socle } else { SubgroupDescriptor::TwistKernel { r } })
        .collect();
    let id = Permutation::identity(n);
    for &i in &picks {
        let reps = fam.coset_minima(i);
        let mut tuples: Vec<Vec<Permutation>> = vec![vec![id]];
        for _ in 1..spec.m {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    reps.iter().map(move |a| {
                        let mut t = t.clone();
                        t.push(*a);
                        t
                    })
                })
                .collect();
        }
        out.extend(tuples.into_iter().map(|conj| SubgroupDescriptor::Product { m: i, conj }));
    }
    out.sort();
    Ok(out)
}

/// Structural covering argument for the odd case without enumerating `G`:
/// elements of even twist lie in `H_2`, an element of odd twist lies in a
/// subgroup together with its inverse, and an element `(x)g` of twist 1 lies
/// in the product-type member for `M` and the cosets of `x_1, x_1x_2, ...`
/// whenever its product invariant normalizes `M`. So the family covers `G`
/// iff every odd permutation normalizes some chosen `M` and every odd twist
/// is reachable from twist 1. Returns the first odd permutation missed.
pub fn theorem_cover_structural(fam: &Families, family: &[SubgroupDescriptor]) -> Result<Option<Permutation>> {
    let spec = *fam.spec();
    if spec.case != Case::Odd {
        return Err(Error::WrongCase("structural check is for the odd case".into()));
    }
    if !family.iter().any(|d| matches!(d, SubgroupDescriptor::TwistKernel { r: 2 }) || (spec.m == 1 && *d == SubgroupDescriptor::Socle)) {
        return Err(Error::Verification("family lacks H_2".into()));
    }
    let ms: std::collections::BTreeSet<usize> = family.iter().filter_map(|d| d.product_factor()).collect();
    let cat = fam.catalog();
    let sym = cat.symmetric();
    // Every tuple of coset choices must be present for each chosen M.
    for &i in &ms {
        let expected = ((sym.order() / 2 / cat.an(i).order()) as u128).pow(spec.m as u32 - 1);
        let present = family.iter().filter(|d| d.product_factor() == Some(i)).count() as u128;
        if present != expected {
            return Err(Error::Verification(format!("{} has {present} of {expected} coset choices", cat.an(i).name)));
        }
    }
    Ok(sym.elements().iter().find(|p| !p.is_even() && !ms.iter().any(|&i| cat.normalizes(i, p))).copied())
}

/// The descriptor of the member containing a twist-1 element, following the
/// construction `a_d = x_1 ⋯ x_{d-1}`.
pub fn locate_twist_one(fam: &Families, family: &[SubgroupDescriptor], e: &MonolithElement) -> Option<usize> {
    let spec = fam.spec();
    if e.twist != 1 {
        return None;
    }
    let prod = e.base.iter().fold(Permutation::identity(spec.n), |acc, x| acc.then(x)).then(&spec.tau());
    let cat = fam.catalog();
    let mut prefix = Permutation::identity(spec.n);
    let mut conj = vec![prefix];
    for x in &e.base[..spec.m - 1] {
        prefix = prefix.then(x);
        conj.push(prefix);
    }
    family.iter().enumerate().find_map(|(i, d)| match d {
        SubgroupDescriptor::Product { m, .. } if cat.normalizes(*m, &prod) => {
            let want = fam.normalized_cosets(&SubgroupDescriptor::Product { m: *m, conj: conj.clone() }).ok()?;
            (want.descriptor == *d).then_some(i)
        }
        _ => None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub enum LowerWitness {
    Unbeatable { family_size: usize, forced: usize, conditions: Vec<String> },
    CaseAnalysis { survivors_before: Vec<[u32; 4]>, survivors_after: Vec<[u32; 4]> },
    Solver { nodes: u64, greedy_upper: usize, root_lower: usize },
    External { note: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverCertificate {
    pub spec: String,
    pub upper: Vec<String>,
    pub upper_verified: bool,
    pub lower: LowerWitness,
    pub sigma_interval: [usize; 2],
}

impl CoverCertificate {
    pub fn is_exact(&self) -> bool {
        self.sigma_interval[0] == self.sigma_interval[1]
    }

    pub fn summary(&self) -> String {
        let [lo, hi] = self.sigma_interval;
        let value = if lo == hi { format!("sigma = {lo}") } else { format!("sigma in [{lo}, {hi}]") };
        format!(
            "{:<28} {}\n{:<28} {} subgroups, covering {}\n",
            self.spec,
            value,
            "upper bound",
            self.upper.len(),
            if self.upper_verified { "verified" } else { "NOT verified" }
        )
    }
}

/// Everything needed for the `(5,2)` odd-case certificate.
#[derive(Clone, Debug, Serialize)]
pub struct OddFiveTwo {
    pub certificate: CoverCertificate,
    /// The family `H_2` plus the 25 point-stabilizer product types on `Ω_1 ∪ Ω_2`.
    pub unbeatable: UnbeatableReport,
    /// Present when the unbeatable family passed.
    pub combined: Option<LowerBound>,
    pub forced: usize,
    /// Minimum cover of the elements outside the forced members by the other maximals.
    pub residual: ExactCover,
    pub omega_sizes: [usize; 2],
}

/// Replays the argument for `A_5^2 ⋊ C_4`: the theorem cover, the forced
/// `(3,2)` product types, the unbeatability check on `Ω`, and an exact
/// solve of the residual left by the forced members.
pub fn certify_odd_five_two() -> Result<OddFiveTwo> {
    let spec = GroupSpec::odd(5, 2);
    let fam = Families::new(spec)?;
    let g = MonolithGroup::enumerate(spec)?;
    let all = fam.enumerate_maximals()?;
    let sets = fam.certify_maximal(&g, &all)?;
    let all_refs: Vec<&BitSet> = sets.iter().map(|s| s.as_ref()).collect();

    let cover = build_theorem_cover(&fam)?;
    let cover_sets: Vec<&BitSet> =
        cover.iter().map(|d| all_refs[all.binary_search(d).expect("cover member is maximal")]).collect();
    let covered = covers_check(&cover_sets, &BitSet::full(g.order()))?.is_ok();

    let omega1 = build_target(&g, Recipe::Omega1)?;
    let omega2 = build_target(&g, Recipe::Omega(2))?;
    let omega = omega1.elements.union(&omega2.elements);
    let cat = fam.catalog();
    let of_type = |d: &SubgroupDescriptor, t| d.product_factor().is_some_and(|i| cat.an(i).kind.intransitive_type(5) == Some(t));
    let family: Vec<usize> =
        (0..all.len()).filter(|&i| of_type(&all[i], (4, 1)) || all[i] == SubgroupDescriptor::TwistKernel { r: 2 }).collect();
    let family_sets: Vec<&BitSet> = family.iter().map(|&i| all_refs[i]).collect();
    let unbeatable = check_unbeatable(&family_sets, &omega, &all_refs, true)?;

    let k1: Vec<usize> = (0..all.len()).filter(|&i| of_type(&all[i], (3, 2))).collect();
    let forced = private_witnesses(&k1, &all_refs, g.order())?;
    let combined = match lower_bound_combine(&forced, &all_refs, &omega, &unbeatable) {
        Ok(lb) => Some(lb),
        Err(Error::Verification(_)) => None,
        Err(e) => return Err(e),
    };

    let mut residual_target = BitSet::full(g.order());
    for &i in &k1 {
        residual_target.difference_with(all_refs[i]);
    }
    let others: Vec<BitSet> = (0..all.len()).filter(|i| !k1.contains(i)).map(|i| all_refs[i].clone()).collect();
    let residual = min_cover_exact(&residual_target, &others, DEFAULT_BUDGET)?;
    if let Some(tree) = &residual.log.tree {
        if !replay_proof(&residual_target, &others, tree, residual.lo) {
            return Err(Error::Verification("residual proof tree does not replay".into()));
        }
    }

    let hi = if covered { cover.len() } else { usize::MAX };
    let lower = match &combined {
        Some(lb) => LowerWitness::Unbeatable {
            family_size: unbeatable.family_size,
            forced: lb.forced,
            conditions: unbeatable.conditions.iter().map(|c| format!("{c:?}")).collect(),
        },
        None => LowerWitness::Solver {
            nodes: residual.log.nodes,
            greedy_upper: residual.log.greedy_upper,
            root_lower: residual.log.root_lower,
        },
    };
    let lo = combined.as_ref().map_or(0, |lb| lb.value).max(forced.len() + residual.lo);
    let certificate = CoverCertificate {
        spec: spec.to_string(),
        upper: cover.iter().map(|d| fam.describe(d)).collect(),
        upper_verified: covered,
        lower,
        sigma_interval: [lo, hi],
    };
    Ok(OddFiveTwo {
        certificate,
        unbeatable,
        combined,
        forced: forced.len(),
        residual,
        omega_sizes: [omega1.len(), omega2.len()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroups::Catalog;

    #[test]
    fn small_ground_truth() {
        let a5 = Catalog::new(5).unwrap();
        let alt = a5.alternating();
        let cands: Vec<BitSet> = a5.an_maximals().iter().map(|m| m.elements.clone()).collect();
        let full = BitSet::full(alt.order());
        let r = min_cover_exact(&full, &cands, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.status.clone(), r.lo, r.hi), (SolveStatus::Exact, 10, 10));
        assert!(replay_proof(&full, &cands, r.log.tree.as_ref().unwrap(), 10));
        assert!(!replay_proof(&full, &cands, r.log.tree.as_ref().unwrap(), 11));
        assert_eq!(greedy_cover(&full, &cands).unwrap().len(), 10);

        let sym = a5.symmetric();
        let cands: Vec<BitSet> = a5.sn_maximals().iter().map(|m| m.elements.clone()).collect();
        let full = BitSet::full(sym.order());
        let r = min_cover_exact(&full, &cands, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.lo, r.hi), (16, 16));
        assert!(greedy_cover(&full, &cands).unwrap().len() >= 16);
    }

    #[test]
    fn klein_four() {
        let full = BitSet::full(4);
        let cands = vec![
            BitSet::from_indices(4, [0, 1]),
            BitSet::from_indices(4, [0, 2]),
            BitSet::from_indices(4, [0, 3]),
        ];
        let r = min_cover_exact(&full, &cands, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.hi, 3);
        assert_eq!(r.status, SolveStatus::Exact);
    }

    #[test]
    fn budget_gives_interval() {
        let a5 = Catalog::new(5).unwrap();
        let cands: Vec<BitSet> = a5.an_maximals().iter().map(|m| m.elements.clone()).collect();
        let full = BitSet::full(60);
        let r = min_cover_exact(&full, &cands, 3).unwrap();
        assert_eq!(r.status, SolveStatus::Interval);
        assert!(r.lo <= 10 && r.hi >= 10);
    }

    #[test]
    fn cover_check_edges() {
        let empty = BitSet::new(0);
        assert_eq!(covers_check(&[], &empty).unwrap(), Ok(()));
        let t = BitSet::full(5);
        let s = BitSet::from_indices(5, [0, 1, 3]);
        assert_eq!(covers_check(&[&s], &t).unwrap(), Err(2));
        let one = BitSet::from_indices(5, [1, 2]);
        assert_eq!(greedy_cover(&one, &[one.clone()]).unwrap(), vec![0]);
        assert!(greedy_cover(&t, &[s]).is_err());
    }

    #[test]
    fn unbeatable_five_cycles_in_a5() {
        let a5 = Catalog::new(5).unwrap();
        let alt = a5.alternating();
        let pi = alt.subset(|p| p.cycle_type().nontrivial() == vec![5]);
        let all: Vec<&BitSet> = a5.an_maximals().iter().map(|m| &m.elements).collect();
        let family: Vec<&BitSet> = a5.an_maximals().iter().filter(|m| m.order() == 10).map(|m| &m.elements).collect();
        let report = check_unbeatable(&family, &pi, &all, true).unwrap();
        assert!(report.passed());
        let cands: Vec<BitSet> = all.iter().map(|s| (*s).clone()).collect();
        assert_eq!(min_cover_exact(&pi, &cands, DEFAULT_BUDGET).unwrap().hi, family.len());
        let doubled = vec![family[0], family[0]];
        let report = check_unbeatable(&doubled, &pi, &all, true).unwrap();
        assert!(matches!(report.conditions[2], ConditionStatus::Overlap { .. }));
        assert!(check_unbeatable(&family, &pi, &all, false).is_err());
    }

    #[test]
    fn perm_targets() {
        let sym = PermGroup::symmetric(5).unwrap();
        let spec = GroupSpec::odd(5, 5);
        for (recipe, m) in [(Recipe::Pi, 2), (Recipe::A, 2), (Recipe::B, 2), (Recipe::C, 3), (Recipe::C, 5), (Recipe::C, 9), (Recipe::C, 2)] {
            let t = perm_target(&sym, m, recipe).unwrap();
            let spec = GroupSpec::odd(5, m);
            assert_eq!(t.len() as u128, closed_form_size(&spec, recipe).unwrap(), "{recipe} m={m}");
        }
        let c = twelve_five_cycles();
        assert_eq!(c.len(), 12);
        let _ = spec;
        let sym7 = PermGroup::symmetric(7).unwrap();
        let sigma = perm_target(&sym7, 2, Recipe::Sigma).unwrap();
        assert_eq!(sigma.len() as u128, closed_form_size(&GroupSpec::odd(7, 2), Recipe::Sigma).unwrap());
        let sym6 = PermGroup::symmetric(6).unwrap();
        for r in [Recipe::A, Recipe::B, Recipe::C] {
            let t = perm_target(&sym6, 3, r).unwrap();
            assert_eq!(t.len() as u128, closed_form_size(&GroupSpec::odd(6, 3), r).unwrap());
        }
    }

    #[test]
    fn recipe_parsing() {
        assert_eq!("Omega_2".parse::<Recipe>().unwrap(), Recipe::Omega(2));
        assert_eq!("Pi".parse::<Recipe>().unwrap(), Recipe::Pi);
        assert!("Omega_x".parse::<Recipe>().is_err());
    }

    #[test]
    fn seven_two_structure() {
        let fam = Families::new(GroupSpec::odd(7, 2)).unwrap();
        let cover = build_theorem_cover(&fam).unwrap();
        assert_eq!(cover.len(), 1716);
        assert_eq!(theorem_cover_structural(&fam, &cover).unwrap(), None);
    }

    #[test]
    fn odd_five_two_certificate() {
        let r = certify_odd_five_two().unwrap();
        assert_eq!(r.omega_sizes, [600, 600]);
        assert_eq!(r.unbeatable.family_size, 26);
        assert_eq!(r.unbeatable.min_member_hits, 24);
        // Every 4-cycle normalizes two Sylow 5-subgroups, so ten of them put
        // at least four into some F20 and that D10 product type meets Ω_1 in 40.
        assert_eq!(r.unbeatable.max_outsider_hits, 40);
        assert!(matches!(r.unbeatable.conditions[3], ConditionStatus::Dominated { outsider_hits: 40, .. }));
        assert!(r.unbeatable.conditions[..3].iter().all(|c| *c == ConditionStatus::Pass));
        assert!(r.combined.is_none());
        assert_eq!(r.forced, 100);
        assert_eq!(r.residual.status, SolveStatus::Exact);
        assert_eq!(r.certificate.sigma_interval, [126, 126]);
        assert!(r.certificate.upper_verified);
    }

    #[test]
    fn dropping_a_member_leaves_a_witness() {
        let spec = GroupSpec::odd(5, 2);
        let fam = Families::new(spec).unwrap();
        let g = MonolithGroup::enumerate(spec).unwrap();
        let mut cover = build_theorem_cover(&fam).unwrap();
        assert_eq!(covers_group(&fam, &g, &cover).unwrap(), None);
        let dropped = cover.remove(40);
        let missing = covers_group(&fam, &g, &cover).unwrap().expect("a member is forced");
        assert!(fam.contains(&g.element(missing), &dropped));
    }

    #[test]
    fn seven_two_sampled() {
        use rand::{Rng, SeedableRng};
        let spec = GroupSpec::odd(7, 2);
        let fam = Families::new(spec).unwrap();
        let cover = build_theorem_cover(&fam).unwrap();
        let alt = crate::perm::alternating_elements(7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let base = vec![alt[rng.gen_range(0..alt.len())], alt[rng.gen_range(0..alt.len())]];
            let e = spec.element(base, rng.gen_range(0..4)).unwrap();
            let hit = cover.iter().position(|d| fam.contains(&e, d));
            assert!(hit.is_some(), "{e} uncovered");
            if e.twist == 1 {
                let i = locate_twist_one(&fam, &cover, &e).expect("constructed member");
                assert!(fam.contains(&e, &cover[i]));
            }
        }
    }
}
