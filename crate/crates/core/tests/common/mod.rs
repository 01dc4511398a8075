//! Invariant checks shared by the property and acceptance suites. Each
//! returns a one-line summary on success and the first counterexample on
//! failure.

#![allow(dead_code)]

use std::collections::HashMap;
use std::process::Command;
use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use monocover::covers::{build_target, closed_form_size, Recipe};
use monocover::group::Universe;
use monocover::monolith::{GroupSpec, MonolithGroup};
use monocover::perm::count_roots;
use monocover::subgroups::{Families, SubgroupDescriptor};
use monocover::Permutation;

pub type Outcome = Result<String, String>;

pub fn odd52() -> &'static MonolithGroup {
    static G: OnceLock<MonolithGroup> = OnceLock::new();
    G.get_or_init(|| MonolithGroup::enumerate(GroupSpec::odd(5, 2)).unwrap())
}

pub fn runner(cases: u32, seed: u8) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

pub fn group_axioms(cases: u32) -> Outcome {
    let g = odd52();
    let spec = *g.spec();
    let n = g.order();
    runner(cases, 1)
        .run(&(0..n, 0..n, 0..n), |(i, j, k)| {
            let (a, b, c) = (g.element(i), g.element(j), g.element(k));
            let left = spec.multiply(&spec.multiply(&a, &b), &c);
            let right = spec.multiply(&a, &spec.multiply(&b, &c));
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(spec.multiply(&a, &spec.identity()), a.clone());
            prop_assert_eq!(spec.multiply(&spec.identity(), &a), a.clone());
            prop_assert!(spec.multiply(&a, &spec.inverse(&a)) == spec.identity());
            prop_assert!(g.index_of(&left).is_some());
            Ok(())
        })
        .map(|()| format!("{cases} triples at {spec}"))
        .map_err(|e| e.to_string())
}

pub fn homomorphisms(cases: u32) -> Outcome {
    let g = odd52();
    let spec = *g.spec();
    let n = g.order();
    let modulus = spec.twist_modulus();
    runner(cases, 2)
        .run(&(0..n, 0..n), |(i, j)| {
            let (a, b) = (g.element(i), g.element(j));
            prop_assert_eq!(spec.multiply(&a, &b).twist, (a.twist + b.twist) % modulus);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    runner(cases, 3)
        .run(&(0..720usize, 0..720usize), |(i, j)| {
            let (p, q) = (Permutation::unrank(6, i), Permutation::unrank(6, j));
            prop_assert_eq!(p.then(&q).is_even(), p.is_even() == q.is_even());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("twist and sign on {cases} pairs each"))
}

pub fn omega_sizes() -> Outcome {
    let mut seen = Vec::new();
    for (spec, recipes) in [
        (GroupSpec::odd(5, 1), vec![Recipe::Omega1, Recipe::Whole]),
        (GroupSpec::odd(7, 1), vec![Recipe::Omega1]),
        (GroupSpec::odd(5, 2), vec![Recipe::Omega1, Recipe::Omega(2), Recipe::Whole]),
        (GroupSpec::odd(5, 3), vec![Recipe::Omega1, Recipe::Omega(2), Recipe::Omega(3)]),
    ] {
        let g = if spec == *odd52().spec() { odd52().clone() } else { MonolithGroup::enumerate(spec).map_err(|e| e.to_string())? };
        for r in recipes {
            let t = build_target(&g, r).map_err(|e| format!("{spec} {r}: {e}"))?;
            let want = closed_form_size(&spec, r).map_err(|e| e.to_string())?;
            if t.len() as u128 != want {
                return Err(format!("{spec} {r}: {} elements, closed form {want}", t.len()));
            }
            seen.push(format!("{r}@{}:{}", spec, t.len()));
        }
        if build_target(&g, Recipe::Omega(2)).is_err() != (spec.m == 1) {
            return Err(format!("{spec}: Omega_2 availability"));
        }
    }
    Ok(seen.join(" "))
}

/// Twist-one normalizers of each full diagonal at `(5,2)`, tallied by the
/// product `x_1 x_2 t`, against `l_2(b)`. The product is always odd and
/// squares are even, so every tally is zero.
pub fn diagonal_identity() -> Outcome {
    let g = odd52();
    let spec = *g.spec();
    let f = Families::new(spec).map_err(|e| e.to_string())?;
    let tau = spec.tau();
    let sym = f.catalog().symmetric().elements().to_vec();
    let roots: HashMap<Permutation, u64> = sym.iter().map(|b| (*b, count_roots(b, 2).unwrap())).collect();
    if roots.values().sum::<u64>() != 120 || sym.iter().any(|b| !b.is_even() && roots[b] != 0) {
        return Err("root counts of S_5".into());
    }
    let id = Permutation::identity(5);
    let mut pairs = 0;
    for alpha in &sym {
        let d = SubgroupDescriptor::Diagonal { q: 2, conj: vec![id, *alpha] };
        let mut counts: HashMap<Permutation, u64> = HashMap::new();
        for i in g.twist_slice(1) {
            let e = g.element(i);
            if f.contains(&e, &d) {
                *counts.entry(e.base[0].then(&e.base[1]).then(&tau)).or_default() += 1;
            }
        }
        for b in &sym {
            let want = if b.is_even() { 0 } else { roots[b] };
            let got = counts.get(b).copied().unwrap_or(0);
            if got != want {
                return Err(format!("alpha {alpha}, b {b}: {got} vs {want}"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (diagonal, b) pairs"))
}

/// Runs the binary twice per argument list and compares the JSON bytes.
pub fn determinism(bin: &str) -> Outcome {
    let runs: [&[&str]; 3] = [
        &["--format", "json", "sigma", "formula", "--n", "5", "--m", "2"],
        &["--format", "json", "census", "--n", "5", "--m", "2", "--case", "even"],
        &["--format", "json", "cover", "--n", "5", "--m", "2", "--case", "odd"],
    ];
    for args in runs {
        let once = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (once()?, once()?);
        if !a.status.success() || a.stdout.is_empty() || a.stdout != b.stdout {
            return Err(format!("{} differs between runs", args.join(" ")));
        }
    }
    Ok(format!("{} commands byte-identical", runs.len()))
}
