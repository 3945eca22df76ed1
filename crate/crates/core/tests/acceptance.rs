//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::five_facet_model;
use delcheck::adversary::Adversary;
use delcheck::agents::AgentSet;
use delcheck::logic::{
    parse_formula, random::random_positive, reachable_common, related_to, satisfies, valid, Evaluator, FormulaFactory,
    SimplicialModel, Verdict,
};
use delcheck::obstruction::{
    adversary_obstruction, binary_consensus_obstruction, permutation_subset, verify_obstruction,
};
use delcheck::solvability::{find_morphism, knowledge_gain_check, verify_witness, SolvabilityStatus, DEFAULT_BUDGET};
use delcheck::tasks::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn set(items: &[usize]) -> AgentSet {
    items.iter().copied().collect()
}

fn partition(n: usize, blocks: &[&[usize]]) -> ViewVector {
    OrderedSetPartition(blocks.iter().map(|b| set(b)).collect()).view_vector(n)
}

fn five_facet_assertions() -> Check {
    let (m, x) = five_facet_model();
    let mut f = FormulaFactory::new();
    let mut parse = |t: &str| parse_formula(t, &mut f).map_err(|e| e.to_string());
    let one = "(input(0,1) | input(1,1) | input(2,1))";
    let cases = [
        (x[0], parse(&format!("K[0] {one}"))?, true, "K_0 at X1"),
        (x[4], parse(&format!("K[2] {one}"))?, false, "K_2 at X5"),
        (x[2], parse("D[{0,1}] input(1,3)")?, true, "D_{0,1} at X3"),
        (x[2], parse("D[{0,2}] input(1,3)")?, false, "D_{0,2} at X3"),
        (x[4], parse("C[{0,1,2}] (input(0,2) | input(1,2) | input(2,2))")?, true, "C_Pi at X5"),
    ];
    for (facet, phi, expected, name) in cases {
        let got = satisfies(&m, facet, &phi).map_err(|e| e.to_string())?;
        ensure!(got == expected, "{name}: expected {expected}, got {got}");
    }
    Ok(())
}

fn binary_consensus_reproduction() -> Check {
    let mut f = FormulaFactory::new();
    for n in 1..=3 {
        let i = initial_model(n, &[0, 1]).map_err(|e| e.to_string())?;
        let bc = product_update(&i, &binary_consensus_action(n, &mut f)).map_err(|e| e.to_string())?;
        let is = immediate_snapshot_protocol(&i).map_err(|e| e.to_string())?;
        let psi = binary_consensus_obstruction(n, &mut f);
        ensure!(psi.is_positive(), "n={n}: formula not positive");
        ensure!(valid(&bc, &psi).unwrap() == Verdict::Valid, "n={n}: not valid in the task model");
        let rest: Vec<usize> = (1..=n).collect();
        let zeros = vec![0; n + 1];
        let y = find_view_facet(&is, &zeros, &partition(n, &[&[0], &rest])).ok_or("Y^{0|1..n} missing")?;
        ensure!(!satisfies(&is, y, &psi).unwrap(), "n={n}: formula holds at Y^{{0|1..n}}");
        ensure!(!valid(&is, &psi).unwrap().is_valid(), "n={n}: valid in the protocol model");

        let mut w = vec![1; n + 1];
        w[0] = 0;
        let ones = vec![1; n + 1];
        let all: Vec<usize> = (0..=n).collect();
        let x1 = y;
        let x2 = find_view_facet(&is, &w, &partition(n, &[&[0], &rest])).ok_or("X2 missing")?;
        let x3 = find_view_facet(&is, &w, &partition(n, &[&all])).ok_or("X3 missing")?;
        let x4 = find_view_facet(&is, &w, &partition(n, &[&rest, &[0]])).ok_or("X4 missing")?;
        let x5 = find_view_facet(&is, &ones, &partition(n, &[&rest, &[0]])).ok_or("X5 missing")?;
        for (a, b, agent) in [(x1, x2, 0), (x2, x3, n), (x3, x4, 0), (x4, x5, n)] {
            ensure!(related_to(&is, a, agent).contains(&b), "n={n}: chain step via agent {agent} missing");
        }
        ensure!(reachable_common(&is, x1, AgentSet::full(n)).contains(&x5), "n={n}: X5 not reachable from X1");
        if n == 3 {
            ensure!(is.facet_count() == 1200, "n=3: {} protocol facets", is.facet_count());
        }
    }
    Ok(())
}

fn set_agreement_reproduction() -> Check {
    let mut f = FormulaFactory::new();
    let i = initial_model(2, &[0, 1, 2]).unwrap();
    let pi = ViewVector(vec![AgentSet::full(2); 3]);
    let wait_free = Adversary::wait_free(2);
    let two_of_three = Adversary::from_survivor_sets(2, &[set(&[0, 1]), set(&[1, 2]), set(&[0, 2])]).unwrap();
    for (adv, ks, limit) in [(&wait_free, vec![1, 2], 3), (&two_of_three, vec![1], 2)] {
        ensure!(adv.csize() == limit, "csize {} != {limit}", adv.csize());
        let start = Instant::now();
        let r = round_operator_protocol(&i, adv).unwrap();
        let phi = adversary_obstruction(adv, &mut f).unwrap();
        let diag = find_view_facet(&r, &[0, 1, 2], &pi).ok_or("diagonal facet missing")?;
        for k in ks {
            let sa = product_update(&i, &set_agreement_action(2, k, &mut f).unwrap()).unwrap();
            let report = verify_obstruction(&sa, &r, &phi, 10).unwrap();
            ensure!(report.is_obstruction, "csize {limit}, k={k}: not an obstruction");
            ensure!(!satisfies(&r, diag, &phi).unwrap(), "csize {limit}, k={k}: diagonal facet satisfies");
        }
        ensure!(start.elapsed() < Duration::from_secs(60), "csize {limit}: over 60 s");
    }
    Ok(())
}

fn brute_greatest_fixed(f: &[usize]) -> Option<Vec<usize>> {
    let u = f.len();
    let fixed: Vec<u32> = (1u32..(1 << u))
        .filter(|&m| (0..u).filter(|x| m & (1 << x) != 0).fold(0u32, |acc, x| acc | (1 << f[x])) == m)
        .collect();
    let maximal: Vec<u32> = fixed.iter().copied().filter(|&m| !fixed.iter().any(|&o| o != m && o & m == m)).collect();
    (maximal.len() == 1).then(|| (0..u).filter(|x| maximal[0] & (1 << x) != 0).collect())
}

fn permutation_subset_oracle() -> Check {
    let mut cases = 0;
    let mut mismatches = 0;
    for u in 1..=4usize {
        for code in 0..u.pow(u as u32) {
            let f: Vec<usize> = (0..u).map(|i| code / u.pow(i as u32) % u).collect();
            cases += 1;
            if brute_greatest_fixed(&f) != Some(permutation_subset(&f)) {
                mismatches += 1;
            }
        }
    }
    ensure!(cases == 256 + 27 + 4 + 1, "{cases} exhaustive cases");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..1000 {
        let f: Vec<usize> = (0..5).map(|_| rng.gen_range(0..5)).collect();
        if brute_greatest_fixed(&f) != Some(permutation_subset(&f)) {
            mismatches += 1;
        }
    }
    ensure!(mismatches == 0, "{mismatches} mismatches");
    Ok(())
}

fn combinatorial_counts() -> Check {
    let mut f = FormulaFactory::new();
    let parts: Vec<usize> = (1..=3).map(|n| ordered_set_partitions(AgentSet::full(n)).len()).collect();
    ensure!(parts == [3, 13, 75], "partitions {parts:?}");
    for (n, expected) in [(1, 6), (2, 14)] {
        let i = initial_model(n, &[0, 1]).unwrap();
        let c = product_update(&i, &binary_consensus_action(n, &mut f)).unwrap().facet_count();
        ensure!(c == expected, "binary consensus n={n}: {c}");
    }
    let i = initial_model(2, &[0, 1, 2]).unwrap();
    let c = product_update(&i, &set_agreement_action(2, 1, &mut f).unwrap()).unwrap().facet_count();
    ensure!(c == 57, "consensus over three values: {c}");
    let c = round_view_vectors(&Adversary::wait_free(1)).len();
    ensure!(c == 3, "round view vectors n=1: {c}");
    let i = initial_model(2, &[0, 1]).unwrap();
    let facets = |m: SimplicialModel| -> BTreeSet<_> { m.facet_ids().map(|x| m.complex().facet(x).clone()).collect() };
    let is = facets(immediate_snapshot_protocol(&i).unwrap());
    let r = facets(round_operator_protocol(&i, &Adversary::wait_free(2)).unwrap());
    ensure!(is.is_subset(&r) && is.len() < r.len(), "immediate snapshot not a strict subset");
    Ok(())
}

struct Witnessed {
    protocol: SimplicialModel,
    task: SimplicialModel,
    delta: delcheck::complex::VertexMap,
}

fn morphism_cross_check(witnesses: &mut Vec<Witnessed>) -> Check {
    let mut f = FormulaFactory::new();
    let i = initial_model(1, &[0, 1]).unwrap();
    let is = immediate_snapshot_protocol(&i).unwrap();
    let bc = product_update(&i, &binary_consensus_action(1, &mut f)).unwrap();
    let result = find_morphism(&is, &bc, DEFAULT_BUDGET).unwrap();
    ensure!(matches!(result.status, SolvabilityStatus::Unsolvable), "consensus: {}", result.label());
    let psi = binary_consensus_obstruction(1, &mut f);
    ensure!(verify_obstruction(&bc, &is, &psi, 10).unwrap().is_obstruction, "obstruction verdict disagrees");

    for task in [
        product_update(&i, &own_input_action(1, &[0, 1], &mut f).unwrap()).unwrap(),
        product_update(&i, &set_agreement_action(1, 2, &mut f).unwrap()).unwrap(),
    ] {
        let result = find_morphism(&is, &task, DEFAULT_BUDGET).unwrap();
        let delta = result.witness().ok_or("expected a witness")?.clone();
        let t = verify_witness(&delta, &is, &task);
        ensure!(t.all(), "witness fails a morphism condition: {t:?}");
        witnesses.push(Witnessed { protocol: immediate_snapshot_protocol(&i).unwrap(), task, delta });
    }
    Ok(())
}

fn knowledge_gain(witnesses: &[Witnessed]) -> Check {
    ensure!(!witnesses.is_empty(), "no witnesses to check");
    let mut f = FormulaFactory::new();
    let mut violations = 0;
    for (i, w) in witnesses.iter().enumerate() {
        let n = w.protocol.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let formulas: Vec<_> = (0..100).map(|_| random_positive(&mut rng, &mut f, 3, n, &[0, 1])).collect();
        ensure!(formulas.iter().all(|p| p.is_positive() && p.depth() <= 3), "generator broke its contract");
        if !knowledge_gain_check(&w.delta, &w.protocol, &w.task, &formulas).map_err(|e| e.to_string())? {
            violations += 1;
        }
        let mut se = Evaluator::new(&w.protocol);
        let mut te = Evaluator::new(&w.task);
        for phi in &formulas {
            let ts = se.truth(phi).unwrap();
            let tt = te.truth(phi).unwrap();
            for x in w.protocol.facet_ids() {
                let y = w.delta.image_facet(&w.protocol, &w.task, x).ok_or("image is not a facet")?;
                if tt[y.index()] && !ts[x.index()] {
                    violations += 1;
                }
            }
        }
    }
    ensure!(violations == 0, "{violations} violations");
    Ok(())
}

fn dual_relation_checks() -> Check {
    let mut f = FormulaFactory::new();
    let i = initial_model(2, &[0, 1, 2]).unwrap();
    let r = round_operator_protocol(&i, &Adversary::wait_free(2)).unwrap();
    for a in 0..=2 {
        for x in r.facet_ids() {
            let related: BTreeSet<_> = related_to(&r, x, a).into_iter().collect();
            let vx = view_of(&r, x, a).unwrap();
            for y in r.facet_ids() {
                let by_view =
                    vx == view_of(&r, y, a).unwrap() && input_of(&r, x, a).unwrap() == input_of(&r, y, a).unwrap();
                ensure!(related.contains(&y) == by_view, "round: {x} and {y} at agent {a}");
            }
        }
    }
    for k in 1..=2 {
        let sa = product_update(&i, &set_agreement_action(2, k, &mut f).unwrap()).unwrap();
        for a in 0..=2 {
            for x in sa.facet_ids() {
                let related: BTreeSet<_> = related_to(&sa, x, a).into_iter().collect();
                for y in sa.facet_ids() {
                    let by_io = input_of(&sa, x, a).unwrap() == input_of(&sa, y, a).unwrap()
                        && output_of(&sa, x, a).unwrap() == output_of(&sa, y, a).unwrap();
                    ensure!(related.contains(&y) == by_io, "set agreement k={k}: {x} and {y} at agent {a}");
                }
            }
        }
    }
    Ok(())
}

fn timed(limit: Option<Duration>, check: impl FnOnce() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let mut result = check();
    let elapsed = start.elapsed();
    if let (Ok(()), Some(limit)) = (&result, limit) {
        if elapsed > limit {
            result = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
    }
    (result, elapsed)
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let mut witnesses = Vec::new();
    let results = vec![
        ("1 five-facet regression", timed(secs(1), five_facet_assertions)),
        ("2 binary consensus obstruction n=1..3", timed(secs(30), binary_consensus_reproduction)),
        ("3 set agreement obstructions at n=2", timed(None, set_agreement_reproduction)),
        ("4 permutation subset oracle", timed(None, permutation_subset_oracle)),
        ("5 combinatorial counts", timed(None, combinatorial_counts)),
        ("6 morphism search at n=1", timed(secs(10), || morphism_cross_check(&mut witnesses))),
        ("7 knowledge gain on witnesses", timed(None, || knowledge_gain(&witnesses))),
        ("8 dual relation checks at n=2", timed(None, dual_relation_checks)),
    ];
    let mut failed = 0;
    for (name, (result, elapsed)) in &results {
        match result {
            Ok(()) => println!("criterion {name}: PASS ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({elapsed:.2?}): {msg}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
