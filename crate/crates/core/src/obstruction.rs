//! Logical obstruction formulas and the obstruction check.
//!
//! A positive formula that is valid in the task model and falsified in
//! the protocol model shows that no morphism from protocol to task can
//! exist, because positive formulas are preserved backwards along
//! morphisms.

use std::collections::HashMap;

use serde::Serialize;

use crate::adversary::Adversary;
use crate::agents::AgentSet;
use crate::complex::FacetId;
use crate::error::{Error, Result};
use crate::logic::{Evaluator, Formula, FormulaFactory, SimplicialModel, Verdict};

/// Default number of counterexample facets kept in a report.
pub const DEFAULT_COUNTEREXAMPLE_CAP: usize = 10;

/// The greatest `A ⊆ U` with `f(A) = A`, i.e. `∩_i f^i(U)`, where `f` is
/// given by its table on `U = {0, …, len-1}`.
pub fn permutation_subset(f: &[usize]) -> Vec<usize> {
    assert!(!f.is_empty(), "the domain must be nonempty");
    assert!(f.iter().all(|&y| y < f.len()), "f must map U into U");
    let mut current = vec![true; f.len()];
    loop {
        let mut image = vec![false; f.len()];
        for (x, &y) in f.iter().enumerate() {
            if current[x] {
                image[y] = true;
            }
        }
        if image == current {
            return current.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
        }
        current = image;
    }
}

/// `Ψ = ¬(∧_a input_a^0) ∨ C_Π(∨_a input_a^0)`.
pub fn binary_consensus_obstruction(n: usize, factory: &mut FormulaFactory) -> Formula {
    let full = AgentSet::full(n);
    let all_zero = factory.pin_inputs(&vec![0; n + 1]);
    let not_all_zero = factory.not(all_zero);
    let some_zero = factory.someone_holds(full, 0);
    let common = factory.common(full, some_zero);
    factory.or(vec![not_all_zero, common])
}

fn someone_not_own(outside: AgentSet, factory: &mut FormulaFactory) -> Vec<Formula> {
    outside
        .iter()
        .map(|a| {
            let atom = factory.atom(a, a as i64);
            factory.not(atom)
        })
        .collect()
}

/// `K_a(∨_{j∈A} ∨_{a'∈Π} input_{a'}^j)` for each `a` outside `A`.
fn knows_value_in(group: AgentSet, outside: AgentSet, n: usize, factory: &mut FormulaFactory) -> Vec<Formula> {
    let full = AgentSet::full(n);
    let held: Vec<Formula> =
        group.iter().flat_map(|j| full.iter().map(move |a| (a, j as i64))).map(|(a, j)| factory.atom(a, j)).collect();
    let held = factory.or(held);
    outside.iter().map(|a| factory.know(a, held.clone())).collect()
}

/// Builds the adversary obstruction `Φ` with `Ψ_A` memoized per `A`.
pub struct AdversaryObstruction<'a> {
    adversary: &'a Adversary,
    prune: bool,
    upper: HashMap<AgentSet, Formula>,
}

impl<'a> AdversaryObstruction<'a> {
    pub fn new(adversary: &'a Adversary) -> Self {
        AdversaryObstruction { adversary, prune: true, upper: HashMap::new() }
    }

    /// Keep `false` disjuncts instead of dropping them.
    pub fn unpruned(mut self) -> Self {
        self.prune = false;
        self
    }

    /// `Ψ_A`: `false` when `Π∖A` contains no survivor set, else `D_A ψ_A`.
    pub fn psi_upper(&mut self, group: AgentSet, factory: &mut FormulaFactory) -> Formula {
        if let Some(f) = self.upper.get(&group) {
            return f.clone();
        }
        let full = AgentSet::full(self.adversary.dim());
        let f = if self.adversary.contains(full.difference(group)) {
            let body = self.psi_lower(group, factory);
            factory.distributed(group, body)
        } else {
            factory.falsum()
        };
        self.upper.insert(group, f.clone());
        f
    }

    /// `ψ_A = ∨_{a∉A} ¬input_a^a ∨ ∨_{a∉A} K_a(…) ∨ ∨_{B⊋A} Ψ_B`.
    pub fn psi_lower(&mut self, group: AgentSet, factory: &mut FormulaFactory) -> Formula {
        let n = self.adversary.dim();
        let full = AgentSet::full(n);
        let outside = full.difference(group);
        let mut parts = someone_not_own(outside, factory);
        parts.extend(knows_value_in(group, outside, n, factory));
        for b in full.subsets().filter(|b| group.is_proper_subset(*b)) {
            let psi = self.psi_upper(b, factory);
            if !(self.prune && psi.is_false()) {
                parts.push(psi);
            }
        }
        factory.or(parts)
    }

    /// `Φ = ∨_a ¬input_a^a ∨ ∨_{0<|A|<csize} Ψ_A`.
    pub fn phi(&mut self, factory: &mut FormulaFactory) -> Result<Formula> {
        let c = self.adversary.csize();
        if c < 2 {
            return Err(Error::NoNontrivialK { csize: c });
        }
        let full = AgentSet::full(self.adversary.dim());
        let mut parts = someone_not_own(full, factory);
        for a in subsets_by_size(full).into_iter().filter(|a| !a.is_empty() && a.len() < c) {
            let psi = self.psi_upper(a, factory);
            if !(self.prune && psi.is_false()) {
                parts.push(psi);
            }
        }
        Ok(factory.or(parts))
    }
}

/// Subsets ordered by size, then lexicographically.
fn subsets_by_size(set: AgentSet) -> Vec<AgentSet> {
    let mut all: Vec<AgentSet> = set.subsets().collect();
    all.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
    all
}

/// The obstruction against `adversary`, valid in `I[SA_k]` for every
/// `k < csize` and falsified in `I[R_A]`.
pub fn adversary_obstruction(adversary: &Adversary, factory: &mut FormulaFactory) -> Result<Formula> {
    AdversaryObstruction::new(adversary).phi(factory)
}

/// The inductively defined wait-free obstruction for `k`-set agreement.
pub fn nishida_obstruction(n: usize, k: usize, factory: &mut FormulaFactory) -> Result<Formula> {
    if k == 0 || k > n {
        return Err(Error::AgreementBound { k, max: n });
    }
    let full = AgentSet::full(n);
    let mut memo = HashMap::new();
    let mut parts = someone_not_own(full, factory);
    for a in subsets_by_size(full).into_iter().filter(|a| (1..=k).contains(&a.len())) {
        parts.push(nishida_psi(n, a, &mut memo, factory));
    }
    Ok(factory.or(parts))
}

// Ψ^{(m)}_A with m = |A|.
fn nishida_psi(
    n: usize,
    group: AgentSet,
    memo: &mut HashMap<AgentSet, Formula>,
    factory: &mut FormulaFactory,
) -> Formula {
    if let Some(f) = memo.get(&group) {
        return f.clone();
    }
    let full = AgentSet::full(n);
    let outside = full.difference(group);
    let m = group.len();
    let mut parts = someone_not_own(outside, factory);
    parts.extend(knows_value_in(group, outside, n, factory));
    for i in m + 1..=n {
        for b in subsets_by_size(outside).into_iter().filter(|b| b.len() == i - m) {
            parts.push(nishida_psi(n, group.union(b), memo, factory));
        }
    }
    let body = factory.or(parts);
    let f = factory.distributed(group, body);
    memo.insert(group, f.clone());
    f
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    #[serde(serialize_with = "as_text")]
    pub formula: Formula,
    pub positive: bool,
    pub task_valid: bool,
    pub task_counterexamples: Vec<FacetId>,
    pub protocol_counterexamples: Vec<FacetId>,
    pub is_obstruction: bool,
    #[serde(skip)]
    pub task_verdict: Verdict,
    #[serde(skip)]
    pub protocol_verdict: Verdict,
}

fn as_text<S: serde::Serializer>(f: &Formula, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

/// Checks positivity, validity in `task`, and invalidity in `protocol`.
pub fn verify_obstruction(
    task: &SimplicialModel,
    protocol: &SimplicialModel,
    phi: &Formula,
    cap: usize,
) -> Result<ObstructionReport> {
    if task.dim() != protocol.dim() {
        return Err(Error::DimensionMismatch(task.dim(), protocol.dim()));
    }
    let positive = phi.is_positive();
    let check = |model: &SimplicialModel| -> Result<(Verdict, Vec<FacetId>)> {
        let mut ev = Evaluator::new(model);
        Ok((ev.valid(phi)?, ev.counterexamples(phi, cap)?))
    };
    let (task_side, protocol_side) = rayon::join(|| check(task), || check(protocol));
    let (task_verdict, task_counterexamples) = task_side?;
    let (protocol_verdict, protocol_counterexamples) = protocol_side?;
    let is_obstruction = positive && task_verdict.is_valid() && !protocol_verdict.is_valid();
    Ok(ObstructionReport {
        formula: phi.clone(),
        positive,
        task_valid: task_verdict.is_valid(),
        task_counterexamples,
        protocol_counterexamples,
        is_obstruction,
        task_verdict,
        protocol_verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_subset_examples() {
        assert_eq!(permutation_subset(&[0, 1, 2]), vec![0, 1, 2]);
        assert_eq!(permutation_subset(&[2, 2, 2, 2]), vec![2]);
        assert_eq!(permutation_subset(&[1, 0, 0]), vec![0, 1]);
    }

    #[test]
    fn binary_consensus_formula_shape() {
        let mut f = FormulaFactory::new();
        let psi = binary_consensus_obstruction(1, &mut f);
        assert_eq!(psi.to_string(), "!(input(0,0) & input(1,0)) | C[{0,1}] (input(0,0) | input(1,0))");
        for n in 1..5 {
            assert!(binary_consensus_obstruction(n, &mut f).is_positive());
        }
    }

    #[test]
    fn psi_of_everyone_is_false() {
        let mut f = FormulaFactory::new();
        for adv in [Adversary::wait_free(2), Adversary::threshold(2, 2).unwrap()] {
            let mut gen = AdversaryObstruction::new(&adv);
            assert!(gen.psi_upper(AgentSet::full(2), &mut f).is_false());
        }
    }

    #[test]
    fn two_of_three_singletons_are_not_false() {
        let mut f = FormulaFactory::new();
        let adv = Adversary::threshold(2, 2).unwrap();
        let mut gen = AdversaryObstruction::new(&adv);
        for a in 0..3 {
            let psi = gen.psi_upper(AgentSet::singleton(a), &mut f);
            assert!(matches!(psi.kind(), crate::logic::FormulaKind::Distributed(g, _) if *g == AgentSet::singleton(a)));
        }
        // pairs: the complement is a singleton, which contains no survivor set
        let pair: AgentSet = [0, 1].into_iter().collect();
        assert!(gen.psi_upper(pair, &mut f).is_false());
    }

    #[test]
    fn trivial_adversary_has_no_obstruction() {
        let mut f = FormulaFactory::new();
        let adv = Adversary::from_survivor_sets(2, &[AgentSet::full(2)]).unwrap();
        assert!(matches!(adversary_obstruction(&adv, &mut f), Err(Error::NoNontrivialK { csize: 1 })));
    }

    #[test]
    fn generated_formulas_are_positive() {
        let mut f = FormulaFactory::new();
        for n in 1..=3 {
            for k in 1..=n {
                assert!(nishida_obstruction(n, k, &mut f).unwrap().is_positive());
            }
            assert!(adversary_obstruction(&Adversary::wait_free(n), &mut f).unwrap().is_positive());
        }
        assert!(adversary_obstruction(&Adversary::threshold(2, 2).unwrap(), &mut f).unwrap().is_positive());
        assert!(nishida_obstruction(2, 3, &mut f).is_err());
        assert!(nishida_obstruction(2, 0, &mut f).is_err());
    }

    #[test]
    fn nishida_k1_uses_singletons_only() {
        let mut f = FormulaFactory::new();
        let phi = nishida_obstruction(2, 1, &mut f).unwrap();
        let groups: Vec<AgentSet> = phi
            .children()
            .iter()
            .filter_map(|c| match c.kind() {
                crate::logic::FormulaKind::Distributed(g, _) => Some(*g),
                _ => None,
            })
            .collect();
        assert_eq!(groups, vec![AgentSet::singleton(0), AgentSet::singleton(1), AgentSet::singleton(2)]);
    }
}
