#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use delcheck::agents::AgentSet;
use delcheck::complex::{ChromaticComplex, Facet, FacetId};
use delcheck::logic::{Formula, FormulaKind, InputPath, SimplicialModel};

/// Five facets over colors 0 (w), 1 (b), 2 (r):
/// X1 = {w2,b1,r0}, X2 = {w2,b0,r1}, X3 = {w0,b3,r2}, X4 = {w0,b1,r2},
/// X5 = {w1,b0,r2}.
pub const FIVE_FACETS: [[i64; 3]; 5] = [[2, 1, 0], [2, 0, 1], [0, 3, 2], [0, 1, 2], [1, 0, 2]];

pub fn five_facet_model() -> (SimplicialModel, [FacetId; 5]) {
    let facets: Vec<Facet> = FIVE_FACETS.iter().map(|v| Facet::from_values(v)).collect();
    let complex = ChromaticComplex::new(2, facets.clone()).unwrap();
    let ids = std::array::from_fn(|i| complex.find_facet(&facets[i]).unwrap());
    (SimplicialModel::induce(complex, InputPath::direct()).unwrap(), ids)
}

/// Direct, unmemoized reading of the satisfaction clauses using
/// value-level vertex intersection.
pub fn naive_satisfies(m: &SimplicialModel, x: FacetId, phi: &Formula) -> bool {
    let c = m.complex();
    let shared = |x: FacetId, y: FacetId| c.facet(x).shared_colors(c.facet(y));
    match phi.kind() {
        FormulaKind::False => false,
        FormulaKind::Atom(a) => m.labeling(x).contains(a),
        FormulaKind::Or(cs) => cs.iter().any(|f| naive_satisfies(m, x, f)),
        FormulaKind::And(cs) => cs.iter().all(|f| naive_satisfies(m, x, f)),
        FormulaKind::Not(f) => !naive_satisfies(m, x, f),
        FormulaKind::Know(a, f) => {
            m.facet_ids().filter(|&y| shared(x, y).contains(*a)).all(|y| naive_satisfies(m, y, f))
        }
        FormulaKind::Distributed(g, f) => {
            m.facet_ids().filter(|&y| g.is_subset(shared(x, y))).all(|y| naive_satisfies(m, y, f))
        }
        FormulaKind::Common(g, f) => naive_closure(m, x, *g).into_iter().all(|y| naive_satisfies(m, y, f)),
    }
}

pub fn naive_closure(m: &SimplicialModel, x: FacetId, g: AgentSet) -> BTreeSet<FacetId> {
    let c = m.complex();
    let mut seen = BTreeSet::from([x]);
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for z in m.facet_ids() {
            if c.facet(y).shared_colors(c.facet(z)).intersects(g) && seen.insert(z) {
                queue.push_back(z);
            }
        }
    }
    seen
}

pub fn set(items: &[usize]) -> AgentSet {
    items.iter().copied().collect()
}
