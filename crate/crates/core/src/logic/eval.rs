//! The satisfaction relation over simplicial models.
//!
//! Evaluation is bottom-up over the formula DAG: each node is evaluated
//! once per model into a truth vector indexed by facet, so every
//! `(node, facet)` pair is computed at most once.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::formula::{Formula, FormulaKind};
use super::model::SimplicialModel;
use crate::agents::AgentSet;
use crate::complex::FacetId;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Counterexample(FacetId),
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }
}

/// Memoizing evaluator bound to one model.
pub struct Evaluator<'m> {
    model: &'m SimplicialModel,
    memo: HashMap<Formula, Arc<[bool]>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m SimplicialModel) -> Self {
        Evaluator { model, memo: HashMap::new() }
    }

    pub fn model(&self) -> &'m SimplicialModel {
        self.model
    }

    /// Truth value of `phi` at every facet.
    pub fn truth(&mut self, phi: &Formula) -> Result<Arc<[bool]>> {
        if let Some(t) = self.memo.get(phi) {
            return Ok(t.clone());
        }
        let m = self.model;
        let complex = m.complex();
        let n = m.facet_count();
        let t: Vec<bool> = match phi.kind() {
            FormulaKind::False => vec![false; n],
            FormulaKind::Atom(atom) => {
                m.check_agent(atom.agent)?;
                m.facet_ids().map(|x| m.has_atom(x, *atom)).collect()
            }
            FormulaKind::Not(c) => self.truth(c)?.iter().map(|b| !b).collect(),
            FormulaKind::Or(cs) | FormulaKind::And(cs) => {
                let is_or = matches!(phi.kind(), FormulaKind::Or(_));
                let mut acc = vec![!is_or; n];
                for c in cs {
                    let tc = self.truth(c)?;
                    for (a, b) in acc.iter_mut().zip(tc.iter()) {
                        if is_or {
                            *a |= b;
                        } else {
                            *a &= b;
                        }
                    }
                }
                acc
            }
            FormulaKind::Know(a, c) => {
                m.check_agent(*a)?;
                let tc = self.truth(c)?;
                let per_vertex: Vec<bool> = (0..complex.vertices().len())
                    .map(|v| complex.star(crate::complex::VertexId(v as u32)).iter().all(|y| tc[y.index()]))
                    .collect();
                m.facet_ids().map(|x| per_vertex[complex.facet_vertices(x)[*a].index()]).collect()
            }
            FormulaKind::Distributed(group, c) => {
                m.check_group(*group)?;
                let tc = self.truth(c)?;
                m.facet_ids().map(|x| related_distributed(m, x, *group).iter().all(|y| tc[y.index()])).collect()
            }
            FormulaKind::Common(group, c) => {
                m.check_group(*group)?;
                let tc = self.truth(c)?;
                let labels = m.components(*group);
                let count = labels.iter().max().map_or(0, |&l| l as usize + 1);
                let mut holds = vec![true; count];
                for (x, &l) in labels.iter().enumerate() {
                    holds[l as usize] &= tc[x];
                }
                labels.iter().map(|&l| holds[l as usize]).collect()
            }
        };
        let t: Arc<[bool]> = t.into();
        self.memo.insert(phi.clone(), t.clone());
        Ok(t)
    }

    pub fn satisfies(&mut self, facet: FacetId, phi: &Formula) -> Result<bool> {
        Ok(self.truth(phi)?[facet.index()])
    }

    pub fn valid(&mut self, phi: &Formula) -> Result<Verdict> {
        let t = self.truth(phi)?;
        Ok(match t.iter().position(|b| !b) {
            None => Verdict::Valid,
            Some(i) => Verdict::Counterexample(FacetId(i as u32)),
        })
    }

    /// Up to `cap` facets where `phi` fails, in facet order.
    pub fn counterexamples(&mut self, phi: &Formula, cap: usize) -> Result<Vec<FacetId>> {
        let t = self.truth(phi)?;
        Ok(t.iter().enumerate().filter(|(_, b)| !**b).map(|(i, _)| FacetId(i as u32)).take(cap).collect())
    }
}

/// `M, X ⊨ φ`.
pub fn satisfies(model: &SimplicialModel, facet: FacetId, phi: &Formula) -> Result<bool> {
    Evaluator::new(model).satisfies(facet, phi)
}

pub fn valid(model: &SimplicialModel, phi: &Formula) -> Result<Verdict> {
    Evaluator::new(model).valid(phi)
}

/// All `Y` with `X ≈_A Y` (reflexive transitive closure of `∪_{a∈A} ~_a`).
pub fn reachable_common(model: &SimplicialModel, facet: FacetId, group: AgentSet) -> Vec<FacetId> {
    let labels = model.components(group);
    let mine = labels[facet.index()];
    labels.iter().enumerate().filter(|(_, &l)| l == mine).map(|(i, _)| FacetId(i as u32)).collect()
}

/// All `Y` with `X ~_a Y` for every `a ∈ A`.
pub fn related_distributed(model: &SimplicialModel, facet: FacetId, group: AgentSet) -> Vec<FacetId> {
    let complex = model.complex();
    let own = complex.facet_vertices(facet);
    let Some(pivot) = group.iter().min_by_key(|&a| complex.star(own[a]).len()) else {
        return model.facet_ids().collect();
    };
    complex
        .star(own[pivot])
        .iter()
        .copied()
        .filter(|&y| {
            let theirs = complex.facet_vertices(y);
            group.iter().all(|a| own[a] == theirs[a])
        })
        .collect()
}

/// All `Y` with `X ~_a Y`.
pub fn related_to(model: &SimplicialModel, facet: FacetId, agent: usize) -> Vec<FacetId> {
    related_distributed(model, facet, AgentSet::singleton(agent))
}
