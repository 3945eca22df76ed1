//! Task solvability by exhaustive morphism search.
//!
//! A task `I[T]` is solvable by a protocol `I[C]` iff there is a
//! morphism `δ: I[C] → I[T]` commuting with the projections onto `I`.
//! Commutation pins the input component of every image vertex, so the
//! search only chooses the task-side component of each protocol vertex;
//! facet constraints are enforced with forward checking against the set
//! of partial task facets.

use std::collections::HashSet;

use serde::Serialize;

use crate::complex::{check_morphism, FacetId, VertexId, VertexJson, VertexMap};
use crate::error::{Error, Result};
use crate::logic::{Evaluator, Formula, SimplicialModel};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolvabilityStatus {
    Solvable(VertexMap),
    Unsolvable,
    ResourceLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvabilityResult {
    pub status: SolvabilityStatus,
    /// Number of tentative vertex assignments made.
    pub explored: u64,
}

impl SolvabilityResult {
    pub fn witness(&self) -> Option<&VertexMap> {
        match &self.status {
            SolvabilityStatus::Solvable(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.status {
            SolvabilityStatus::Solvable(_) => "solvable",
            SolvabilityStatus::Unsolvable => "unsolvable",
            SolvabilityStatus::ResourceLimit => "resource-limit",
        }
    }
}

/// The four morphism conditions for a solvability witness, each
/// checked on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTranscript {
    pub color_preserving: bool,
    pub simplicial: bool,
    pub labeling_preserving: bool,
    pub commutes_with_input_projection: bool,
}

impl WitnessTranscript {
    pub fn all(&self) -> bool {
        self.color_preserving && self.simplicial && self.labeling_preserving && self.commutes_with_input_projection
    }
}

pub fn verify_witness(delta: &VertexMap, protocol: &SimplicialModel, task: &SimplicialModel) -> WitnessTranscript {
    let pc = protocol.complex();
    let tc = task.complex();
    let total = delta.len() == pc.vertices().len() && delta.images().iter().all(|t| t.index() < tc.vertices().len());
    if !total {
        return WitnessTranscript {
            color_preserving: false,
            simplicial: false,
            labeling_preserving: false,
            commutes_with_input_projection: false,
        };
    }
    let vertex_ids = || (0..pc.vertices().len() as u32).map(VertexId);
    let color_preserving = vertex_ids().all(|v| pc.vertex(v).color == tc.vertex(delta.get(v)).color);
    let images: Vec<Option<FacetId>> = pc.facet_ids().map(|x| delta.image_facet(protocol, task, x)).collect();
    let simplicial = images.iter().all(Option::is_some);
    let labeling_preserving =
        pc.facet_ids().zip(&images).all(|(x, y)| y.is_some_and(|y| protocol.inputs(x) == task.inputs(y)));
    let commutes_with_input_projection = vertex_ids().all(|v| {
        let own = protocol.input_path().value(&pc.vertex(v).obs);
        let image = task.input_path().value(&tc.vertex(delta.get(v)).obs);
        own.is_some() && own == image
    });
    WitnessTranscript { color_preserving, simplicial, labeling_preserving, commutes_with_input_projection }
}

struct Search<'a> {
    protocol: &'a SimplicialModel,
    width: usize,
    patterns: HashSet<Vec<u32>>,
    domains: Vec<Vec<u32>>,
    assigned: Vec<Option<u32>>,
    trail: Vec<(usize, Vec<u32>)>,
    explored: u64,
    budget: u64,
}

enum Outcome {
    Found,
    Exhausted,
    Limit,
}

fn pattern_key(mask: u32, ids: impl Iterator<Item = u32>) -> Vec<u32> {
    let mut key = vec![mask];
    key.extend(ids);
    key
}

impl Search<'_> {
    fn consistent_with(&self, facet: FacetId, extra: Option<(usize, u32)>) -> bool {
        let vs = self.protocol.complex().facet_vertices(facet);
        let mut mask = 0u32;
        let mut ids = Vec::with_capacity(self.width);
        for (color, v) in vs.iter().enumerate() {
            let value = match extra {
                Some((p, t)) if p == v.index() => Some(t),
                _ => self.assigned[v.index()],
            };
            if let Some(t) = value {
                mask |= 1 << color;
                ids.push(t);
            }
        }
        mask == 0 || self.patterns.contains(&pattern_key(mask, ids.into_iter()))
    }

    fn pick(&self) -> Option<usize> {
        let complex = self.protocol.complex();
        (0..self.domains.len()).filter(|&p| self.assigned[p].is_none()).min_by_key(|&p| {
            let degree = complex.star(VertexId(p as u32)).len();
            (self.domains[p].len(), std::cmp::Reverse(degree), p)
        })
    }

    // Filters the domains of unassigned neighbors of `p`.
    fn propagate(&mut self, p: usize) -> bool {
        let complex = self.protocol.complex();
        for &facet in complex.star(VertexId(p as u32)) {
            for &u in complex.facet_vertices(facet) {
                let u = u.index();
                if self.assigned[u].is_some() {
                    continue;
                }
                let keep: Vec<u32> =
                    self.domains[u].iter().copied().filter(|&t| self.consistent_with(facet, Some((u, t)))).collect();
                if keep.len() != self.domains[u].len() {
                    let old = std::mem::replace(&mut self.domains[u], keep);
                    self.trail.push((u, old));
                    if self.domains[u].is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (u, old) = self.trail.pop().unwrap();
            self.domains[u] = old;
        }
    }

    fn run(&mut self) -> Outcome {
        let Some(p) = self.pick() else {
            return Outcome::Found;
        };
        let choices = self.domains[p].clone();
        for t in choices {
            self.explored += 1;
            if self.explored > self.budget {
                return Outcome::Limit;
            }
            let mark = self.trail.len();
            self.assigned[p] = Some(t);
            if self.propagate(p) {
                match self.run() {
                    Outcome::Exhausted => {}
                    done => return done,
                }
            }
            self.undo(mark);
            self.assigned[p] = None;
        }
        Outcome::Exhausted
    }
}

/// Searches for a morphism `protocol → task` commuting with the input
/// projection. Both models must be products over the same initial model.
pub fn find_morphism(protocol: &SimplicialModel, task: &SimplicialModel, budget: u64) -> Result<SolvabilityResult> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    if protocol.dim() != task.dim() {
        return Err(Error::DimensionMismatch(protocol.dim(), task.dim()));
    }
    let pc = protocol.complex();
    let tc = task.complex();
    let width = protocol.dim() + 1;

    let input = |m: &SimplicialModel, v: &crate::complex::Vertex| {
        m.input_path().value(&v.obs).ok_or(Error::InputDesignation { color: v.color })
    };
    let mut by_key: std::collections::HashMap<(usize, i64), Vec<u32>> = std::collections::HashMap::new();
    for (i, v) in tc.vertices().iter().enumerate() {
        by_key.entry((v.color, input(task, v)?)).or_default().push(i as u32);
    }
    let mut domains = Vec::with_capacity(pc.vertices().len());
    for v in pc.vertices() {
        let candidates = by_key.get(&(v.color, input(protocol, v)?)).cloned().unwrap_or_default();
        if candidates.is_empty() {
            return Ok(SolvabilityResult { status: SolvabilityStatus::Unsolvable, explored: 0 });
        }
        domains.push(candidates);
    }

    let mut patterns = HashSet::new();
    for y in tc.facet_ids() {
        let vs = tc.facet_vertices(y);
        for mask in 1u32..(1 << width) {
            let ids = (0..width).filter(|c| mask & (1 << c) != 0).map(|c| vs[c].0);
            patterns.insert(pattern_key(mask, ids));
        }
    }

    let mut search = Search {
        protocol,
        width,
        patterns,
        assigned: vec![None; domains.len()],
        domains,
        trail: Vec::new(),
        explored: 0,
        budget,
    };
    let status = match search.run() {
        Outcome::Found => SolvabilityStatus::Solvable(VertexMap::new(
            search.assigned.iter().map(|t| VertexId(t.expect("complete assignment"))).collect(),
        )),
        Outcome::Exhausted => SolvabilityStatus::Unsolvable,
        Outcome::Limit => SolvabilityStatus::ResourceLimit,
    };
    Ok(SolvabilityResult { status, explored: search.explored.min(budget) })
}

/// For every positive `φ` and facet `X`: `D, δ(X) ⊨ φ` implies `C, X ⊨ φ`.
pub fn knowledge_gain_check(
    delta: &VertexMap,
    source: &SimplicialModel,
    target: &SimplicialModel,
    formulas: &[Formula],
) -> Result<bool> {
    if let Some(bad) = formulas.iter().find(|f| !f.is_positive()) {
        return Err(Error::NonPositive(bad.to_string()));
    }
    check_morphism(delta, source, target).map_err(|v| Error::NotMorphism(v.to_string()))?;
    let images: Vec<FacetId> =
        source.facet_ids().map(|x| delta.image_facet(source, target, x).expect("checked simplicial")).collect();
    let mut se = Evaluator::new(source);
    let mut te = Evaluator::new(target);
    for phi in formulas {
        let ts = se.truth(phi)?;
        let tt = te.truth(phi)?;
        if images.iter().enumerate().any(|(x, y)| tt[y.index()] && !ts[x]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Serialize)]
pub struct WitnessEntry {
    pub from: u32,
    pub to: u32,
    pub from_vertex: VertexJson,
    pub to_vertex: VertexJson,
}

#[derive(Serialize)]
pub struct SolveReport {
    pub status: &'static str,
    pub explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<WitnessEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript: Option<WitnessTranscript>,
}

impl SolveReport {
    pub fn new(result: &SolvabilityResult, protocol: &SimplicialModel, task: &SimplicialModel) -> Self {
        let vj = |v: &crate::complex::Vertex| VertexJson { color: v.color, obs: v.obs.to_json() };
        let map = result.witness().map(|w| {
            w.images()
                .iter()
                .enumerate()
                .map(|(i, t)| WitnessEntry {
                    from: i as u32,
                    to: t.0,
                    from_vertex: vj(protocol.complex().vertex(VertexId(i as u32))),
                    to_vertex: vj(task.complex().vertex(*t)),
                })
                .collect()
        });
        let transcript = result.witness().map(|w| verify_witness(w, protocol, task));
        SolveReport { status: result.label(), explored: result.explored, map, transcript }
    }
}
