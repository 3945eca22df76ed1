//! Initial models, action models for protocols and tasks, and the
//! product update.
//!
//! Protocol action models here are uniform: every action point is a pair
//! of an input facet and an index (an ordered set partition for
//! immediate snapshot, a view vector for the round operator) and its
//! precondition pins the input facet. Their products can therefore be
//! built directly, facet by facet, which [`view_protocol`] does; the
//! generic [`product_update`] is kept for tasks and for cross-checking.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::adversary::Adversary;
use crate::agents::{Agent, AgentSet};
use crate::complex::{ChromaticComplex, ComplexJson, Facet, FacetId, Obs, Vertex};
use crate::error::{Error, Result};
use crate::logic::{Evaluator, Formula, FormulaFactory, InputPath, SimplicialModel};

/// `S_1 | … | S_m`: nonempty disjoint blocks covering `Π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedSetPartition(pub Vec<AgentSet>);

impl OrderedSetPartition {
    pub fn blocks(&self) -> &[AgentSet] {
        &self.0
    }

    /// The view vector of an immediate snapshot run: an agent in block
    /// `S_k` sees `S_1 ∪ … ∪ S_k`.
    pub fn view_vector(&self, n: usize) -> ViewVector {
        let mut views = vec![AgentSet::EMPTY; n + 1];
        let mut seen = AgentSet::EMPTY;
        for &block in &self.0 {
            seen = seen.union(block);
            for a in block.iter() {
                views[a] = seen;
            }
        }
        ViewVector(views)
    }
}

impl std::fmt::Display for OrderedSetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            let items: Vec<String> = b.iter().map(|a| a.to_string()).collect();
            write!(f, "{}", items.join(","))?;
        }
        Ok(())
    }
}

/// All ordered set partitions of `set`, first blocks in lexicographic
/// order of their sorted members.
pub fn ordered_set_partitions(set: AgentSet) -> Vec<OrderedSetPartition> {
    if set.is_empty() {
        return vec![OrderedSetPartition(Vec::new())];
    }
    let mut firsts: Vec<AgentSet> = set.subsets().filter(|s| !s.is_empty()).collect();
    firsts.sort_by_key(|s| s.iter().collect::<Vec<_>>());
    let mut out = Vec::new();
    for first in firsts {
        for rest in ordered_set_partitions(set.difference(first)) {
            let mut blocks = vec![first];
            blocks.extend(rest.0);
            out.push(OrderedSetPartition(blocks));
        }
    }
    out
}

/// `⟨S_0, …, S_n⟩`: the set of agents each agent hears from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViewVector(pub Vec<AgentSet>);

impl ViewVector {
    pub fn view(&self, a: Agent) -> AgentSet {
        self.0[a]
    }

    pub fn self_inclusive(&self) -> bool {
        self.0.iter().enumerate().all(|(a, s)| s.contains(a))
    }

    /// Views are totally ordered by inclusion.
    pub fn contained(&self) -> bool {
        self.0.iter().all(|s| self.0.iter().all(|t| s.is_subset(*t) || t.is_subset(*s)))
    }

    pub fn survives(&self, adversary: &Adversary) -> bool {
        self.0.iter().all(|&s| adversary.contains(s))
    }

    /// `a' ∈ S_a ⇒ S_{a'} ⊆ S_a`.
    pub fn immediate(&self) -> bool {
        self.0.iter().all(|&s| s.iter().all(|b| self.0[b].is_subset(s)))
    }

    pub fn is_valid_for(&self, adversary: &Adversary) -> bool {
        self.self_inclusive() && self.contained() && self.survives(adversary)
    }

    /// `∩_a S_a`.
    pub fn min_view(&self) -> AgentSet {
        self.0.iter().fold(AgentSet::full(self.0.len() - 1), |acc, &s| acc.intersection(s))
    }
}

/// All view vectors allowed by the round operator for `adversary`.
pub fn round_view_vectors(adversary: &Adversary) -> Vec<ViewVector> {
    let n = adversary.dim();
    let full = AgentSet::full(n);
    let candidates: Vec<Vec<AgentSet>> =
        (0..=n).map(|a| full.subsets().filter(|s| s.contains(a) && adversary.contains(*s)).collect()).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n + 1);
    extend_views(&candidates, &mut current, &mut out);
    out
}

fn extend_views(candidates: &[Vec<AgentSet>], current: &mut Vec<AgentSet>, out: &mut Vec<ViewVector>) {
    let a = current.len();
    if a == candidates.len() {
        out.push(ViewVector(current.clone()));
        return;
    }
    for &s in &candidates[a] {
        if current.iter().all(|&t| s.is_subset(t) || t.is_subset(s)) {
            current.push(s);
            extend_views(candidates, current, out);
            current.pop();
        }
    }
}

/// View vectors of one immediate snapshot round, one per ordered set
/// partition.
pub fn immediate_snapshot_view_vectors(n: usize) -> Vec<ViewVector> {
    ordered_set_partitions(AgentSet::full(n)).iter().map(|p| p.view_vector(n)).collect()
}

/// `⟨d_0, …, d_n⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecisionVector(pub Vec<i64>);

impl DecisionVector {
    pub fn distinct(&self) -> usize {
        let mut v = self.0.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }
}

fn normalized_inputs(inp: &[i64]) -> Result<Vec<i64>> {
    if inp.is_empty() {
        return Err(Error::EmptyInputs);
    }
    let mut values = inp.to_vec();
    values.sort_unstable();
    values.dedup();
    Ok(values)
}

/// Every assignment of values from `values` to agents `0..=n`.
fn assignments(n: usize, values: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..=n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// `I^inp`: one facet per assignment of inputs to agents.
pub fn initial_model(n: usize, inp: &[i64]) -> Result<SimplicialModel> {
    let values = normalized_inputs(inp)?;
    let facets = assignments(n, &values).iter().map(|x| Facet::from_values(x)).collect();
    SimplicialModel::induce(ChromaticComplex::new(n, facets)?, InputPath::direct())
}

/// A complex whose facets carry preconditions.
pub struct ActionModel {
    name: String,
    complex: ChromaticComplex,
    pre: Vec<Formula>,
}

impl ActionModel {
    pub fn new(name: impl Into<String>, n: usize, points: Vec<(Facet, Formula)>) -> Result<Self> {
        let complex = ChromaticComplex::new(n, points.iter().map(|(f, _)| f.clone()).collect())?;
        let mut pre: Vec<Option<Formula>> = vec![None; complex.facet_count()];
        for (facet, formula) in points {
            let id = complex.find_facet(&facet).expect("facet was just inserted");
            match &pre[id.index()] {
                Some(existing) if existing != &formula => {
                    return Err(Error::Spec("one action point with two preconditions".into()))
                }
                _ => pre[id.index()] = Some(formula),
            }
        }
        let pre = pre.into_iter().map(|p| p.expect("every facet has a precondition")).collect();
        Ok(ActionModel { name: name.into(), complex, pre })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &ChromaticComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn pre(&self, facet: FacetId) -> &Formula {
        &self.pre[facet.index()]
    }

    pub fn to_json(&self) -> ComplexJson {
        let mut json = self.complex.to_json();
        json.pre =
            Some(self.pre.iter().enumerate().map(|(i, f)| (i.to_string(), f.to_string())).collect::<BTreeMap<_, _>>());
        json
    }
}

fn view_obs(inputs: &[i64], view: AgentSet) -> Obs {
    Obs::view(view.iter().map(|b| (b, Obs::Value(inputs[b]))))
}

/// The action facet `X^{S⃗}`: agent `a` observes the inputs of `S_a`.
pub fn view_facet(inputs: &[i64], views: &ViewVector) -> Facet {
    Facet::new(views.0.iter().enumerate().map(|(a, &s)| Vertex::new(a, view_obs(inputs, s))).collect())
        .expect("one vertex per agent")
}

fn view_action(
    name: &str,
    n: usize,
    inp: &[i64],
    vectors: &[ViewVector],
    factory: &mut FormulaFactory,
) -> Result<ActionModel> {
    let values = normalized_inputs(inp)?;
    let mut points = Vec::new();
    for x in assignments(n, &values) {
        let pre = factory.pin_inputs(&x);
        for s in vectors {
            points.push((view_facet(&x, s), pre.clone()));
        }
    }
    ActionModel::new(name, n, points)
}

/// `Ch I^inp` with uniform preconditions.
pub fn immediate_snapshot_action(n: usize, inp: &[i64], factory: &mut FormulaFactory) -> Result<ActionModel> {
    view_action("is", n, inp, &immediate_snapshot_view_vectors(n), factory)
}

/// Round operator action model for `adversary` over inputs `inp`.
pub fn round_operator_action(adversary: &Adversary, inp: &[i64], factory: &mut FormulaFactory) -> Result<ActionModel> {
    view_action("round", adversary.dim(), inp, &round_view_vectors(adversary), factory)
}

/// Two facets `0̂`, `1̂`, each allowed when some agent holds that value.
pub fn binary_consensus_action(n: usize, factory: &mut FormulaFactory) -> ActionModel {
    let full = AgentSet::full(n);
    let points =
        [0, 1].into_iter().map(|d| (Facet::from_values(&vec![d; n + 1]), factory.someone_holds(full, d))).collect();
    ActionModel::new("bc", n, points).expect("two well-formed facets")
}

/// `SA_k`: decision vectors over `Π` with at most `k` distinct values;
/// each decision must be somebody's input.
pub fn set_agreement_action(n: usize, k: usize, factory: &mut FormulaFactory) -> Result<ActionModel> {
    if k == 0 || k > n + 1 {
        return Err(Error::AgreementBound { k, max: n + 1 });
    }
    let full = AgentSet::full(n);
    let pi: Vec<i64> = (0..=n as i64).collect();
    let mut points = Vec::new();
    for d in assignments(n, &pi) {
        if DecisionVector(d.clone()).distinct() > k {
            continue;
        }
        let clauses = d.iter().map(|&v| factory.someone_holds(full, v)).collect();
        points.push((Facet::from_values(&d), factory.and(clauses)));
    }
    ActionModel::new(format!("sa:{k}"), n, points)
}

/// Each agent decides its own input: decision vectors equal to the input
/// facet. Solvable by any protocol.
pub fn own_input_action(n: usize, inp: &[i64], factory: &mut FormulaFactory) -> Result<ActionModel> {
    let values = normalized_inputs(inp)?;
    let points = assignments(n, &values)
        .into_iter()
        .map(|d| {
            let pre = factory.pin_inputs(&d);
            (Facet::from_values(&d), pre)
        })
        .collect();
    ActionModel::new("sa-trivial", n, points)
}

/// `I[D]`: pairs `X × Y` such that `I, X ⊨ pre(Y)`, labeled by `X`.
pub fn product_update(initial: &SimplicialModel, action: &ActionModel) -> Result<SimplicialModel> {
    if initial.dim() != action.dim() {
        return Err(Error::DimensionMismatch(initial.dim(), action.dim()));
    }
    let mut eval = Evaluator::new(initial);
    let mut facets = Vec::new();
    for y in action.complex().facet_ids() {
        let holds = eval.truth(action.pre(y))?;
        let yf = action.complex().facet(y);
        for x in initial.facet_ids().filter(|x| holds[x.index()]) {
            facets.push(initial.complex().facet(x).product(yf)?);
        }
    }
    if facets.is_empty() {
        return Err(Error::EmptyProduct);
    }
    let complex = ChromaticComplex::new(initial.dim(), facets)?;
    SimplicialModel::induce(complex, initial.input_path().under_left())
}

/// Direct product of `initial` with a uniform view-based protocol: one
/// facet `X × X^{S⃗}` per input facet and view vector.
pub fn view_protocol(initial: &SimplicialModel, vectors: &[ViewVector]) -> Result<SimplicialModel> {
    let ids: Vec<FacetId> = initial.facet_ids().collect();
    let facets = ids
        .par_iter()
        .flat_map_iter(|&x| {
            let xf = initial.complex().facet(x);
            vectors.iter().map(move |s| xf.product(&view_facet(initial.inputs(x), s)))
        })
        .collect::<Result<Vec<_>>>()?;
    if facets.is_empty() {
        return Err(Error::EmptyProduct);
    }
    let complex = ChromaticComplex::new(initial.dim(), facets)?;
    SimplicialModel::induce(complex, initial.input_path().under_left())
}

/// `I[IS]`, built directly.
pub fn immediate_snapshot_protocol(initial: &SimplicialModel) -> Result<SimplicialModel> {
    view_protocol(initial, &immediate_snapshot_view_vectors(initial.dim()))
}

/// `I[R_A]`, built directly.
pub fn round_operator_protocol(initial: &SimplicialModel, adversary: &Adversary) -> Result<SimplicialModel> {
    if adversary.dim() != initial.dim() {
        return Err(Error::DimensionMismatch(initial.dim(), adversary.dim()));
    }
    view_protocol(initial, &round_view_vectors(adversary))
}

fn action_component(model: &SimplicialModel, facet: FacetId, a: Agent) -> Result<&Obs> {
    model.check_agent(a)?;
    let v = model.complex().facet(facet).vertex(a);
    v.obs.as_pair().map(|(_, r)| r).ok_or(Error::NotProduct)
}

/// `View_F(a)` as `(agent, input)` pairs.
pub fn view_of(model: &SimplicialModel, facet: FacetId, a: Agent) -> Result<Vec<(Agent, i64)>> {
    let view = action_component(model, facet, a)?.as_view().ok_or(Error::NoViews)?;
    view.iter().map(|(b, o)| o.as_value().map(|v| (*b, v)).ok_or(Error::NoViews)).collect()
}

/// The agents appearing in `View_F(a)`.
pub fn view_agents(model: &SimplicialModel, facet: FacetId, a: Agent) -> Result<AgentSet> {
    Ok(view_of(model, facet, a)?.into_iter().map(|(b, _)| b).collect())
}

/// `Input_F(a)`.
pub fn input_of(model: &SimplicialModel, facet: FacetId, a: Agent) -> Result<i64> {
    model.check_agent(a)?;
    Ok(model.input(facet, a))
}

/// `Output_F(a)` for a decision task facet.
pub fn output_of(model: &SimplicialModel, facet: FacetId, a: Agent) -> Result<i64> {
    action_component(model, facet, a)?.as_value().ok_or(Error::NoDecisions)
}

/// `Output_F` as a vector indexed by agent.
pub fn outputs(model: &SimplicialModel, facet: FacetId) -> Result<Vec<i64>> {
    (0..=model.dim()).map(|a| output_of(model, facet, a)).collect()
}

/// The view vector of a view-protocol facet.
pub fn view_vector_of(model: &SimplicialModel, facet: FacetId) -> Result<ViewVector> {
    (0..=model.dim()).map(|a| view_agents(model, facet, a)).collect::<Result<_>>().map(ViewVector)
}

/// `∩_a View_F(a)`.
pub fn min_view(model: &SimplicialModel, facet: FacetId) -> Result<AgentSet> {
    Ok(view_vector_of(model, facet)?.min_view())
}

/// Finds the facet `X × X^{S⃗}` of a view protocol.
pub fn find_view_facet(model: &SimplicialModel, inputs: &[i64], views: &ViewVector) -> Option<FacetId> {
    let z = Facet::from_values(inputs).product(&view_facet(inputs, views)).ok()?;
    model.complex().find_facet(&z)
}

/// Finds the facet `X × ⟨d⟩` of a decision task.
pub fn find_decision_facet(model: &SimplicialModel, inputs: &[i64], decisions: &[i64]) -> Option<FacetId> {
    let z = Facet::from_values(inputs).product(&Facet::from_values(decisions)).ok()?;
    model.complex().find_facet(&z)
}

/// Groups facets by their input assignment.
pub fn facets_by_input(model: &SimplicialModel) -> HashMap<Vec<i64>, Vec<FacetId>> {
    let mut map: HashMap<Vec<i64>, Vec<FacetId>> = HashMap::new();
    for x in model.facet_ids() {
        map.entry(model.inputs(x).to_vec()).or_default().push(x);
    }
    map
}
