//! Kripke models induced by chromatic complexes.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::agents::{Agent, AgentSet};
use crate::complex::{ChromaticComplex, ComplexJson, FacetId, Obs};
use crate::error::{Error, Result};

use super::formula::Atom;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Which component of a vertex observation carries the input value:
/// a sequence of pair selectors ending at an integer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct InputPath(pub Vec<Side>);

impl InputPath {
    /// The observation itself is the input.
    pub fn direct() -> Self {
        InputPath(Vec::new())
    }

    /// Designation for `C × D` given the designation for `C`.
    pub fn under_left(&self) -> Self {
        let mut path = vec![Side::Left];
        path.extend(&self.0);
        InputPath(path)
    }

    pub fn resolve<'o>(&self, obs: &'o Obs) -> Option<&'o Obs> {
        let mut cur = obs;
        for side in &self.0 {
            let (l, r) = cur.as_pair()?;
            cur = match side {
                Side::Left => l,
                Side::Right => r,
            };
        }
        Some(cur)
    }

    pub fn value(&self, obs: &Obs) -> Option<i64> {
        self.resolve(obs)?.as_value()
    }

    /// Follows left components until an integer is reached.
    pub fn detect(obs: &Obs) -> Option<InputPath> {
        let mut path = Vec::new();
        let mut cur = obs;
        loop {
            match cur {
                Obs::Value(_) => return Some(InputPath(path)),
                Obs::Pair(l, _) => {
                    path.push(Side::Left);
                    cur = l;
                }
                Obs::View(_) => return None,
            }
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0
            .iter()
            .map(|s| match s {
                Side::Left => "left".to_string(),
                Side::Right => "right".to_string(),
            })
            .collect()
    }

    pub fn from_strings(items: &[String]) -> Result<Self> {
        items
            .iter()
            .map(|s| match s.as_str() {
                "left" => Ok(Side::Left),
                "right" => Ok(Side::Right),
                other => Err(Error::Spec(format!("bad input path component `{other}`"))),
            })
            .collect::<Result<_>>()
            .map(InputPath)
    }
}

/// `⟨F(C), ~, L⟩`. Each facet holds exactly one input value per agent,
/// so the labeling is stored as a value vector per facet.
pub struct SimplicialModel {
    complex: ChromaticComplex,
    input_path: InputPath,
    inputs: Vec<Box<[i64]>>,
    components: RwLock<HashMap<AgentSet, Arc<[u32]>>>,
}

impl SimplicialModel {
    pub fn induce(complex: ChromaticComplex, input_path: InputPath) -> Result<Self> {
        let inputs = complex
            .facets()
            .iter()
            .map(|f| {
                f.vertices()
                    .iter()
                    .map(|v| input_path.value(&v.obs).ok_or(Error::InputDesignation { color: v.color }))
                    .collect::<Result<Box<[i64]>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialModel { complex, input_path, inputs, components: RwLock::default() })
    }

    /// Induces a model, detecting the input component from the first vertex.
    pub fn induce_detected(complex: ChromaticComplex) -> Result<Self> {
        let first = &complex.facets()[0].vertices()[0];
        let path = InputPath::detect(&first.obs).ok_or(Error::InputDesignation { color: first.color })?;
        Self::induce(complex, path)
    }

    /// Complex JSON plus the input designation.
    pub fn to_json(&self) -> ComplexJson {
        let mut json = self.complex.to_json();
        json.input_path = Some(self.input_path.to_strings());
        json
    }

    /// Reads a model; without an `input_path` the designation is detected.
    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        let complex = ChromaticComplex::from_json(json)?;
        match &json.input_path {
            Some(path) => Self::induce(complex, InputPath::from_strings(path)?),
            None => Self::induce_detected(complex),
        }
    }

    pub fn complex(&self) -> &ChromaticComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn agents(&self) -> AgentSet {
        self.complex.agents()
    }

    pub fn input_path(&self) -> &InputPath {
        &self.input_path
    }

    pub fn facet_count(&self) -> usize {
        self.complex.facet_count()
    }

    pub fn facet_ids(&self) -> impl Iterator<Item = FacetId> {
        self.complex.facet_ids()
    }

    pub fn input(&self, facet: FacetId, agent: Agent) -> i64 {
        self.inputs[facet.index()][agent]
    }

    pub fn inputs(&self, facet: FacetId) -> &[i64] {
        &self.inputs[facet.index()]
    }

    /// `L(X)`.
    pub fn labeling(&self, facet: FacetId) -> Vec<Atom> {
        self.inputs(facet).iter().enumerate().map(|(agent, &value)| Atom { agent, value }).collect()
    }

    pub fn has_atom(&self, facet: FacetId, atom: Atom) -> bool {
        self.inputs[facet.index()].get(atom.agent) == Some(&atom.value)
    }

    pub fn check_agent(&self, agent: Agent) -> Result<()> {
        if agent > self.dim() {
            Err(Error::AgentOutOfRange { agent, n: self.dim() })
        } else {
            Ok(())
        }
    }

    pub fn check_group(&self, group: AgentSet) -> Result<()> {
        match group.max_agent() {
            Some(a) => self.check_agent(a),
            None => Ok(()),
        }
    }

    /// Component label per facet for `≈_A`, computed once per group by
    /// breadth-first search over shared vertices of colors in `A`.
    pub(crate) fn components(&self, group: AgentSet) -> Arc<[u32]> {
        if let Some(c) = self.components.read().unwrap().get(&group) {
            return c.clone();
        }
        let n = self.facet_count();
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut queue = std::collections::VecDeque::new();
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = next;
            queue.push_back(FacetId(start as u32));
            while let Some(x) = queue.pop_front() {
                for a in group.iter() {
                    let v = self.complex.facet_vertices(x)[a];
                    for &y in self.complex.star(v) {
                        if label[y.index()] == u32::MAX {
                            label[y.index()] = next;
                            queue.push_back(y);
                        }
                    }
                }
            }
            next += 1;
        }
        let label: Arc<[u32]> = label.into();
        self.components.write().unwrap().insert(group, label.clone());
        label
    }
}

impl std::fmt::Debug for SimplicialModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialModel")
            .field("n", &self.dim())
            .field("facets", &self.facet_count())
            .field("input_path", &self.input_path)
            .finish()
    }
}

impl PartialEq for SimplicialModel {
    fn eq(&self, other: &Self) -> bool {
        self.complex == other.complex && self.inputs == other.inputs
    }
}
