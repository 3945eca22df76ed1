//! Pure chromatic simplicial complexes stored by their facets.
//!
//! Vertices are interned: two facets share a vertex exactly when the
//! color and the observation coincide structurally. Lower-dimensional
//! simplexes are never stored.

mod json;
mod morphism;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::agents::{Agent, AgentSet};
use crate::error::{Error, Result};

pub use json::{ComplexJson, FacetJson, VertexJson};
pub use morphism::{check_morphism, MorphismViolation, VertexMap};

/// Local state carried by a vertex.
///
/// Views are kept sorted by agent so that set equality is plain
/// structural equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obs {
    Value(i64),
    View(Vec<(Agent, Obs)>),
    Pair(Box<Obs>, Box<Obs>),
}

impl Obs {
    pub fn view<I: IntoIterator<Item = (Agent, Obs)>>(entries: I) -> Obs {
        let mut v: Vec<_> = entries.into_iter().collect();
        v.sort();
        v.dedup();
        Obs::View(v)
    }

    pub fn pair(left: Obs, right: Obs) -> Obs {
        Obs::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_value(&self) -> Option<i64> {
        match self {
            Obs::Value(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_view(&self) -> Option<&[(Agent, Obs)]> {
        match self {
            Obs::View(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Obs, &Obs)> {
        match self {
            Obs::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

impl fmt::Debug for Obs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obs::Value(v) => write!(f, "{v}"),
            Obs::View(entries) => {
                write!(f, "{{")?;
                for (i, (a, o)) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({a},{o:?})")?;
                }
                write!(f, "}}")
            }
            Obs::Pair(l, r) => write!(f, "<{l:?},{r:?}>"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub color: Agent,
    pub obs: Obs,
}

impl Vertex {
    pub fn new(color: Agent, obs: Obs) -> Self {
        Vertex { color, obs }
    }

    pub fn value(color: Agent, v: i64) -> Self {
        Vertex { color, obs: Obs::Value(v) }
    }

    pub fn project_left(&self) -> Result<Vertex> {
        let (l, _) = self.obs.as_pair().ok_or(Error::NotProduct)?;
        Ok(Vertex::new(self.color, l.clone()))
    }

    pub fn project_right(&self) -> Result<Vertex> {
        let (_, r) = self.obs.as_pair().ok_or(Error::NotProduct)?;
        Ok(Vertex::new(self.color, r.clone()))
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{:?})", self.color, self.obs)
    }
}

/// A maximal simplex: one vertex per color of `Π`, ordered by color.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    vertices: Vec<Vertex>,
}

impl Facet {
    /// Builds a facet from vertices in any order. Colors must be exactly
    /// `0..=n` for some `n`.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Facet> {
        if vertices.is_empty() {
            return Err(Error::FacetSize { n: 0, found: 0 });
        }
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0].color == w[1].color {
                return Err(Error::DuplicateColor(w[0].color));
            }
        }
        let n = vertices.len() - 1;
        if let Some(v) = vertices.iter().find(|v| v.color > n) {
            return Err(Error::ColorOutOfRange { color: v.color, n });
        }
        Ok(Facet { vertices })
    }

    /// `{(0,v_0),…,(n,v_n)}`.
    pub fn from_values(values: &[i64]) -> Facet {
        Facet { vertices: values.iter().enumerate().map(|(a, &v)| Vertex::value(a, v)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, color: Agent) -> &Vertex {
        &self.vertices[color]
    }

    /// `χ(X ∩ Y)`.
    pub fn shared_colors(&self, other: &Facet) -> AgentSet {
        self.vertices.iter().zip(&other.vertices).filter(|(u, v)| u == v).map(|(u, _)| u.color).collect()
    }

    /// `X × Y`, pairing vertices of matching color.
    pub fn product(&self, other: &Facet) -> Result<Facet> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(Facet {
            vertices: self
                .vertices
                .iter()
                .zip(&other.vertices)
                .map(|(u, v)| Vertex::new(u.color, Obs::pair(u.obs.clone(), v.obs.clone())))
                .collect(),
        })
    }

    pub fn project_left(&self) -> Result<Facet> {
        let vertices = self.vertices.iter().map(Vertex::project_left).collect::<Result<_>>()?;
        Ok(Facet { vertices })
    }

    pub fn project_right(&self) -> Result<Facet> {
        let vertices = self.vertices.iter().map(Vertex::project_right).collect::<Result<_>>()?;
        Ok(Facet { vertices })
    }
}

impl fmt::Debug for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.vertices).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FacetId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl FacetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FacetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A pure chromatic complex of dimension `n`, determined by its facets.
///
/// Facets are kept in canonical (sorted, deduplicated) order; facet and
/// vertex ids index into that order.
#[derive(Clone)]
pub struct ChromaticComplex {
    n: usize,
    facets: Vec<Facet>,
    vertices: Vec<Vertex>,
    vertex_ids: HashMap<Vertex, VertexId>,
    facet_vertices: Vec<Box<[VertexId]>>,
    facet_ids: HashMap<Box<[VertexId]>, FacetId>,
    incidence: Vec<Vec<FacetId>>,
}

impl ChromaticComplex {
    pub fn new(n: usize, mut facets: Vec<Facet>) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        if n >= crate::agents::MAX_AGENTS {
            return Err(Error::AgentOutOfRange { agent: n, n: crate::agents::MAX_AGENTS - 1 });
        }
        for f in &facets {
            if f.vertices.len() != n + 1 {
                return Err(Error::FacetSize { n, found: f.vertices.len() });
            }
        }
        facets.sort();
        facets.dedup();

        let mut vertices: Vec<Vertex> = facets.iter().flat_map(|f| f.vertices.iter().cloned()).collect();
        vertices.sort();
        vertices.dedup();
        let vertex_ids: HashMap<Vertex, VertexId> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), VertexId(i as u32))).collect();

        let mut incidence = vec![Vec::new(); vertices.len()];
        let mut facet_vertices = Vec::with_capacity(facets.len());
        let mut facet_ids = HashMap::with_capacity(facets.len());
        for (i, f) in facets.iter().enumerate() {
            let ids: Box<[VertexId]> = f.vertices.iter().map(|v| vertex_ids[v]).collect();
            for v in ids.iter() {
                incidence[v.index()].push(FacetId(i as u32));
            }
            facet_ids.insert(ids.clone(), FacetId(i as u32));
            facet_vertices.push(ids);
        }

        Ok(ChromaticComplex { n, facets, vertices, vertex_ids, facet_vertices, facet_ids, incidence })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn agents(&self) -> AgentSet {
        AgentSet::full(self.n)
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn facet(&self, id: FacetId) -> &Facet {
        &self.facets[id.index()]
    }

    pub fn facet_ids(&self) -> impl Iterator<Item = FacetId> {
        (0..self.facets.len() as u32).map(FacetId)
    }

    pub fn find_facet(&self, facet: &Facet) -> Option<FacetId> {
        let ids: Option<Box<[VertexId]>> = facet.vertices.iter().map(|v| self.vertex_ids.get(v).copied()).collect();
        self.facet_by_vertices(&ids?)
    }

    pub fn facet_by_vertices(&self, ids: &[VertexId]) -> Option<FacetId> {
        self.facet_ids.get(ids).copied()
    }

    /// Vertex ids of a facet, indexed by color.
    pub fn facet_vertices(&self, id: FacetId) -> &[VertexId] {
        &self.facet_vertices[id.index()]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.index()]
    }

    pub fn vertex_id(&self, v: &Vertex) -> Option<VertexId> {
        self.vertex_ids.get(v).copied()
    }

    /// Facets containing the vertex.
    pub fn star(&self, id: VertexId) -> &[FacetId] {
        &self.incidence[id.index()]
    }

    pub fn shared_colors(&self, x: FacetId, y: FacetId) -> AgentSet {
        self.facet_vertices(x)
            .iter()
            .zip(self.facet_vertices(y))
            .enumerate()
            .filter(|(_, (u, v))| u == v)
            .map(|(a, _)| a)
            .collect()
    }

    /// `F(C × D) = {X × Y}`.
    pub fn cartesian_product(&self, other: &ChromaticComplex) -> Result<ChromaticComplex> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for x in &self.facets {
            for y in &other.facets {
                facets.push(x.product(y)?);
            }
        }
        ChromaticComplex::new(self.n, facets)
    }
}

impl PartialEq for ChromaticComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.facets == other.facets
    }
}

impl Eq for ChromaticComplex {}

impl fmt::Debug for ChromaticComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChromaticComplex").field("n", &self.n).field("facets", &self.facets).finish()
    }
}
