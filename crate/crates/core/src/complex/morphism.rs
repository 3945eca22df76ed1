//! Vertex maps between simplicial models and the morphism check.

use std::fmt;

use super::{FacetId, VertexId};
use crate::logic::SimplicialModel;

/// A total map from the vertices of one complex to those of another,
/// indexed by source vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    images: Vec<VertexId>,
}

impl VertexMap {
    pub fn new(images: Vec<VertexId>) -> Self {
        VertexMap { images }
    }

    pub fn identity(vertex_count: usize) -> Self {
        VertexMap { images: (0..vertex_count as u32).map(VertexId).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn get(&self, v: VertexId) -> VertexId {
        self.images[v.index()]
    }

    pub fn images(&self) -> &[VertexId] {
        &self.images
    }

    pub fn set(&mut self, v: VertexId, image: VertexId) {
        self.images[v.index()] = image;
    }

    /// `δ(X)` as a facet of the target, if the image is a facet.
    pub fn image_facet(&self, source: &SimplicialModel, target: &SimplicialModel, x: FacetId) -> Option<FacetId> {
        let ids: Vec<VertexId> = source.complex().facet_vertices(x).iter().map(|&v| self.get(v)).collect();
        target.complex().facet_by_vertices(&ids)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    NotTotal { expected: usize, found: usize },
    TargetOutOfRange { vertex: VertexId },
    ColorChanged { vertex: VertexId },
    NotAFacet { facet: FacetId },
    LabelingChanged { facet: FacetId },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::NotTotal { expected, found } => {
                write!(f, "map covers {found} vertices, source has {expected}")
            }
            MorphismViolation::TargetOutOfRange { vertex } => {
                write!(f, "vertex {} maps outside the target", vertex.0)
            }
            MorphismViolation::ColorChanged { vertex } => write!(f, "vertex {} changes color", vertex.0),
            MorphismViolation::NotAFacet { facet } => write!(f, "facet {facet} does not map to a facet"),
            MorphismViolation::LabelingChanged { facet } => write!(f, "facet {facet} changes its labeling"),
        }
    }
}

/// Checks that `delta` is a color-preserving simplicial map sending every
/// facet of `source` to a facet of `target` with the same labeling.
pub fn check_morphism(
    delta: &VertexMap,
    source: &SimplicialModel,
    target: &SimplicialModel,
) -> Result<(), MorphismViolation> {
    let sc = source.complex();
    let tc = target.complex();
    if delta.len() != sc.vertices().len() {
        return Err(MorphismViolation::NotTotal { expected: sc.vertices().len(), found: delta.len() });
    }
    for (i, v) in sc.vertices().iter().enumerate() {
        let image = delta.images[i];
        if image.index() >= tc.vertices().len() {
            return Err(MorphismViolation::TargetOutOfRange { vertex: VertexId(i as u32) });
        }
        if tc.vertex(image).color != v.color {
            return Err(MorphismViolation::ColorChanged { vertex: VertexId(i as u32) });
        }
    }
    for x in sc.facet_ids() {
        let y = delta.image_facet(source, target, x).ok_or(MorphismViolation::NotAFacet { facet: x })?;
        if source.inputs(x) != target.inputs(y) {
            return Err(MorphismViolation::LabelingChanged { facet: x });
        }
    }
    Ok(())
}
