use thiserror::Error;

use crate::agents::Agent;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a complex needs at least one facet")]
    EmptyComplex,
    #[error("facet has {found} vertices, expected {expected} for dimension {n}", expected = .n + 1)]
    FacetSize { n: usize, found: usize },
    #[error("facet repeats color {0}")]
    DuplicateColor(Agent),
    #[error("color {color} is outside 0..={n}")]
    ColorOutOfRange { color: Agent, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("facet is not a product facet")]
    NotProduct,
    #[error("facet does not belong to the complex")]
    UnknownFacet,
    #[error("vertex of color {color} has no integer input at the designated component")]
    InputDesignation { color: Agent },
    #[error("input value set is empty")]
    EmptyInputs,
    #[error("agent {agent} is outside 0..={n}")]
    AgentOutOfRange { agent: Agent, n: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("product update is empty: no precondition holds anywhere")]
    EmptyProduct,
    #[error("facet carries no views")]
    NoViews,
    #[error("facet carries no decision values")]
    NoDecisions,
    #[error("agreement bound {k} out of range 1..={max}")]
    AgreementBound { k: usize, max: usize },
    #[error("survivor set list is empty")]
    NoSurvivorSets,
    #[error("survivor set is empty")]
    EmptySurvivorSet,
    #[error("no nontrivial k: minimum core size is {csize}, the obstruction needs at least 2")]
    NoNontrivialK { csize: usize },
    #[error("formula is not positive: {0}")]
    NonPositive(String),
    #[error("not a morphism: {0}")]
    NotMorphism(String),
    #[error("invalid model spec: {0}")]
    Spec(String),
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
