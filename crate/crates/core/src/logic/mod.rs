//! Epistemic formulas and their semantics over simplicial models.

mod eval;
mod formula;
mod model;
mod parse;
pub mod random;

pub use eval::{reachable_common, related_distributed, related_to, satisfies, valid, Evaluator, Verdict};
pub use formula::{Atom, Formula, FormulaFactory, FormulaKind};
pub use model::{InputPath, Side, SimplicialModel};
pub use parse::parse_formula;
