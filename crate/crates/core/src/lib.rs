//! Model checking of simplicial Kripke models and logical obstructions
//! to distributed task solvability.
//!
//! Protocols and tasks are product updates of an initial model by
//! action models. A positive formula valid in the task model but
//! falsified in the protocol model certifies that the protocol cannot
//! solve the task; [`solvability`] decides the same question on small
//! instances by exhaustive morphism search.

pub mod adversary;
pub mod agents;
pub mod cli;
pub mod complex;
pub mod error;
pub mod logic;
pub mod obstruction;
pub mod solvability;
pub mod tasks;

pub use error::{Error, Result};
