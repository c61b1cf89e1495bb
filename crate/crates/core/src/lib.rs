//! Diagram calculus for 4- and 5-manifold handle diagrams.
//!
//! Diagrams are formal codes ([`ddc::Diagram`]): components carry cyclic
//! lists of event slots, and every slot is claimed by exactly one crossing,
//! piercing, band attachment, band core event or vertex.

mod args;
pub mod band;
pub mod ddc;
pub mod engine;
pub mod heegaard;
pub mod invariants;
pub mod kirby;

pub use ddc::{Diagram, Kind, SlotRef};
pub use heegaard::HeegaardDiagram;

/// Domain error: a parse failure or a rejected operation with its diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ddc::ParseError),
    /// A malformed move or directive line.
    #[error("syntax: {0}")]
    Syntax(String),
    #[error("{0}")]
    Rejected(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Rejected(msg.into()))
}
