//! Crate-wide error type.

use crate::lattice::{Antichain, VertexSet};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: u32, max: u32 },

    #[error("layer index {layer} out of range for dimension {n}")]
    LayerOutOfRange { n: u8, layer: u8 },

    #[error("vertex sequence is not a chain (must be strictly increasing under inclusion)")]
    NotAChain,

    #[error("chain is not a full chain of Q_{n}")]
    NotAFullChain { n: u8 },

    #[error("sequence contains repeated elements")]
    RepeatedElements,

    #[error("element {element} is not ranked by the ordering")]
    UnrankedElement { element: u32 },

    #[error("sequences are not over the same element set")]
    ElementSetMismatch,

    #[error("at least one linear ordering is required")]
    NoOrderings,

    #[error(
        "consistent triple not found: {n} elements, {orderings} orderings \
         (guarantee requires at least {required} elements)"
    )]
    TripleNotFound {
        n: usize,
        orderings: usize,
        required: u128,
    },

    #[error("vertex family is not a copy of a Boolean lattice: {reason}")]
    NotACubeCopy { reason: &'static str },

    #[error("ground/residual sets do not partition the ambient ground set")]
    MalformedPartition,

    #[error("{what} exceeds the size cap ({limit})")]
    SizeCapExceeded { what: &'static str, limit: u64 },

    #[error("coloring contains a blue antichain of size {}", antichain.len())]
    BlueAntichainPresent { antichain: Antichain },

    #[error(
        "pipeline precondition unmet: dimension {dim} < {required} required for {t} colors of chains"
    )]
    PipelinePreconditionUnmet { dim: u8, t: u32, required: u128 },

    #[error(
        "internal contradiction: blue chain branch produced vertex {vertex} \
         containing the triple's endpoints but not its middle; this indicates \
         an implementation bug, not a counterexample"
    )]
    InternalContradiction { vertex: VertexSet },

    #[error("internal consistency check failed: {0}")]
    InternalCheckFailed(&'static str),

    #[error("search node budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed coloring file: {0}")]
    MalformedColoring(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
