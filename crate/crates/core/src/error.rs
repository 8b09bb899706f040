use thiserror::Error;

use crate::gf::GfError;
use crate::netgraph::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("invalid network: {0}")]
    InvalidNetwork(ValidationReport),
    #[error("network contains a cycle")]
    CycleDetected,
    #[error("node {0} is not reachable from the source")]
    Unreachable(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown destination {0}")]
    UnknownDestination(String),
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("node {0} does not apply coding coefficients")]
    NotCodingNode(String),
    #[error("node {0} is not a Variant-I node")]
    NotVariant1(String),
    #[error("network is not layered: {0}")]
    NotLayered(String),
    #[error("missing coding coefficient at node {node} for in-edge {in_edge}")]
    MissingCoefficient { node: String, in_edge: String },
    #[error("field order {q} must exceed the number of destinations {k}")]
    FieldTooSmall { q: u32, k: usize },
    #[error("expected {expected} source symbols, got {got}")]
    SymbolCount { expected: usize, got: usize },
    #[error("no full-rank precoder found after {0} attempts")]
    PrecoderSearchFailed(usize),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
