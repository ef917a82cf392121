use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size for {what}: {value}")]
    InvalidSize { what: &'static str, value: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("edge set is not a forest: {0}")]
    InvalidForest(String),

    #[error("linking edge {edge} would close a cycle")]
    Cycle { edge: EdgeId },

    #[error("edge {edge} is not in the forest")]
    NotPresent { edge: EdgeId },

    #[error("vertices {u} and {v} are in different components")]
    NotConnected { u: VertexId, v: VertexId },

    #[error("induced subgraph on {size} vertices is disconnected; no spanning tree exists")]
    NoSpanningTree { size: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("could not build a balanced initial state after {attempts} attempts")]
    InitializationFailure { attempts: usize },

    #[error("no balanced split of merged region ({a}, {b}) after {resamples} tree resamples")]
    StepFailure {
        a: usize,
        b: usize,
        resamples: usize,
    },

    #[error("instance has {n} vertices, above the enumeration guard of {limit}")]
    SizeGuard { n: usize, limit: usize },

    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),

    #[error("no balanced sample in {tries} tries (acceptance rate < {upper_bound:.3e} at 95%)")]
    BudgetExhausted { tries: usize, upper_bound: f64 },

    #[error("sample {sample}: {source}")]
    Sample {
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Strips sample context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Sample { source, .. } => source.root(),
            other => other,
        }
    }
}
