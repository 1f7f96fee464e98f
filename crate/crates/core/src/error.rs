use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {vertex} out of range for graph of order {order}")]
    InvalidVertex { vertex: VertexId, order: usize },

    /// The conditional average at `vertex` is taken over a neighborhood of
    /// zero probability mass.
    #[error("conditional average undefined at vertex {vertex}: zero-mass neighborhood")]
    UndefinedConditional { vertex: VertexId },

    /// A combinatorial search ran out of its node budget. `witness` is the
    /// best solution found so far and `lower_bound` its size.
    #[error("search budget of {budget} nodes exhausted (best lower bound {lower_bound})")]
    BudgetExhausted {
        budget: u64,
        lower_bound: usize,
        witness: Vec<VertexId>,
    },

    /// An enumeration guard refused to materialize an exponentially large object.
    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("not realizable: {0}")]
    NotRealizable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("trial m={m} index={trial} seed={seed}: {source}")]
    Trial {
        m: usize,
        trial: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures caused by a search or enumeration limit rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        match self {
            Error::BudgetExhausted { .. } | Error::GuardExceeded(_) => true,
            Error::Trial { source, .. } => source.is_resource_limit(),
            _ => false,
        }
    }
}
