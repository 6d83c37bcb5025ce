use num_bigint::BigUint;
use thiserror::Error;

use crate::covering::CoverError;
use crate::graph::{GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("level {level} would need {size} vertices, over the budget of {budget}")]
    BudgetExceeded { level: usize, size: BigUint, budget: usize },
    #[error("provider `{provider}` has no level {level} (depth {depth})")]
    ProviderDepthExceeded { provider: String, level: usize, depth: usize },
    #[error("level {0} is beyond arithmetic reach")]
    LevelOutOfReach(BigUint),
    #[error("anchors are incoherent at level {level}: {detail}")]
    AnchorIncoherent { level: usize, detail: String },
    #[error("input covering is not chain transitive: level {0} is not irreducible")]
    NotChainTransitive(usize),
    #[error("input covering is invalid: {0}")]
    InvalidCovering(String),
    #[error("unknown vertex `{vertex}` at level {level}")]
    UnknownVertex { level: usize, vertex: VertexId },
    #[error("index {index} is outside [0, {len}] at level {level}")]
    IndexOutOfRange { level: usize, index: BigUint, len: BigUint },
    #[error("cannot decode level {from} to level {to}")]
    LevelMismatch { from: usize, to: usize },
    #[error("prefix of depth {depth} cannot advance {steps} steps")]
    InsufficientDepth { depth: usize, steps: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// Size and depth limits, as opposed to malformed input or bad arguments.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::ProviderDepthExceeded { .. } | Error::LevelOutOfReach(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
