use alloc::string::String;
use alloc::vec::Vec;

use crate::graph_model::NodeId;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("singular principal block on index subset {subset:?}")]
    Singular { subset: Vec<usize> },

    #[error("node {0} is not part of the graph")]
    UnknownNode(NodeId),

    #[error("node {0} is both conditioned on and marginalised over")]
    OverlappingSpec(NodeId),

    #[error("edge placement: {0}")]
    Placement(String),

    #[error("arrows within u admit no topological order")]
    Cyclic,

    #[error("graph has semi-directed cycles and is not a regression graph")]
    NotRegressionGraph,

    #[error("graph has double edges ({0:?}); use audit_edge instead")]
    DoubleEdges(Vec<(NodeId, NodeId)>),

    #[error("edge {0} <- {1} is not in the parent graph")]
    EdgeAbsent(NodeId, NodeId),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
