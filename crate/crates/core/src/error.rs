use thiserror::Error;

use crate::network::NodeId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("duplicate node id {0}")]
    DuplicateNodeId(NodeId),
    #[error("node ids must be dense from 0; got {0}")]
    NonDenseIds(NodeId),
    #[error("nodes {0} and {1} share coordinates")]
    DuplicatePosition(NodeId, NodeId),
    #[error("node {0} has no channels")]
    EmptyChannels(NodeId),
    #[error("node {0} has a non-finite coordinate")]
    BadCoordinate(NodeId),
    #[error("node {node} uses channel {channel}, outside the declared channel count")]
    UnknownChannel { node: NodeId, channel: u8 },
    #[error("channel count {0} exceeds the 32-channel capacity")]
    TooManyChannels(usize),
    #[error("range must be positive and finite, got {0}")]
    InvalidRange(f64),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("link from node {0} to itself")]
    SelfLink(NodeId),
    #[error("link ({0}, {1}) listed twice")]
    DuplicateLink(NodeId, NodeId),
    #[error("nodes {0} and {1} share no channel")]
    NoCommonChannel(NodeId, NodeId),
    #[error("a topology needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("cannot pick {per_node} channels per node out of {total}")]
    BadChannelsPerNode { per_node: u8, total: u8 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Network(#[from] NetError),
}

impl ParseError {
    pub(crate) fn at(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error("source and destination are the same node ({0})")]
    SameEndpoints(NodeId),
    #[error("node {0} is not in the network")]
    UnknownNode(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path does not start at the source and end at the destination")]
    WrongEndpoints,
    #[error("path is not alternating at position {0}")]
    NotAlternating(usize),
    #[error("no edge between sub-nodes {0} and {1}")]
    MissingEdge(usize, usize),
    #[error("path revisits sub-node {0}")]
    NotSimple(usize),
    #[error("destination was not reached")]
    Unreached,
    #[error("walk violates the channel discontinuity constraint at hop {0}")]
    NotCdc(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpannerError {
    #[error("sector count must be at least 7, got {0}")]
    TooFewSectors(usize),
    #[error("apex and point coincide")]
    CoincidentPoints,
    #[error("a single-link path needs no replacement")]
    SingleLink,
    #[error("input path is not a valid CDC path: {0}")]
    InvalidPath(#[from] PathError),
    #[error("replacement walk got stuck at node {0}")]
    Stuck(NodeId),
    #[error("no length-preserving repair for the overlap at node {0}")]
    Unrepairable(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance of size {size} exceeds the brute-force budget of {limit}")]
    BudgetExceeded { size: usize, limit: usize },
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Network(#[from] NetError),
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error("writing results: {0}")]
    Io(#[from] std::io::Error),
}
