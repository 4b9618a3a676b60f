//! Crate-wide error type.

use crate::centrality::CentralityScores;
use crate::graph::NodeId;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// The edge-list text was malformed.
    #[error("edge list line {line}: {message}")]
    EdgeListParse {
        /// 1-based line number in the input text.
        line: usize,
        /// What was wrong with the line.
        message: String,
    },

    /// Self-loop edges are rejected everywhere.
    #[error("self-loop edge on node {0}")]
    SelfLoop(NodeId),

    /// An operation referenced a node the graph does not contain.
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),

    /// The graph is too small for the requested metric.
    #[error("operation needs at least {required} nodes, graph has {actual}")]
    TooFewNodes {
        /// Minimum node count the operation requires.
        required: usize,
        /// Node count the graph actually has.
        actual: usize,
    },

    /// The operation requires a connected graph.
    #[error("graph is not connected")]
    NotConnected,

    /// Power iteration ran out of iterations before meeting the tolerance.
    /// The last iterate is carried so callers can inspect how far it got.
    #[error("power iteration did not converge within {iterations} iterations")]
    NoConvergence {
        /// Number of iterations performed.
        iterations: usize,
        /// The (normalized) iterate at the point the limit was hit.
        last: CentralityScores,
    },

    /// No connected topology was found within the retry budget.
    #[error("no connected topology after {attempts} attempts; raise the target mean degree")]
    GenerationInfeasible {
        /// Number of placements tried.
        attempts: usize,
    },

    /// A configuration value was rejected.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Rank truncation asked for more nodes than were scored.
    #[error("rank truncation k={k} exceeds the {available} scored nodes")]
    RankTooLarge {
        /// Requested prefix length.
        k: usize,
        /// Number of scored nodes available.
        available: usize,
    },

    /// A two-hop view is missing the closeness value for a member, so an
    /// election over it would not be reproducible by that member.
    #[error("no closeness value for node {0} in the two-hop view")]
    MissingCloseness(NodeId),

    /// A slot position lies outside its frame.
    #[error("slot position {position} outside frame of size {frame_size}")]
    SlotPositionOutOfRange {
        /// 1-based position within the frame.
        position: u32,
        /// Frame size the position was checked against.
        frame_size: u32,
    },

    /// Two transmitters within two hops of each other won the same slot.
    /// This should be impossible; hitting it aborts the simulation.
    #[error("two-hop conflict in slot {slot}: {count} violating pair(s)")]
    ConflictViolation {
        /// Slot in which the violation was detected.
        slot: u64,
        /// Number of conflicting winner pairs in that slot.
        count: usize,
    },

    /// A message buffer ended before the advertised content.
    #[error("message truncated: need {needed} bytes, have {got}")]
    Truncated {
        /// Bytes required to finish decoding.
        needed: usize,
        /// Bytes actually available.
        got: usize,
    },

    /// A link entry advertised a size the codec does not produce.
    #[error("link entry {index}: inconsistent size {got} (expected {expected})")]
    InconsistentLinkSize {
        /// 0-based index of the offending link entry.
        index: usize,
        /// Size the codec expects.
        expected: u16,
        /// Size found on the wire.
        got: u16,
    },

    /// A real-valued field was outside its legal range.
    #[error("{what} out of range: {value}")]
    ValueOutOfRange {
        /// Which field was rejected.
        what: &'static str,
        /// The offending value.
        value: f64,
    },
}
