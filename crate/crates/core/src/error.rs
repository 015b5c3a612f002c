//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={arity}")]
    IndexOutOfRange { index: u8, arity: u8 },

    #[error("index {index} is the excluded component")]
    ExcludedIndex { index: u8 },

    #[error("index {index} repeats in sequence")]
    RepeatedIndex { index: u8 },

    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(u8),

    #[error("context mismatch: (n={0}, i={1}) vs (n={2}, i={3})")]
    ContextMismatch(u8, u8, u8, u8),

    #[error("substitution polynomial has nonzero constant term")]
    SubstitutionNotReduced,

    #[error("polynomial is not a unit in the ring")]
    NotAUnit,

    #[error("coefficient overflow")]
    CoefficientOverflow,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("component {component} out of range 1..={arity}")]
    ComponentOutOfRange { component: u8, arity: u8 },

    #[error("component {component}: singularity word uses its own meridian x{gen}")]
    WordUsesOwnMeridian { component: u8, gen: u8 },

    #[error("basing word uses x{gen}, the meridian excluded on component {component}")]
    BasingWordUsesExcluded { component: u8, gen: u8 },

    #[error("singularity sign must be +1 or -1, got {0}")]
    InvalidSign(i8),

    #[error("classical Kirk invariant requires a 2-component link map, got {0}")]
    NotTwoComponents(u8),

    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("Milnor sweep did not stabilize after {sweeps} sweeps: \
             the reduced group of the input is not free on its meridians")]
    NonStabilizing { sweeps: usize },

    #[error("Wirtinger relation violated after stabilization: \
             the reduced group of the input is not free on its meridians")]
    InconsistentDiagram,

    #[error("unknown arc id `{0}`")]
    UnknownArc(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("loop crosses arc `{arc}` of the deleted component {component}")]
    LoopTouchesDeleted { arc: String, component: u8 },
}

pub type Result<T> = std::result::Result<T, Error>;
