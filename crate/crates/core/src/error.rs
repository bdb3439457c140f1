use thiserror::Error;

use crate::execution::Violation;
use crate::litmus::ParseError;
use crate::relation::EventId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("relations over different universes ({left} vs {right} events)")]
    UniverseMismatch { left: usize, right: usize },

    #[error("event {event} is outside a universe of {size} events")]
    OutOfUniverse { event: EventId, size: usize },

    #[error("event {0} does not exist in this execution")]
    UnknownEvent(EventId),

    #[error("event {0} is not a read")]
    NotARead(EventId),

    #[error("ill-formed execution: {}", summarize(.0))]
    IllFormed(Vec<Violation>),

    #[error("malformed execution document: {0}")]
    Document(String),

    #[error("events {x} and {y} access different addresses")]
    AddressMismatch { x: EventId, y: EventId },

    #[error("no totality case applies to {x} and {y}")]
    Unclassified { x: EventId, y: EventId },

    #[error("cycle does not lie in pol ∪ com⁺: {0}")]
    InvalidCycle(String),

    #[error("architecture `{name}` produced an invalid result: {reason}")]
    InvalidArchitecture { name: String, reason: String },

    #[error("unknown architecture `{0}`")]
    UnknownArchitecture(String),

    #[error("program has no processes")]
    EmptyProgram,

    #[error("program has {events} non-init events, above the cap of {cap}")]
    CapExceeded { events: usize, cap: usize },

    #[error("exhaustive bound {bound} exceeds the maximum of {max}")]
    BoundTooLarge { bound: usize, max: usize },

    #[error("invalid generator configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

fn summarize(violations: &[Violation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}
