use thiserror::Error;

use crate::temporal::{Time, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid temporal graph: {0}")]
    InvalidGraph(String),

    #[error("time-step {t} outside lifetime 1..={tau}")]
    TimeOutOfRange { t: Time, tau: Time },

    #[error("partition is not a temporal twin partition: {u} and {v} differ at t={t}")]
    InvalidPartition { u: Vertex, v: Vertex, t: Time },

    #[error("invalid circulation graph: {0}")]
    InvalidCirculation(String),

    #[error("flow does not match the reconfiguring circulation: {0}")]
    FlowMismatch(String),

    #[error("cost overflow in circulation")]
    CostOverflow,

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("solver produced an invalid sequence: {0}")]
    Unverified(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
