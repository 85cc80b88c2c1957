use thiserror::Error;

use crate::volume::VolumeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("time {time} lies outside the stream window [{alpha}, {omega}]")]
    OutOfWindow { time: String, alpha: String, omega: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node index {0} is out of range")]
    NodeIndex(usize),

    #[error("link {0}{0} joins a node to itself")]
    SelfLoop(String),

    #[error("invalid interval [{start}, {end}]")]
    InvalidInterval { start: String, end: String },

    #[error("window start {alpha} is after window end {omega}")]
    InvalidWindow { alpha: String, omega: String },

    #[error("source time {from} is after destination time {to}")]
    TimeOrder { from: String, to: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Volume(#[from] VolumeError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
