use std::path::PathBuf;

use thiserror::Error;

/// Which side of the pop/push protocol a queue operation violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueueFault {
    /// Pop requested while the queue was not at capacity (a push was missed).
    PopWithoutPush,
    /// Push requested while the queue was already at capacity (a pop was missed).
    PushWithoutPop,
}

impl std::fmt::Display for QueueFault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QueueFault::PopWithoutPush => f.write_str("pop requested on a queue that is not full"),
            QueueFault::PushWithoutPop => f.write_str("push requested on a queue that is already full"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model config: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("malformed model document: {0}")]
    MalformedModel(#[from] serde_json::Error),

    #[error("queue for layer {layer}: {fault}")]
    Queue { layer: usize, fault: QueueFault },

    #[error("{path}:{line}: {reason}")]
    MalformedSamples {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("no benchmark records to write")]
    EmptyRecords,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
