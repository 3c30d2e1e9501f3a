use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One failed guard condition with a readable reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub condition: String,
    pub reason: String,
}

impl Failure {
    pub fn new(condition: impl Into<String>, reason: impl Into<String>) -> Self {
        Failure {
            condition: condition.into(),
            reason: reason.into(),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.condition, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum ObfError {
    #[error("invalid surface: {0}")]
    Surface(String),

    #[error("invalid curve: {0}")]
    Curve(String),

    #[error("invalid foliation: {0}")]
    Foliation(String),

    #[error("guard failed: {}", join(.0))]
    Guard(Vec<Failure>),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(fs: &[Failure]) -> String {
    fs.iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = ObfError> = std::result::Result<T, E>;
