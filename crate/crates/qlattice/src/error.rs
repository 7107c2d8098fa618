use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("no convergence within {terms} terms: {context}")]
    NonConvergence { terms: usize, context: String },
    #[error("scan exhausted: found {found} of {requested} zeros within {steps} scan steps")]
    ScanExhausted {
        found: usize,
        requested: usize,
        steps: usize,
    },
    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("function not normalized: norm = {0}")]
    NotNormalized(f64),
    #[error("input error: {0}")]
    Input(String),
}

impl QError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            QError::NonConvergence { .. } | QError::ScanExhausted { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn non_convergence(terms: usize, context: impl Into<String>) -> Self {
        QError::NonConvergence {
            terms,
            context: context.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, QError>;
