use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared letter `{symbol}` at line {line}")]
    UndeclaredLetter { symbol: String, line: usize },

    #[error("alphabet is not closed under inverses: {0}")]
    NotInverseClosed(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid subgraph: {0}")]
    InvalidSubgraph(String),

    #[error("element lies outside the enumerated ball of radius {radius}")]
    OutsideBall { radius: usize },

    #[error("oracle radius {have} is smaller than the required radius {need}")]
    RadiusTooSmall { have: usize, need: usize },

    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),

    #[error("gamma = {gamma} is too small: {reason}")]
    GammaTooSmall { gamma: usize, reason: String },

    #[error("coordinate overflow while {0}")]
    Overflow(&'static str),

    #[error("unknown growth method `{0}`")]
    UnknownMethod(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by malformed user input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UndeclaredLetter { .. }
                | Error::NotInverseClosed(_)
                | Error::InvalidPresentation(_)
                | Error::Json(_)
                | Error::InvalidSubgraph(_)
                | Error::GammaTooSmall { .. }
                | Error::UnknownMethod(_)
                | Error::Io(_)
        )
    }

    pub fn is_resource_error(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded(_) | Error::RadiusTooSmall { .. } | Error::Overflow(_)
        )
    }
}
