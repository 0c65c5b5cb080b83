use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("singular curve: discriminant vanishes")]
    SingularCurve,

    /// A value is zero at its known precision where a nonzero value was required.
    #[error("norm indeterminate: {0}")]
    Precision(String),

    /// A search or enumeration hit its configured cap.
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    /// The answer cannot be certified at the achievable precision.
    #[error("inconclusive at precision: {0}")]
    Inconclusive(String),

    /// An internal cross-check failed; indicates a bug or inconsistent input.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn at(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Attach a stage name to the error of a fallible computation.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at(stage))
    }
}
