use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema mismatch: expected {expected} features, got {found}")]
    FeatureArity { expected: usize, found: usize },

    #[error("schema mismatch: expected {expected} targets, got {found}")]
    TargetArity { expected: usize, found: usize },

    #[error("class {class} of target {target} was not declared (declared classes: 0..{declared})")]
    UndeclaredClass {
        target: usize,
        class: usize,
        declared: usize,
    },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("{what}: value {value} is outside the accepted domain")]
    Domain { what: &'static str, value: f64 },

    #[error("row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
