use thiserror::Error;

/// Errors raised by the numeric and catalog layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),

    #[error("precision budget exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("argument lies on the branch cut of Li_{k}: {detail}")]
    OnBranchCut { k: u32, detail: String },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("divergent word: leading letter equals the endpoint")]
    DivergentWord,

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("word does not have the required shape: {0}")]
    ShapeError(String),

    #[error("evaluation point is outside every supported convergence region: {0}")]
    OutsideConvergence(String),

    #[error("series does not converge: {0}")]
    DivergentSpec(String),

    #[error("angle {angle} is outside the open interval {interval}")]
    AngleOutOfRange { angle: String, interval: String },

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergent(String),

    #[error("integrand is singular on the path: {0}")]
    SingularOnPath(String),

    #[error("schema error in record `{record}` at `{path}`: {message}")]
    SchemaError {
        record: String,
        path: String,
        message: String,
    },

    #[error("precision too low for relation detection: {0}")]
    PrecisionTooLow(String),

    #[error("no integer relation found: {0}")]
    NoRelationFound(String),

    #[error("invalid relation problem: {0}")]
    InvalidProblem(String),

    #[error("invalid precision context: {0}")]
    InvalidContext(String),

    #[error("letter outside the exact letter table: {0}")]
    RegistryError(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn schema(
        record: impl Into<String>,
        path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::SchemaError {
            record: record.into(),
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
