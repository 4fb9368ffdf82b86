use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace is not contained in the ambient subspace")]
    NotASubspace,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("invalid catalog parameters: {0}")]
    InvalidParams(String),
    #[error("algebra mismatch")]
    AlgebraMismatch,
    #[error("grading required: {0}")]
    MissingGrading(String),
    #[error("graded operations are undefined in characteristic 2")]
    CharacteristicTwo,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("module has no {0} action")]
    MissingSide(&'static str),
    #[error("not a derivation: {0}")]
    NotADerivation(String),
    #[error("not a differential operator: {0}")]
    NotADifferentialOperator(String),
    #[error("degree {degree} exceeds the configured cap {cap}")]
    CapExceeded { degree: usize, cap: usize },
    #[error("not an algebra homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
