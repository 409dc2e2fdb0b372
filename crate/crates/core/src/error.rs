use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("duplicate name `{0}`")]
    Duplicate(String),

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("relation is not homogeneous: {0}")]
    InhomogeneousRelation(String),

    #[error("ideal is not admissible: {0}")]
    NonAdmissible(String),

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("malformed relator: {0}")]
    MalformedRelator(String),

    #[error("subspace is not a submodule: {0}")]
    NotASubmodule(String),

    #[error("algebra is not a monomial relation algebra")]
    NotMonomial,

    #[error("path {0} lies in the ideal of relations")]
    PathInIdeal(String),

    #[error("arrows of finite projective dimension: {0:?}")]
    FinitePdimArrow(Vec<String>),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{0}")]
    Invalid(String),
}
