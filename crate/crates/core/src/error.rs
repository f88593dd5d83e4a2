use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("subgroup is not normal: {witness}")]
    NotNormal { witness: String },

    #[error("group is not perfect: |[G,G]| = {derived} < |G| = {order}")]
    NotPerfect { order: String, derived: String },

    #[error("projection onto coordinate {coordinate} is not surjective")]
    NotSubdirect { coordinate: usize },

    #[error("index {index} out of range for {len} coordinates")]
    SubsetOutOfRange { index: usize, len: usize },

    #[error("subsets over different ground sets ({0} vs {1})")]
    GroundSetMismatch(usize, usize),

    #[error("{images} images given for {generators} generators")]
    GeneratorCountMismatch { generators: usize, images: usize },

    #[error("unknown structural predicate `{0}`")]
    UnknownPredicate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("chain cache: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
