use num_bigint::BigInt;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("unsupported dimension {dim} (supported up to {max})")]
    UnsupportedDimension { dim: usize, max: usize },
    #[error("diagram check failed at {position}: {detail}")]
    Diagram { position: String, detail: String },
    #[error("invalid simplicial map: image of face {face:?} is not a face of the target")]
    InvalidSimplicialMap { face: Vec<String> },
    #[error("cover member {0} is empty")]
    EmptyCoverMember(usize),
    #[error("not a subset: {0}")]
    NotSubset(String),
    #[error("depth {requested} exceeds available data ({available})")]
    Depth { requested: usize, available: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("precision mismatch: {0} vs {1}")]
    Precision(usize, usize),
    #[error("{value} has a prime factor above the factorization bound {bound}")]
    FactorBound { value: BigInt, bound: u64 },
    #[error("rank-deficient input")]
    RankDeficient,
    #[error("undecidable at precision: {0}")]
    Undecidable(String),
    #[error("level {level} is not exact: {detail}")]
    LevelInexact { level: usize, detail: String },
    #[error("parse error in {file} at {path}: {message}")]
    Parse {
        file: String,
        path: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
