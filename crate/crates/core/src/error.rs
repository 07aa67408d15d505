use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system type {series}{rank}")]
    InvalidType { series: String, rank: usize },
    #[error("unsupported root system type {0} (only simply-laced types are built)")]
    Unsupported(String),
    #[error("mismatched algebras: {0}")]
    Mismatch(String),
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("generator {0} lies outside the subalgebra")]
    OutsideSubalgebra(String),
    #[error("expected a non-constant element")]
    ConstantElement,
    #[error("expected a nonzero element")]
    ZeroElement,
    #[error("expected a homogeneous element")]
    NotHomogeneous,
    #[error("result leaves the truncation box: {0}")]
    Overflow(String),
    #[error("degenerate degree-0 pairing")]
    DegenerateTop,
    #[error("certificate falsified: {0}")]
    Falsified(String),
    #[error("missing P-matrix entry P[{mu:?}, {lambda:?}]")]
    DataGap { mu: Vec<i64>, lambda: Vec<i64> },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
