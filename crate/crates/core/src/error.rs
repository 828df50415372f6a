use thiserror::Error;

/// Errors produced while building or querying structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input contains no points")]
    EmptyInput,
    #[error("point {index} has a non-positive weight")]
    NonPositiveWeight { index: usize },
    #[error("point {index} has a coordinate outside [-2^31, 2^31]")]
    CoordinateOutOfRange { index: usize },
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("query kind not supported by this operation")]
    WrongQueryKind,
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("malformed class hierarchy: {0}")]
    BadHierarchy(String),
    #[error("input is degenerate: all points are coplanar or fewer than four points")]
    DegenerateInput,
    #[error("line {index} duplicates an earlier line")]
    DuplicateLine { index: usize },
    #[error("instance size {n} too small")]
    TooSmall { n: usize },
    #[error("conflict cap must be at least 1")]
    CapTooSmall,
    #[error("unknown color {0}")]
    UnknownColor(u32),
    #[error("query range holds {k} colors, expected exactly one")]
    NotSingleColor { k: usize },
    #[error("tester mode incompatible with range family")]
    IncompatibleTester,
    #[error("points are not sorted along the split axis")]
    Unsorted,
    #[error("tau must be at least 1")]
    BadTau,
    #[error("histogram part is not sorted by color")]
    UnsortedPart,
    #[error("estimator thresholds must satisfy 0 < T_yes <= T_no and degree >= 2")]
    BadThresholds,
    #[error("capped structure returned NULL although the estimator answered yes")]
    CappedReturnedNullOnYes,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("I/O error: {0}")]
    Io(String),
    #[error("bad generator spec: {0}")]
    BadSpec(String),
    #[error("bad experiment config: {0}")]
    BadConfig(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
