use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("finite sequence has {len} terms; term {index} requested")]
    IndexBeyondFinite { index: usize, len: usize },

    #[error("p-series exponent must be an integer >= 1, got {0}")]
    UnsupportedExponent(String),

    #[error("invalid sequence: {0}")]
    InvalidSpec(String),

    #[error("unsupported sequence kind: {0}")]
    UnsupportedKind(String),

    #[error("operation requires a sequence of positive terms")]
    NotPositive,

    #[error("sequence is not non-increasing at term {index}")]
    NotNonIncreasing { index: usize },

    #[error("tail diverges")]
    DivergentTail,

    #[error("sequence is summable; a divergent sequence is required")]
    NotDivergent,

    #[error("hull of an empty interval union")]
    EmptyUnion,

    #[error("component cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("term/tail comparison at n = {index} undecided after refinement")]
    IndeterminateComparison { index: usize },

    #[error("wrong sequence kind: {0}")]
    WrongKind(String),

    #[error("sequence is not in integer-digit form: {0}")]
    NotDigitForm(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("depth {depth} exceeds the limit of {limit}")]
    DepthLimit { depth: usize, limit: usize },

    #[error("gap lemma check failed at n = {index}: {detail}")]
    GapCheckFailed { index: usize, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
