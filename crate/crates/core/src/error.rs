use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("loop not closed")]
    LoopNotClosed,
    #[error("no loops")]
    NoLoops,
    #[error("grid too coarse: samples {0} and {1} coincide after snapping")]
    GridTooCoarse(usize, usize),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("loop is not drawn in the graph: {0}")]
    NotInGraph(String),
    #[error("word is not a closed path at the origin")]
    NotClosedAtOrigin,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("marginal depth exhausted for generator {generator}: need {needed}, have {available}")]
    DepthExhausted { generator: usize, needed: usize, available: usize },
    #[error("word of length {len} exceeds the oracle bound {bound}; use word_moment")]
    WordTooLong { len: usize, bound: usize },
    #[error("invalid triplet: {0}")]
    InvalidTriplet(String),
    #[error("support wraps the circle (bt = {0} > 4)")]
    SupportWraps(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical inconsistency: {0}")]
    Numerical(String),
    #[error("premise d(1,h_s) <= K sqrt(s) fails at area {area} (d = {distance}, K sqrt(s) = {bound})")]
    PremiseViolated { area: f64, distance: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(token: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Parse { token: token.into(), reason: reason.into() }
}
