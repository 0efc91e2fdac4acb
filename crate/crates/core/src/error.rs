use thiserror::Error;

/// Errors raised by the operator algebra, geometry, and reduction layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("{what} has a zero entry at site {site}")]
    ZeroEntry { what: &'static str, site: usize },

    #[error("operator is not properly bounded (zero entry in an extreme coefficient)")]
    NotProperlyBounded,

    #[error("operator has unbounded support; a finite-support operator is required")]
    InfiniteSupport,

    #[error("truncation depth must be nonnegative, got {0}")]
    NegativeDepth(i64),

    #[error("degenerate polygon: d_{site} = 0")]
    DegeneratePolygon { site: usize },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("singular frame at site {site}")]
    SingularFrame { site: usize },

    #[error("gauge sequences have different monodromies")]
    MonodromyMismatch,

    #[error("coordinate index out of range: power {power}, site {site}")]
    IndexOutOfRange { power: i64, site: i64 },

    #[error("section requires gcd(m, N) = 1, got m = {m}, n = {n}")]
    CoprimalityObstruction { m: usize, n: usize },

    #[error("operator lies outside the real section: no real {root}-th root of {value}")]
    RootObstruction { root: u32, value: String },

    #[error("cross-ratio chart degenerates at site {site}: {reason}")]
    ChartDegenerate { site: usize, reason: &'static str },

    #[error("coincident points in cross-ratio denominator")]
    CoincidentPoints,

    #[error("gauge matrix at site {site} does not fix e1")]
    GaugeNotInH { site: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
