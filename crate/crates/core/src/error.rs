use num_complex::Complex64;
use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of the map at z = {0}")]
    PoleAt(Complex64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("degenerate matrix (determinant {0:e})")]
    Degenerate(f64),
    #[error("map is not loxodromic (trace {0})")]
    NotLoxodromic(Complex64),
    #[error("pole lies on the boundary of the disk")]
    PoleOnBoundary,
    #[error("pole lies inside the disk")]
    PoleInside,
    #[error("invalid disk: {0}")]
    InvalidDisk(String),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("inadmissible branch: symbol {symbol} applied to a point of its inverse disk")]
    InadmissibleBranch { symbol: String },
    #[error("point {0} lies outside every coding disk")]
    OutsideCoding(Complex64),
    #[error("inadmissible word: {0}")]
    InadmissibleWord(String),
    #[error("capacity exceeded: {requested} items requested, limit {limit}")]
    CapacityExceeded { requested: u64, limit: u64 },
    #[error("no sampled limit point lies in the ball")]
    EmptyBall,
    #[error("power iteration did not converge after {iterations} steps (residuals {residual_right:e}, {residual_left:e})")]
    NoConvergence {
        iterations: usize,
        residual_right: f64,
        residual_left: f64,
    },
    #[error("pressure does not change sign on [{lo}, {hi}] (P = {p_lo}, {p_hi})")]
    BracketFailure {
        lo: f64,
        hi: f64,
        p_lo: f64,
        p_hi: f64,
    },
    #[error("fewer than two admissible words of the requested length end at a common symbol")]
    InsufficientWords,
    #[error("time {t} exceeds the unfolding horizon {horizon}")]
    HorizonExceeded { t: f64, horizon: f64 },
    #[error("series diverges (term ratio {ratio})")]
    Divergence { ratio: f64 },
    #[error("not enough points for a decay fit: {0}")]
    InsufficientDecayWindow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the batch front-end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. }
            | Error::BracketFailure { .. }
            | Error::Divergence { .. }
            | Error::InsufficientDecayWindow(_) => 3,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
            _ => 2,
        }
    }
}
