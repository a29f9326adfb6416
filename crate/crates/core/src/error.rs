use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bandit instance: {0}")]
    InvalidInstance(String),

    #[error("invalid prior specification: {0}")]
    InvalidPrior(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("round index must be at least 1")]
    ZeroRound,

    #[error("index inputs have no observations and no prior samples (unbounded index)")]
    UnboundedIndex,

    #[error("bisection did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("arm gap is zero or negative (mu_star = {mu_star}, mu_k = {mu_k})")]
    UndefinedGap { mu_star: f64, mu_k: f64 },

    #[error("instance has {0} optimal arms; a unique optimal arm is required")]
    MultipleOptimalArms(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown policy id `{0}`")]
    UnknownPolicy(String),

    #[error("unknown preset `{0}` (expected sim1, sim2 or sim3)")]
    UnknownPreset(String),

    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}:{line}: {message}")]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
