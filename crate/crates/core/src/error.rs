use thiserror::Error;

/// Errors produced by the tube, planning, simulation and scenario layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid tube: {0}")]
    InvalidTube(String),

    #[error("empty swarm")]
    EmptySwarm,

    #[error("need at least two robots, got {0}")]
    TooFewRobots(usize),

    #[error("degenerate direction: vector norm {0:e} is below 1e-12")]
    DegenerateDirection(f64),

    #[error("infeasible planning problem: {}", .0.join("; "))]
    Infeasible(Vec<String>),

    #[error("invalid config at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::InvalidTube(_) => "invalid_tube",
            Error::EmptySwarm => "empty_swarm",
            Error::TooFewRobots(_) => "too_few_robots",
            Error::DegenerateDirection(_) => "degenerate_direction",
            Error::Infeasible(_) => "infeasible",
            Error::Config { .. } => "config",
            Error::UnknownScenario(_) => "unknown_scenario",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
