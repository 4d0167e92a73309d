use std::path::PathBuf;

use thiserror::Error;

use crate::model::WaveState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {n} along {axis} must be a power of two >= {min}")]
    GridSize { axis: char, n: usize, min: usize },
    #[error("grid scale L_{axis} = {value} must be positive and finite")]
    GridScale { axis: char, value: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("unsupported norm request: {0}")]
    UnsupportedNorm(String),
    #[error("invalid model parameters: {0}")]
    Model(String),
    #[error("invalid evolution config: {0}")]
    Evolve(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("profile equation has a pole: eps*V reaches {max_eps_v} >= c at x = {x}")]
    ProfilePole { max_eps_v: f64, x: f64 },
    #[error("solitary wave construction failed for c = {c}: residual {residual:e} after {iterations} iterations")]
    Construction {
        c: f64,
        residual: f64,
        iterations: usize,
    },
    #[error("fit unavailable: {usable} usable modes, at least {required} required")]
    FitUnavailable { usable: usize, required: usize },
    #[error("non-finite value in stage {stage} of step {step}")]
    IntegrationFault {
        step: usize,
        stage: usize,
        last_good: Box<WaveState>,
    },
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("bad file format: {0}")]
    Format(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
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
