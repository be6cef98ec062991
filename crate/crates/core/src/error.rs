use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("coordinate out of range: {0}")]
    Range(String),
    #[error(
        "circulant embedding not nonnegative definite: eigenvalue {value:.6e} at index {index} (largest eigenvalue {max:.6e})"
    )]
    Embedding { index: usize, value: f64, max: f64 },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("exponent fit: {0}")]
    Fit(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
