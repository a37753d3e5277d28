use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("determinant {det} deviates from 1 beyond tolerance")]
    Determinant { det: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite integrand value {value} at node {node} (x = {x})")]
    NonFiniteSample { node: usize, x: f64, value: f64 },

    #[error("root solver did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("matrix product overflowed after {step} steps; lower renorm_every")]
    Overflow { step: usize },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("word file: {0}")]
    WordFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
