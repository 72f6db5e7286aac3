use thiserror::Error;

/// Errors shared by the whole library.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid grid/experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Fields or operators defined on incompatible grids.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// 1 + A is numerically singular; the spectral parameter sits on a
    /// threshold or an eigenvalue of the Birman-Schwinger family.
    #[error("threshold/eigenvalue hit: smallest singular value {smallest_sv:.3e} below tolerance {tol:.3e}")]
    Singular { smallest_sv: f64, tol: f64 },

    /// Problem size exceeds what the dense solvers are meant for.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A quadrature, fit or iteration failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Divergent norm or integral; the message names the divergent factor.
    #[error("divergent quantity: {0}")]
    Divergent(String),

    /// Operation not available for this potential kind.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
