use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("walk count overflow at order {order}; use a smaller order")]
    Overflow { order: usize },

    #[error(
        "graph has {n} nodes, above the dense eigensolver cap of {cap}; \
         use moments_by_walks instead"
    )]
    SizeLimit { n: usize, cap: usize },

    #[error(
        "power iteration did not converge within {iterations} iterations \
         (best estimate {best}, residual {residual})"
    )]
    Convergence {
        best: f64,
        residual: f64,
        iterations: usize,
    },

    #[error(
        "Eulerian volume formula does not reproduce the reference value for k={k}: \
         formula {formula}, reference {reference}"
    )]
    FormulaMismatch {
        k: usize,
        formula: f64,
        reference: f64,
    },

    #[error("order k={k} is not supported: {reason}")]
    UnsupportedOrder { k: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
