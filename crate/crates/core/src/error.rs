use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the numerical routines. Scalar payloads are reported as `f64`.
#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Error {
    #[error("quadrature did not reach tolerance after {nodes} nodes (estimate {estimate:e}, error {error:e})")]
    QuadratureNotConverged { nodes: usize, estimate: f64, error: f64 },

    #[error("unsupported potential kind: {0}")]
    UnsupportedKind(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid spacing {spacing:e} exceeds resolution limit {limit:e}")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("insufficient extrapolation ladder: {0}")]
    LadderInsufficient(String),

    #[error("outside the domain of the estimate: {0}")]
    DomainError(String),

    #[error("binding margin does not change sign on [{lo}, {hi}]")]
    BracketNotFound { lo: f64, hi: f64 },

    #[error("charge {z} lies within 1e-9 of the regime boundary {boundary} (W(0,0) = {origin_value:e})")]
    DegenerateAtBoundary { z: f64, boundary: f64, origin_value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
