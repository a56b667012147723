//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by map evaluation, differentiation, and quadrature.
#[derive(Debug, Error)]
pub enum Error {
    /// Point lies outside the domain or on its singular set.
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// Central-difference stencil failed the Richardson stability check.
    #[error("finite-difference differential unstable at ({t}, rho={rho}): relative change {change:e}")]
    FdUnstable { t: f64, rho: f64, change: f64 },

    /// Adaptive subdivision hit the depth cap before reaching tolerance.
    #[error("max subdivision depth {depth} exceeded on [{lo}, {hi}]")]
    MaxDepthExceeded { depth: u32, lo: f64, hi: f64 },

    /// Integrand returned NaN or infinity at a quadrature node.
    #[error("non-finite integrand at (t={t}, rho={rho})")]
    NonFiniteIntegrand { t: f64, rho: f64 },

    /// Shell ledger too short or too noisy to classify.
    #[error("insufficient shells for classification: {0}")]
    InsufficientShells(String),

    /// Negative Jacobian where an orientation-preserving map was expected.
    #[error("orientation violation: J = {j:e} at (t={t}, rho={rho})")]
    OrientationViolation { t: f64, rho: f64, j: f64 },

    /// Requested oscillation scale does not fit inside the domain.
    #[error("scale out of domain: {0}")]
    ScaleOutOfDomain(String),

    /// Bad construction or configuration parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Report or ledger I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
