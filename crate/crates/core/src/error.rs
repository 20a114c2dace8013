use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller supplied something outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// The two spins coincide, so the dipole coupling diverges.
    #[error("singular configuration at t = {t}: spin distance {distance}")]
    SingularConfiguration { t: f64, distance: f64 },

    /// Iteration failed to converge, or a physical invariant was violated
    /// beyond tolerance during propagation.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
