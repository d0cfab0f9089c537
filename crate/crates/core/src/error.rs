use thiserror::Error;

use crate::geometry::SectorClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a map (e.g. `mu = 0`).
    #[error("domain error: {0}")]
    Domain(String),

    /// The ray parameter does not belong to the sector an operation needs.
    #[error("ray parameter xi = {xi} lies in sector {found:?}, expected {expected}")]
    Sector {
        xi: f64,
        found: SectorClass,
        expected: &'static str,
    },

    /// A pole or a non-integrable singularity was hit.
    #[error("singularity: {0}")]
    Singular(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error(
        "quadrature did not converge on [{a}, {b}]: estimated error {error:.3e} after {subdivisions} subdivisions"
    )]
    Accuracy {
        a: f64,
        b: f64,
        error: f64,
        subdivisions: usize,
    },

    /// Input violates a structural precondition of the RH algebra.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Time integration produced non-finite values.
    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    /// Not enough signal or oscillations to extract an observable.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid reflection table: {0}")]
    Table(String),
}
