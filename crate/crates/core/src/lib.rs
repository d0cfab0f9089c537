//! Large-time asymptotics of the modified Camassa–Holm equation on a unit
//! background.
//!
//! The crate computes the stationary-point geometry of the spectral phase,
//! the scalar Cauchy integrals that enter the steepest-descent analysis, the
//! closed-form `t^{-1/2}` oscillatory leading terms in both oscillatory
//! sectors, an independent assembly of the same terms through the matrix
//! Riemann–Hilbert algebra, and a pseudospectral solver used to check the
//! reflection-independent predictions against the PDE itself.

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cauchy;
pub mod coeffs;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod pde;
pub mod quadrature;
pub mod reflection;
pub mod rh;
pub mod special;

pub use cauchy::CauchyEngine;
pub use coeffs::{AsymptoticCoefficients, LeadingTerm, LocalFactors};
pub use error::{Error, Result};
pub use geometry::{Frame, Interval, IntervalUnion, RayParameter, SectorClass, StationaryData, StationaryPoint};
pub use matrix::Matrix2C;
pub use pde::{FieldState, GaussianProfile, RunDiagnostics, SimConfig, Simulator};
pub use quadrature::QuadratureSpec;
pub use reflection::{GaussianModel, ReflectionCoefficient, ReflectionTable};
pub use rh::{ExpansionAtI, LeadingAssembly, Reconstruction};
