//! Shared fixtures for the benchmarks.

use mch_core::{GaussianProfile, QuadratureSpec, ReflectionCoefficient, SimConfig};

/// Rays covering both oscillatory ranges.
pub const RAYS: [f64; 4] = [-0.125, 0.4, 1.0, 1.7];

pub fn reflection() -> ReflectionCoefficient {
    ReflectionCoefficient::default()
}

pub fn quadrature() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// Reduced grid for timing single solver steps.
pub fn small_config() -> SimConfig {
    SimConfig {
        half_length: 256.0,
        modes: 4096,
        dt: 5e-3,
        t_end: 1.0,
        profile: GaussianProfile::default(),
        ..SimConfig::default()
    }
}
