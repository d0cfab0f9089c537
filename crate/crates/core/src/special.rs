use std::f64::consts::PI;

use num_complex::Complex64;

// B_{2n} / (2n (2n - 1)) for n = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Principal `ln Γ(z)` for `Re z >= 0`, `z != 0`.
///
/// Shifts the argument to `|z + n| >= 15` by the recurrence and sums the
/// Stirling series there. On the closed right half-plane every `ln(z + k)` in
/// the recurrence stays off the branch cut, so the result is the analytic
/// continuation of the real log-gamma.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    debug_assert!(
        z.re >= 0.0 && z != Complex64::new(0.0, 0.0),
        "ln_gamma({z}) outside Re z >= 0"
    );
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
}

/// `arg Γ(i h)` on the continuous branch through `ln_gamma`.
pub fn arg_gamma_imaginary(h: f64) -> f64 {
    ln_gamma(Complex64::new(0.0, h)).im
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_two_pi(phase: f64) -> f64 {
    let r = phase.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}
