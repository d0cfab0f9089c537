#![allow(dead_code)]

use mch_core::geometry::stationary_points;
use mch_core::ReflectionCoefficient;

/// `dθ̂/dk` at `k` on the ray `xi`.
pub fn phase_slope(k: f64, xi: f64) -> f64 {
    let s = 1.0 + 4.0 * k * k;
    xi - 2.0 * (1.0 - 4.0 * k * k) / (s * s)
}

/// Root of `f` on `[a, b]` by plain bisection; `f(a)` and `f(b)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    assert!(fa * f(b) <= 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Stationary points of `θ̂(·, xi)` found by bisection on `dθ̂/dk = 0`.
pub fn kappa_oracle(xi: f64) -> (f64, Option<f64>) {
    let k0 = bisect(|k| phase_slope(k, xi), 0.0, SQRT3_2);
    let k1 = (xi < 0.0).then(|| bisect(|k| phase_slope(k, xi), SQRT3_2, 1e4));
    (k0, k1)
}

pub fn mu_of_kappa(k: f64) -> f64 {
    2.0 * k + (4.0 * k * k + 1.0).sqrt()
}

pub fn f_of_kappa(k: f64) -> f64 {
    let s = 1.0 + 4.0 * k * k;
    k * (3.0 - 4.0 * k * k) / (s * s * s)
}

/// Gaussian model with `|r(mu_0(xi))|^2 = target`.
pub fn tuned_model(xi: f64, target: f64, width: f64, chirp: f64) -> ReflectionCoefficient {
    let mu0 = stationary_points(xi).unwrap().zero.mu;
    let w = mu0 - 1.0 / mu0;
    let amp = target.sqrt() * (width * w * w).exp();
    assert!(amp <= 1.0, "target not reachable with width {width}");
    ReflectionCoefficient::model(amp, width, chirp).unwrap()
}

/// Midpoint rule with `panels` equal panels.
pub fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Evenly spaced points strictly inside `(a, b)`.
pub fn interior(a: f64, b: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| a + (b - a) * i as f64 / (n + 1) as f64).collect()
}

/// `ln(1 - |r(s)|^2)` for the Gaussian model, written out directly.
pub fn model_log_gap(amp: f64, width: f64, s: f64) -> f64 {
    let w = s - 1.0 / s;
    (1.0 - amp * amp * (-2.0 * width * w * w).exp()).ln()
}

/// `d/ds ln(1 - |r(s)|^2)` for the Gaussian model.
pub fn model_log_gap_slope(amp: f64, width: f64, s: f64) -> f64 {
    let w = s - 1.0 / s;
    let q = amp * amp * (-2.0 * width * w * w).exp();
    q * 4.0 * width * w * (1.0 + 1.0 / (s * s)) / (1.0 - q)
}

/// Stationary points `mu_0` and `mu_1` from the bisection oracle.
pub fn mu_oracle(xi: f64) -> (f64, Option<f64>) {
    let (k0, k1) = kappa_oracle(xi);
    (mu_of_kappa(k0), k1.map(mu_of_kappa))
}

/// `arg Γ(i h)` from Stirling's series after shifting the argument by 30.
pub fn arg_gamma_oracle(h: f64) -> f64 {
    use num_complex::Complex64;
    let mut z = Complex64::new(0.0, h);
    let mut shift = Complex64::new(0.0, 0.0);
    for _ in 0..30 {
        shift += z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    let lg = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift;
    lg.im
}

/// Regularised phase `Im chi(mu_0)` in the first oscillatory range by the
/// midpoint rule on both pieces of the contour.
pub fn chi_oracle_range1(amp: f64, width: f64, xi: f64, panels: usize) -> f64 {
    let (mu0, _) = mu_oracle(xi);
    let lg = |s: f64| model_log_gap(amp, width, s);
    let l0 = lg(mu0);
    let sum = midpoint(|s| (lg(s) - l0) / (s - mu0), 1.0 / mu0, mu0, panels)
        + midpoint(|s| (lg(s) - l0) / (-s - mu0), 1.0 / mu0, mu0, panels);
    -sum / (2.0 * std::f64::consts::PI)
}

/// Distance between two phases modulo `2π`.
pub fn phase_gap(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (a - b).rem_euclid(two_pi);
    d.min(two_pi - d)
}
