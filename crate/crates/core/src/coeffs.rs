//! Closed-form leading-order asymptotics in the oscillatory sectors.
//!
//! Along a ray `x/t = zeta` (zero-background frame) the solution behaves like
//! `C1/√t · cos(C2 t + C3 ln t + C̃4)`, summed over one branch in the first
//! oscillatory range and two branches in the second.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cauchy::CauchyEngine;
use crate::error::{Error, Result};
use crate::geometry::{
    classify_sector, Frame, RayParameter, SectorClass, StationaryData, StationaryPoint, XI_LEFT, XI_RIGHT,
};
use crate::quadrature::{integrate_graded, QuadratureSpec};
use crate::reflection::{h_at, ReflectionCoefficient};
use crate::special::{arg_gamma_imaginary, wrap_two_pi};

/// Below this `h` the oscillatory term is dropped (its amplitude is `O(√h)`).
pub const H_CUTOFF: f64 = 1e-8;

/// Half-width of the exclusion zone around sector boundaries in `u_leading`.
pub const BOUNDARY_GUARD: f64 = 1e-6;

/// Stationary-point data of one branch, independent of `t`.
#[derive(Debug, Clone, Copy)]
struct Branch {
    index: usize,
    point: StationaryPoint,
    h: f64,
    /// `Im chi` at `mu_0` (branch 0) or `-mu_1` (branch 1).
    chi_im: f64,
    /// `h_{1-j} ln((kappa_1 + kappa_0)/(kappa_1 - kappa_0))`, zero in the first range.
    cross: f64,
    /// `arg(-conj r)` at the same point.
    arg_r: f64,
    arg_gamma: f64,
}

impl Branch {
    fn negligible(&self) -> bool {
        self.h < H_CUTOFF
    }

    /// `C4` in the `y` frame, excluding the `t`-dependent pieces.
    fn c4(&self) -> f64 {
        let k = self.point.kappa;
        let k2 = k * k;
        let s = 1.0 + 4.0 * k2;
        let log_term = (128.0 * k * k2 * (3.0 - 4.0 * k2).abs() / (s * s * s)).ln();
        3.0 * FRAC_PI_4 + 2.0 * self.chi_im - self.h * log_term - self.arg_r + self.arg_gamma + 2.0 * self.cross
    }
}

fn branches(rc: &ReflectionCoefficient, engine: &CauchyEngine) -> Result<Vec<Branch>> {
    let stat: StationaryData = *engine.stationary()?;
    let h0 = h_at(rc, stat.zero.mu)?;
    let h1 = match stat.one {
        Some(p) => Some(h_at(rc, p.mu)?),
        None => None,
    };
    let log_rho = stat
        .one
        .map(|p1| ((p1.kappa + stat.zero.kappa) / (p1.kappa - stat.zero.kappa)).ln());
    let mut out = Vec::with_capacity(2);
    for j in 0..2 {
        let Some(point) = stat.branch(j).copied() else { break };
        let signed_mu = if j == 0 { point.mu } else { -point.mu };
        let h = if j == 0 { h0 } else { h1.unwrap_or(0.0) };
        let other_h = if j == 0 { h1.unwrap_or(0.0) } else { h0 };
        let chi = engine.chi_at(j)?;
        let r = rc.eval(signed_mu)?;
        out.push(Branch {
            index: j,
            point,
            h,
            chi_im: chi.im,
            cross: log_rho.map_or(0.0, |l| other_h * l),
            arg_r: (-r.conj()).arg(),
            arg_gamma: if h < H_CUTOFF { 0.0 } else { arg_gamma_imaginary(h) },
        });
    }
    Ok(out)
}

/// Local-model data at one stationary point for a fixed `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFactors {
    pub branch: usize,
    pub h: f64,
    pub beta: Complex64,
    /// Phase of `delta_{mu_j}^2` (unit modulus).
    pub delta_sq_phase: f64,
    pub phi_beta: f64,
    pub b: Complex64,
    /// Stationary point `mu_j > 1` the factors belong to.
    pub mu: f64,
}

impl LocalFactors {
    pub fn delta_sq(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.delta_sq_phase)
    }
}

fn factors_of(branch: &Branch, t: f64) -> LocalFactors {
    let p = branch.point;
    let sign = if branch.index == 0 { -1.0 } else { 1.0 };
    // ln delta_{mu_j} = ±i t theta_hat + chi + i cross - (i h / 2) ln(128 |f| kappa^2 t)
    let delta_sq_phase = 2.0 * sign * t * p.theta_hat + 2.0 * branch.chi_im + 2.0 * branch.cross
        - branch.h * (128.0 * p.f.abs() * p.kappa * p.kappa * t).ln();
    if branch.negligible() {
        return LocalFactors {
            branch: branch.index,
            h: branch.h,
            beta: Complex64::new(0.0, 0.0),
            delta_sq_phase,
            phi_beta: 0.0,
            b: Complex64::new(0.0, 0.0),
            mu: p.mu,
        };
    }
    let phi_beta = FRAC_PI_4 - branch.arg_r + branch.arg_gamma;
    let beta = Complex64::from_polar(branch.h.sqrt(), phi_beta);
    let denom = (1.0 + 1.0 / (p.mu * p.mu)) * (2.0 * p.f.abs()).sqrt();
    let b = Complex64::i() * Complex64::from_polar(1.0, delta_sq_phase) * beta / denom;
    LocalFactors {
        branch: branch.index,
        h: branch.h,
        beta,
        delta_sq_phase,
        phi_beta,
        b,
        mu: p.mu,
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t must be positive and finite, got {t}")));
    }
    Ok(())
}

/// `beta_j`, `delta_{mu_j}` and `B_j` on the ray `xi` at time `t`.
pub fn local_factors(
    rc: &ReflectionCoefficient,
    xi: f64,
    t: f64,
    branch: usize,
    spec: &QuadratureSpec,
) -> Result<LocalFactors> {
    check_t(t)?;
    let engine = CauchyEngine::new(rc, xi, *spec)?;
    let all = branches(rc, &engine)?;
    let b = all.get(branch).ok_or(Error::Sector {
        xi,
        found: classify_sector(xi),
        expected: "the second oscillatory range for branch 1",
    })?;
    Ok(factors_of(b, t))
}

/// All local factors on the ray (one or two branches).
pub fn local_factors_all(
    rc: &ReflectionCoefficient,
    xi: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<LocalFactors>> {
    check_t(t)?;
    let engine = CauchyEngine::new(rc, xi, *spec)?;
    Ok(branches(rc, &engine)?.iter().map(|b| factors_of(b, t)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoefficients {
    pub branch: usize,
    /// Ray slope in the zero-background frame.
    pub xi: f64,
    pub kappa: f64,
    pub mu: f64,
    pub h: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Phase constant in the `y` frame, in `[0, 2π)`.
    pub c4: f64,
    /// Phase constant in the `x` frame, in `[0, 2π)`.
    pub c4_tilde: f64,
}

impl AsymptoticCoefficients {
    pub fn phase(&self, t: f64) -> f64 {
        self.c2 * t + self.c3 * t.ln() + self.c4_tilde
    }

    /// `C1/√t · cos(C2 t + C3 ln t + C̃4)`.
    pub fn term(&self, t: f64) -> f64 {
        if self.c1 == 0.0 {
            return 0.0;
        }
        self.c1 / t.sqrt() * self.phase(t).cos()
    }

    /// Same with the `y`-frame constant `C4`.
    pub fn term_y(&self, t: f64) -> f64 {
        if self.c1 == 0.0 {
            return 0.0;
        }
        self.c1 / t.sqrt() * (self.c2 * t + self.c3 * t.ln() + self.c4).cos()
    }

    pub fn envelope(&self, t: f64) -> f64 {
        self.c1.abs() / t.sqrt()
    }
}

fn assemble(branch: &Branch, y_shift: f64, xi: f64) -> AsymptoticCoefficients {
    let p = branch.point;
    let k2 = p.kappa * p.kappa;
    let sign = if branch.index == 0 { 1.0 } else { -1.0 };
    let c1 = if branch.negligible() {
        0.0
    } else {
        -(8.0 * branch.h * p.kappa / (3.0 - 4.0 * k2).abs()).sqrt()
    };
    let c4 = branch.c4();
    AsymptoticCoefficients {
        branch: branch.index,
        xi,
        kappa: p.kappa,
        mu: p.mu,
        h: branch.h,
        c1,
        c2: sign * 32.0 * p.kappa * k2 / ((1.0 + 4.0 * k2) * (1.0 + 4.0 * k2)),
        c3: -branch.h,
        c4: wrap_two_pi(c4),
        c4_tilde: wrap_two_pi(c4 + sign * 2.0 * p.kappa * y_shift),
    }
}

/// `-(1/π) (∫_{-mu_0}^{-1/mu_0} + ∫_{1/mu_0}^{mu_0}) ln[(1-|r(s)|^2)/(1-|r(mu_0)|^2)] ds/(s - mu_0)`,
/// the real phase contribution written out directly.
fn phase_integral_direct(rc: &ReflectionCoefficient, mu0: f64, spec: &QuadratureSpec) -> Result<f64> {
    let g0 = 1.0 - rc.abs_sq(mu0);
    let r0 = rc.abs_sq(mu0);
    let f = |s: f64| {
        if s == mu0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(((r0 - rc.abs_sq(s)) / g0).ln_1p() / (s - mu0), 0.0)
    };
    let singular = rc.is_singular_at_unit();
    let mut total = 0.0;
    for (a, b, cut) in [(-mu0, -1.0 / mu0, -1.0), (1.0 / mu0, mu0, 1.0)] {
        if singular && a < cut && cut < b {
            total += integrate_graded(f, a, cut, false, true, spec)?.re;
            total += integrate_graded(f, cut, b, true, false, spec)?.re;
        } else {
            total += integrate_graded(f, a, b, false, false, spec)?.re;
        }
    }
    Ok(-total / PI)
}

fn require_sector(xi: f64, expected: SectorClass, label: &'static str) -> Result<()> {
    let found = classify_sector(xi);
    if found != expected {
        return Err(Error::Sector {
            xi,
            found,
            expected: label,
        });
    }
    Ok(())
}

/// Coefficients on a ray of the first oscillatory range `0 < zeta < 2`
/// (zero-background frame).
pub fn coeffs_region1(rc: &ReflectionCoefficient, zeta: f64, spec: &QuadratureSpec) -> Result<AsymptoticCoefficients> {
    require_sector(zeta, SectorClass::Oscillatory1, "0 < zeta < 2")?;
    let engine = CauchyEngine::new(rc, zeta, *spec)?;
    let all = branches(rc, &engine)?;
    let b = &all[0];
    let direct = phase_integral_direct(rc, b.point.mu, spec)?;
    let via_chi = 2.0 * b.chi_im;
    let tol = (100.0 * spec.rel_tol).max(1e-12) * (1.0 + direct.abs());
    if (direct - via_chi).abs() > tol {
        return Err(Error::Contract(format!(
            "phase integral {direct} disagrees with -2i chi(mu_0) = {via_chi} at zeta = {zeta}"
        )));
    }
    Ok(assemble(b, engine.y_shift()?, zeta))
}

/// Both branches on a ray of the second oscillatory range `-1/4 < zeta < 0`.
pub fn coeffs_region2(
    rc: &ReflectionCoefficient,
    zeta: f64,
    spec: &QuadratureSpec,
) -> Result<[AsymptoticCoefficients; 2]> {
    require_sector(zeta, SectorClass::Oscillatory2, "-1/4 < zeta < 0")?;
    let engine = CauchyEngine::new(rc, zeta, *spec)?;
    let all = branches(rc, &engine)?;
    let y = engine.y_shift()?;
    Ok([assemble(&all[0], y, zeta), assemble(&all[1], y, zeta)])
}

/// Coefficients of every branch on an oscillatory ray.
pub fn coeffs_for(rc: &ReflectionCoefficient, xi: f64, spec: &QuadratureSpec) -> Result<Vec<AsymptoticCoefficients>> {
    match classify_sector(xi) {
        SectorClass::Oscillatory1 => Ok(vec![coeffs_region1(rc, xi, spec)?]),
        SectorClass::Oscillatory2 => Ok(coeffs_region2(rc, xi, spec)?.to_vec()),
        found => Err(Error::Sector {
            xi,
            found,
            expected: "an oscillatory sector",
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingTerm {
    /// `None` on a sector boundary.
    pub value: Option<f64>,
    pub sector: SectorClass,
    pub xi: f64,
}

/// Sector of a zero-background slope with the boundary guard applied.
pub fn guarded_sector(xi: f64) -> SectorClass {
    if [XI_LEFT, 0.0, XI_RIGHT].iter().any(|b| (xi - b).abs() < BOUNDARY_GUARD) {
        SectorClass::Boundary
    } else {
        classify_sector(xi)
    }
}

/// Leading asymptotic value at `(x, t)`.
///
/// In the `u` frame the background `1` is added and the ray is read off in
/// the shifted coordinate `x - t`; in the `ũ` frame neither is applied.
/// Fast-decay sectors return the background exactly.
pub fn u_leading(
    rc: &ReflectionCoefficient,
    x: f64,
    t: f64,
    frame: Frame,
    spec: &QuadratureSpec,
) -> Result<LeadingTerm> {
    check_t(t)?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let ray = RayParameter::new(x / t, frame);
    let background = match frame {
        Frame::U => 1.0,
        Frame::UTilde => 0.0,
    };
    let sector = guarded_sector(ray.xi);
    let value = match sector {
        SectorClass::Boundary => None,
        SectorClass::FastDecayLeft | SectorClass::FastDecayRight => Some(background),
        _ => {
            let sum: f64 = coeffs_for(rc, ray.xi, spec)?.iter().map(|c| c.term(t)).sum();
            Some(background + sum)
        }
    };
    Ok(LeadingTerm {
        value,
        sector,
        xi: ray.xi,
    })
}
