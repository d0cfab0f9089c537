//! Scalar Cauchy integrals built on `ln(1 - |r(s)|^2)` over `Sigma_b(xi)`.
//!
//! * `delta(mu, xi) = exp{(1/2πi) ∫_{Sigma_b} ln(1 - |r(s)|^2) ds / (s - mu)}`,
//!   the solution of the scalar jump problem `delta_+ = delta_- (1 - |r|^2)`;
//! * its value at `mu = i` and the resulting coordinate shift `2 ln delta(i)`;
//! * the regularised phases `chi` at the stationary points, where the
//!   logarithmic singularity of `delta` has been factored out.
//!
//! Unbounded pieces of `Sigma_b` are mapped onto bounded ones by `s = 1/u`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    classify_sector, sigma_b, stationary_points, Interval, IntervalUnion, SectorClass, StationaryData,
};
use crate::quadrature::{integrate_graded, integrate_to_infinity, QuadratureSpec};
use crate::reflection::ReflectionCoefficient;

/// Below this distance to the evaluation point, difference quotients
/// `(L(s) - L(mu)) / (s - mu)` are replaced by `L'` at the midpoint.
const REMOVABLE_RADIUS: f64 = 1e-4;

/// Jumps with `|ln(1 - |r|^2)|` below this are treated as trivial, which lets
/// `delta` be evaluated on `Sigma_b` where `r` vanishes (e.g. `mu = 0`).
const TRIVIAL_JUMP: f64 = 1e-15;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Cauchy-integral evaluator for one reflection coefficient and one ray.
#[derive(Debug, Clone)]
pub struct CauchyEngine<'a> {
    rc: &'a ReflectionCoefficient,
    xi: f64,
    stat: Option<StationaryData>,
    sigma: IntervalUnion,
    spec: QuadratureSpec,
}

impl<'a> CauchyEngine<'a> {
    pub fn new(rc: &'a ReflectionCoefficient, xi: f64, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let sector = classify_sector(xi);
        let stat = match sector {
            SectorClass::Oscillatory1 | SectorClass::Oscillatory2 => Some(stationary_points(xi)?),
            SectorClass::Boundary => {
                return Err(Error::Sector {
                    xi,
                    found: sector,
                    expected: "a non-boundary ray",
                })
            }
            _ => None,
        };
        let sigma = match &stat {
            Some(st) => sigma_b(xi, st)?,
            // The fast-decay sets do not depend on the stationary data.
            None => sigma_b(xi, &stationary_points(0.0)?)?,
        };
        Ok(Self {
            rc,
            xi,
            stat,
            sigma,
            spec,
        })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn sigma_b(&self) -> &IntervalUnion {
        &self.sigma
    }

    pub fn stationary(&self) -> Result<&StationaryData> {
        self.stat.as_ref().ok_or(Error::Sector {
            xi: self.xi,
            found: classify_sector(self.xi),
            expected: "an oscillatory sector",
        })
    }

    fn oscillatory2(&self) -> bool {
        classify_sector(self.xi) == SectorClass::Oscillatory2
    }

    fn unit_singular(&self, s: f64) -> bool {
        s.abs() == 1.0 && self.rc.is_singular_at_unit()
    }

    /// `∫_lo^hi g(s) ds` over one (possibly unbounded) interval. Splits at
    /// `±1` when `|r(±1)| = 1` and grades toward every endpoint for which
    /// `singular` (or the unit-circle test) holds.
    fn integrate_interval<G, S>(&self, lo: f64, hi: f64, g: &G, singular: &S) -> Result<Complex64>
    where
        G: Fn(f64) -> Complex64,
        S: Fn(f64) -> bool,
    {
        let is_sing = |s: f64| singular(s) || self.unit_singular(s);
        if lo == f64::NEG_INFINITY {
            let c = if hi < 0.0 { hi } else { -1.0 };
            let tail = integrate_to_infinity(|sigma| g(-sigma), -c, is_sing(c), &self.spec)?;
            let rest = if hi > c {
                self.integrate_interval(c, hi, g, singular)?
            } else {
                ZERO
            };
            return Ok(tail + rest);
        }
        if hi == f64::INFINITY {
            let c = if lo > 0.0 { lo } else { 1.0 };
            let tail = integrate_to_infinity(g, c, is_sing(c), &self.spec)?;
            let rest = if lo < c {
                self.integrate_interval(lo, c, g, singular)?
            } else {
                ZERO
            };
            return Ok(tail + rest);
        }
        let mut cuts = vec![lo];
        if self.rc.is_singular_at_unit() {
            cuts.extend([-1.0, 1.0].into_iter().filter(|&c| lo < c && c < hi));
        }
        cuts.push(hi);
        let mut total = ZERO;
        for w in cuts.windows(2) {
            total += integrate_graded(g, w[0], w[1], is_sing(w[0]), is_sing(w[1]), &self.spec)?;
        }
        Ok(total)
    }

    fn log_gap(&self, s: f64) -> f64 {
        self.rc.log_gap(s)
    }

    /// `(L(s) - l_ref) / (s - mu)` with the removable point handled when `mu` is real.
    fn difference_quotient(&self, s: f64, mu: Complex64, l_ref: f64) -> Complex64 {
        if mu.im == 0.0 && (s - mu.re).abs() < REMOVABLE_RADIUS {
            return Complex64::new(self.rc.log_gap_derivative(0.5 * (s + mu.re)), 0.0);
        }
        (self.log_gap(s) - l_ref) / (s - mu)
    }

    /// `delta(mu, xi)` for `mu` off the closure of `Sigma_b` (or on it where the
    /// jump is trivial).
    pub fn delta(&self, mu: Complex64) -> Result<Complex64> {
        Ok(self.log_delta(mu)?.exp())
    }

    /// `ln delta(mu, xi)` as the Cauchy integral itself.
    pub fn log_delta(&self, mu: Complex64) -> Result<Complex64> {
        if !mu.re.is_finite() || !mu.im.is_finite() {
            return Err(Error::Domain(format!("delta evaluated at {mu}")));
        }
        let on_contour = mu.im == 0.0 && self.sigma.contains_closure(mu.re);
        if on_contour && self.log_gap(mu.re).abs() > TRIVIAL_JUMP {
            return Err(Error::Contract(format!(
                "delta evaluated at mu = {} on Sigma_b where the jump is non-trivial",
                mu.re
            )));
        }
        let kernel = |s: f64| {
            let d = s - mu;
            if d.re == 0.0 && d.im == 0.0 {
                ZERO
            } else {
                self.log_gap(s) / d
            }
        };
        let mut total = ZERO;
        for iv in self.sigma.intervals() {
            total += self.integrate_interval(iv.lo, iv.hi, &kernel, &|_| false)?;
        }
        Ok(total / Complex64::new(0.0, 2.0 * PI))
    }

    /// `(1/π) ∫ ln(1 - |r|^2) / (s^2 + 1) ds` over each piece of `Sigma_b ∩ (0, ∞)`.
    pub fn delta_at_i_pieces(&self) -> Result<Vec<(Interval, f64)>> {
        self.stationary()?;
        let kernel = |s: f64| Complex64::new(self.log_gap(s) / (s * s + 1.0), 0.0);
        self.sigma
            .positive_part()
            .into_iter()
            .map(|iv| Ok((iv, self.integrate_interval(iv.lo, iv.hi, &kernel, &|_| false)?.re / PI)))
            .collect()
    }

    /// `delta(i, xi)`, real and in `(0, 1]`.
    pub fn delta_at_i(&self) -> Result<f64> {
        Ok(self.log_delta_at_i()?.exp())
    }

    fn log_delta_at_i(&self) -> Result<f64> {
        Ok(self.delta_at_i_pieces()?.iter().map(|(_, v)| v).sum())
    }

    /// Coordinate shift `x - y = 2 ln delta(i, xi)` (`y_0` or `y_01`).
    pub fn y_shift(&self) -> Result<f64> {
        Ok(2.0 * self.log_delta_at_i()?)
    }

    /// First-order Taylor coefficient of `ln delta` at `mu = i`:
    /// `(1/πi) ∫_{Sigma_b ∩ (0,∞)} ln(1 - |r|^2) (s^2 - 1) / (s^2 + 1)^2 ds`,
    /// which vanishes by the inversion symmetry of `|r|`.
    pub fn log_delta_slope_at_i(&self) -> Result<Complex64> {
        self.stationary()?;
        let kernel = |s: f64| {
            let q = s * s + 1.0;
            Complex64::new(self.log_gap(s) * (s * s - 1.0) / (q * q), 0.0)
        };
        let mut total = ZERO;
        for iv in self.sigma.positive_part() {
            total += self.integrate_interval(iv.lo, iv.hi, &kernel, &|_| false)?;
        }
        Ok(total / Complex64::new(0.0, PI))
    }

    /// Regularised phase `chi(mu)` left after the power factors of the
    /// stationary points are pulled out of `delta`.
    ///
    /// In the first oscillatory range the subtracted constant is
    /// `ln(1 - |r(mu_0)|^2)` on both pieces. In the second range the pieces
    /// around `±mu_0` subtract `ln(1 - |r(mu_0)|^2)`, the piece around the
    /// origin subtracts `ln(1 - |r(mu_1)|^2)`, and the two unbounded pieces are
    /// integrated by parts against `ln(mu - s)` / `ln(s - mu)` (principal
    /// branch; both arguments are positive for real evaluation points).
    pub fn chi(&self, mu: Complex64) -> Result<Complex64> {
        let stat = *self.stationary()?;
        let mu0 = stat.zero.mu;
        let l0 = self.log_gap(mu0);
        let at_mu = |s: f64| mu.im == 0.0 && s == mu.re;
        let mut total = ZERO;
        for iv in [Interval::new(-mu0, -1.0 / mu0), Interval::new(1.0 / mu0, mu0)] {
            total += self.integrate_interval(iv.lo, iv.hi, &|s| self.difference_quotient(s, mu, l0), &at_mu)?;
        }
        if self.oscillatory2() {
            let mu1 = stat
                .one
                .ok_or_else(|| Error::Contract("second stationary branch missing".into()))?
                .mu;
            let l1 = self.log_gap(mu1);
            total +=
                self.integrate_interval(-1.0 / mu1, 1.0 / mu1, &|s| self.difference_quotient(s, mu, l1), &at_mu)?;
            let left = |s: f64| -(mu - s).ln() * self.rc.log_gap_derivative(s);
            total += self.integrate_interval(f64::NEG_INFINITY, -mu1, &left, &at_mu)?;
            let right = |s: f64| -(s - mu).ln() * self.rc.log_gap_derivative(s);
            total += self.integrate_interval(mu1, f64::INFINITY, &right, &at_mu)?;
        }
        Ok(total / Complex64::new(0.0, 2.0 * PI))
    }

    /// `chi` at the stationary point of branch `j`: `mu_0` for `j = 0`,
    /// `-mu_1` for `j = 1`. Purely imaginary.
    pub fn chi_at(&self, branch: usize) -> Result<Complex64> {
        let stat = self.stationary()?;
        let point = match branch {
            0 => stat.zero.mu,
            1 => {
                -stat
                    .one
                    .ok_or(Error::Sector {
                        xi: self.xi,
                        found: classify_sector(self.xi),
                        expected: "the second oscillatory range for branch 1",
                    })?
                    .mu
            }
            _ => return Err(Error::Domain(format!("branch {branch} does not exist"))),
        };
        self.chi(Complex64::new(point, 0.0))
    }
}

pub fn delta_eval(rc: &ReflectionCoefficient, xi: f64, mu: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    CauchyEngine::new(rc, xi, *spec)?.delta(mu)
}

pub fn delta_at_i(rc: &ReflectionCoefficient, xi: f64, spec: &QuadratureSpec) -> Result<f64> {
    CauchyEngine::new(rc, xi, *spec)?.delta_at_i()
}

pub fn y_shift(rc: &ReflectionCoefficient, xi: f64, spec: &QuadratureSpec) -> Result<f64> {
    CauchyEngine::new(rc, xi, *spec)?.y_shift()
}

pub fn chi_at(rc: &ReflectionCoefficient, xi: f64, branch: usize, spec: &QuadratureSpec) -> Result<Complex64> {
    CauchyEngine::new(rc, xi, *spec)?.chi_at(branch)
}
