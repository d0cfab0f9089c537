//! Matrix algebra of the regularised Riemann–Hilbert problem and the
//! assembly of the leading asymptotics from its large-time expansion.
//!
//! The chain is: residue contributions of the local models give `M^R` at
//! `mu = 0` and near `mu = i`; `Delta = σ1 M^R(0)^{-1}` dresses `M^R` back to
//! `M = (I - σ1/mu)^{-1}(I - Delta/mu) M^R`, whose expansion at `mu = i`
//! yields `a_1, a_2, a_3` and hence `û` and `x - y`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cauchy::CauchyEngine;
use crate::coeffs::local_factors_all;
use crate::error::{Error, Result};
use crate::matrix::Matrix2C;
use crate::quadrature::QuadratureSpec;
use crate::reflection::ReflectionCoefficient;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn nonzero(mu: Complex64) -> Result<()> {
    if mu.norm() == 0.0 {
        return Err(Error::Domain("mu = 0 is excluded".into()));
    }
    Ok(())
}

/// `(I - σ1/mu) M`.
pub fn remove_pm1_singularity(m: &Matrix2C, mu: Complex64) -> Result<Matrix2C> {
    nonzero(mu)?;
    Ok((Matrix2C::identity() - Matrix2C::sigma1().scale(mu.inv())) * *m)
}

/// `Delta = σ1 M^R(0)^{-1}` for `M^R(0) = ((α, iβ), (-iβ, α))`, which gives
/// `Delta = ((iβ, α), (α, -iβ))`.
pub fn delta_from_mr0(mr0: &Matrix2C) -> Result<Matrix2C> {
    let m = &mr0.0;
    let alpha = m[0][0];
    let beta = m[0][1] / I;
    let tol = 1e-10 * (1.0 + mr0.max_abs());
    let structured = (m[1][1] - alpha).norm() <= tol
        && (m[1][0] + I * beta).norm() <= tol
        && alpha.im.abs() <= tol
        && beta.im.abs() <= tol;
    if !structured {
        return Err(Error::Contract(format!(
            "M^R(0) = {mr0} lacks the ((α, iβ), (-iβ, α)) structure"
        )));
    }
    let (a, b) = (alpha.re, beta.re);
    let gap = a * a - b * b - 1.0;
    if gap.abs() > 1e-10 {
        return Err(Error::Contract(format!("α² - β² = {} differs from 1", gap + 1.0)));
    }
    let delta = Matrix2C::sigma1() * mr0.inverse()?;
    let square = delta * delta;
    if square.distance(&Matrix2C::identity()) > 1e-10 {
        return Err(Error::Contract(format!("Delta² = {square} differs from I")));
    }
    Ok(delta)
}

/// `(I - σ1/mu)^{-1}`, the factor that restores the poles at `mu = ±1`.
pub fn i1_factor(mu: Complex64) -> Result<Matrix2C> {
    nonzero(mu)?;
    if (mu - 1.0).norm() == 0.0 || (mu + 1.0).norm() == 0.0 {
        return Err(Error::Singular(format!("(I - σ1/mu)^{{-1}} has a pole at mu = {mu}")));
    }
    (Matrix2C::identity() - Matrix2C::sigma1().scale(mu.inv())).inverse()
}

/// `d/dmu (I - σ1/mu)^{-1} = -A^{-1} (σ1/mu²) A^{-1}` with `A = I - σ1/mu`.
pub fn i1_factor_slope(mu: Complex64) -> Result<Matrix2C> {
    let inv = i1_factor(mu)?;
    Ok(-(inv * Matrix2C::sigma1().scale((mu * mu).inv()) * inv))
}

/// `M = (I - σ1/mu)^{-1} (I - Delta/mu) M^R` at one point.
pub fn dress_regular(mr: &Matrix2C, delta: &Matrix2C, mu: Complex64) -> Result<Matrix2C> {
    if mu.norm() == 0.0 {
        return Err(Error::Domain("mu = 0 is excluded".into()));
    }
    let inner = Matrix2C::identity() - delta.scale(mu.inv());
    Ok(i1_factor(mu)? * inner * *mr)
}

/// Real coefficients of `M` at `mu = i`:
/// `M = diag(a_1, 1/a_1) + ((0, a_2), (a_3, 0))(mu - i) + …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionAtI {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Leading-order `a_j` from the large-time data.
pub fn expand_at_i(eta: f64, beta1: f64, beta2: f64, delta_i: f64) -> Result<ExpansionAtI> {
    if !(delta_i > 0.0) {
        return Err(Error::Domain(format!("delta(i) must be positive, got {delta_i}")));
    }
    if !(eta.abs() < 1.0) {
        return Err(Error::Domain(format!("|eta| must be below 1, got {eta}")));
    }
    Ok(ExpansionAtI {
        a1: (1.0 - eta) * delta_i,
        a2: (beta1 + eta) / delta_i,
        a3: (beta2 - eta) * delta_i,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub u_hat: f64,
    pub x: f64,
}

/// `û = -a_2 a_1 - a_3/a_1`, `x = y + 2 ln a_1`.
pub fn reconstruct(a: &ExpansionAtI, y: f64) -> Result<Reconstruction> {
    if !(a.a1 > 0.0) {
        return Err(Error::Domain(format!("a_1 must be positive, got {}", a.a1)));
    }
    Ok(Reconstruction {
        u_hat: -a.a2 * a.a1 - a.a3 / a.a1,
        x: y + 2.0 * a.a1.ln(),
    })
}

/// First-order variation of [`reconstruct`] at `base` in the direction `da`.
pub fn reconstruct_variation(base: &ExpansionAtI, da: &ExpansionAtI) -> Result<Reconstruction> {
    if !(base.a1 > 0.0) {
        return Err(Error::Domain(format!("a_1 must be positive, got {}", base.a1)));
    }
    let a1 = base.a1;
    Ok(Reconstruction {
        u_hat: -(da.a2 * a1 + base.a2 * da.a1) - (da.a3 / a1 - base.a3 * da.a1 / (a1 * a1)),
        x: 2.0 * da.a1 / a1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidueTarget {
    /// `M^R(0)`.
    AtZero,
    /// `M^R(i)` before the `delta^{σ3}` factor.
    AtI,
    /// `d M^R/dmu` at `i` before the `delta^{σ3}` factor.
    SlopeAtI,
}

/// Residue contributions of the four images `P, -P, 1/P, -1/P` of one
/// stationary point `P` whose local matrix is `((0, b), (conj b, 0))`.
fn symmetrised_residues(b: Complex64, p: f64, z: Complex64, power: i32) -> Matrix2C {
    let m = Matrix2C::new(Complex64::new(0.0, 0.0), b, b.conj(), Complex64::new(0.0, 0.0));
    let mc = m.conj();
    let p2 = p * p;
    let images = [
        (p, m),
        (-p, mc),
        (1.0 / p, mc.scale_real(-1.0 / p2)),
        (-1.0 / p, m.scale_real(-1.0 / p2)),
    ];
    images.iter().fold(Matrix2C::zero(), |acc, (q, r)| {
        acc + r.scale((Complex64::new(*q, 0.0) - z).powi(power).inv())
    })
}

/// Sum of the small-circle contributions of one or two branches.
///
/// Branch 0 sits at `P = mu_0`, branch 1 at `P = -mu_1`; both arguments of
/// branch 1 must be given together.
pub fn local_contribution_sum(
    b0: Complex64,
    mu0: f64,
    b1: Option<Complex64>,
    mu1: Option<f64>,
    target: ResidueTarget,
    t: f64,
) -> Result<Matrix2C> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let second = match (b1, mu1) {
        (Some(b), Some(m)) => Some((b, -m)),
        (None, None) => None,
        _ => return Err(Error::Contract("branch-1 data must give both B_1 and mu_1".into())),
    };
    let (z, power, base) = match target {
        ResidueTarget::AtZero => (Complex64::new(0.0, 0.0), 1, Matrix2C::identity()),
        ResidueTarget::AtI => (I, 1, Matrix2C::identity()),
        ResidueTarget::SlopeAtI => (I, 2, Matrix2C::zero()),
    };
    let mut sum = symmetrised_residues(b0, mu0, z, power);
    if let Some((b, p)) = second {
        sum = sum + symmetrised_residues(b, p, z, power);
    }
    Ok(base + sum.scale_real(1.0 / t.sqrt()))
}

/// Matrix-valued function near `mu = i`, split into a `t`-independent part
/// and its `O(t^{-1/2})` correction; products drop correction × correction.
#[derive(Debug, Clone, Copy)]
struct Jet {
    value: Matrix2C,
    value_corr: Matrix2C,
    slope: Matrix2C,
    slope_corr: Matrix2C,
}

impl Jet {
    fn constant(value: Matrix2C, slope: Matrix2C) -> Self {
        Self {
            value,
            value_corr: Matrix2C::zero(),
            slope,
            slope_corr: Matrix2C::zero(),
        }
    }

    fn times(&self, o: &Jet) -> Jet {
        Jet {
            value: self.value * o.value,
            value_corr: self.value_corr * o.value + self.value * o.value_corr,
            slope: self.slope * o.value + self.value * o.slope,
            slope_corr: self.slope_corr * o.value
                + self.slope * o.value_corr
                + self.value_corr * o.slope
                + self.value * o.slope_corr,
        }
    }
}

/// Independently assembled leading asymptotics in the `y` frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingAssembly {
    pub u_hat: f64,
    /// `x - y` at leading order, `2 ln delta(i)`.
    pub x_minus_y: f64,
    /// `2 ln((1 - eta) delta(i))`, keeping the `O(t^{-1/2})` shift.
    pub x_minus_y_corrected: f64,
    pub eta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub delta_i: f64,
    /// `a_j` read off the assembled expansion, to first order.
    pub expansion: ExpansionAtI,
}

/// `û(y, t)` and `x - y` on the ray `y/t = xi` from the residue sums,
/// the `Delta` dressing and the expansion at `mu = i`.
pub fn assemble_leading(rc: &ReflectionCoefficient, xi: f64, t: f64, spec: &QuadratureSpec) -> Result<LeadingAssembly> {
    let factors = local_factors_all(rc, xi, t, spec)?;
    let engine = CauchyEngine::new(rc, xi, *spec)?;
    let delta_i = engine.delta_at_i()?;
    let (b0, mu0) = (factors[0].b, factors[0].mu);
    let (b1, mu1) = match factors.get(1) {
        Some(f) => (Some(f.b), Some(f.mu)),
        None => (None, None),
    };

    let mr0 = local_contribution_sum(b0, mu0, b1, mu1, ResidueTarget::AtZero, t)?;
    let beta = (mr0.get(0, 1) / I).re;
    let alpha = (1.0 + beta * beta).sqrt();
    let structured = Matrix2C::new(alpha.into(), I * beta, -I * beta, alpha.into());
    if structured.distance(&mr0) > 1e-10 + (alpha - 1.0) {
        return Err(Error::Contract(format!(
            "residue sum at 0 is not of the regular form: {mr0}"
        )));
    }
    let delta = delta_from_mr0(&structured)?;

    let d_sigma3 = Matrix2C::diag(delta_i.into(), (1.0 / delta_i).into());
    let at_i = local_contribution_sum(b0, mu0, b1, mu1, ResidueTarget::AtI, t)?;
    let slope_i = local_contribution_sum(b0, mu0, b1, mu1, ResidueTarget::SlopeAtI, t)?;
    let mr = Jet {
        value: d_sigma3,
        value_corr: (at_i - Matrix2C::identity()) * d_sigma3,
        slope: Matrix2C::zero(),
        slope_corr: slope_i * d_sigma3,
    };

    // I - Delta/mu near i: value I + i Delta, slope Delta/mu² = -Delta.
    // The diagonal of Delta is O(t^{-1/2}); α - 1 = O(1/t) is dropped.
    let sigma1 = Matrix2C::sigma1();
    let delta_corr = Matrix2C::diag(delta.get(0, 0), delta.get(1, 1));
    let i2 = Jet {
        value: Matrix2C::identity() + sigma1.scale(I),
        value_corr: delta_corr.scale(I),
        slope: -sigma1,
        slope_corr: -delta_corr,
    };
    let i1 = Jet::constant(i1_factor(I)?, i1_factor_slope(I)?);
    let m = i1.times(&i2).times(&mr);

    let lead = ExpansionAtI {
        a1: m.value.get(0, 0).re,
        a2: m.slope.get(0, 1).re,
        a3: m.slope.get(1, 0).re,
    };
    let corr = ExpansionAtI {
        a1: m.value_corr.get(0, 0).re,
        a2: m.slope_corr.get(0, 1).re,
        a3: m.slope_corr.get(1, 0).re,
    };
    let variation = reconstruct_variation(&lead, &corr)?;
    let base = reconstruct(&lead, 0.0)?;

    let eta = beta / 2.0;
    let beta1 = slope_i.get(0, 1).re;
    let beta2 = slope_i.get(1, 0).re;
    Ok(LeadingAssembly {
        u_hat: base.u_hat + variation.u_hat,
        x_minus_y: base.x,
        x_minus_y_corrected: 2.0 * ((1.0 - eta) * delta_i).ln(),
        eta,
        beta1,
        beta2,
        delta_i,
        expansion: ExpansionAtI {
            a1: lead.a1 + corr.a1,
            a2: lead.a2 + corr.a2,
            a3: lead.a3 + corr.a3,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_inputs() {
        let m = remove_pm1_singularity(&Matrix2C::identity(), c(2.0, 0.0)).unwrap();
        assert!((m.det() - 0.75).norm() < 1e-15);
        let m = remove_pm1_singularity(&Matrix2C::identity(), c(1.0, 0.0)).unwrap();
        assert_eq!(m.det(), c(0.0, 0.0));
        assert!(remove_pm1_singularity(&Matrix2C::identity(), c(0.0, 0.0)).is_err());
        assert_eq!(delta_from_mr0(&Matrix2C::identity()).unwrap(), Matrix2C::sigma1());
    }

    #[test]
    fn hyperbolic_delta() {
        let s: f64 = 0.3;
        let mr0 = Matrix2C::new(s.cosh().into(), c(0.0, s.sinh()), c(0.0, -s.sinh()), s.cosh().into());
        let d = delta_from_mr0(&mr0).unwrap();
        let expected = Matrix2C::new(c(0.0, s.sinh()), s.cosh().into(), s.cosh().into(), c(0.0, -s.sinh()));
        assert!(d.distance(&expected) < 1e-15);
        assert!((d * d).distance(&Matrix2C::identity()) < 1e-15);
        let bad = Matrix2C::identity().scale_real(0.9f64.sqrt());
        assert!(matches!(delta_from_mr0(&bad), Err(Error::Contract(_))));
    }

    #[test]
    fn i1_expansion_at_i() {
        let v = i1_factor(I).unwrap();
        let expected = Matrix2C::new(c(0.5, 0.0), c(0.0, -0.5), c(0.0, -0.5), c(0.5, 0.0));
        assert!(v.distance(&expected) < 1e-15);
        let s = i1_factor_slope(I).unwrap();
        assert!(s.distance(&Matrix2C::identity().scale(c(0.0, -0.5))) < 1e-15);
        assert!(i1_factor(c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn dressing_inverse_pair() {
        for mu in [c(0.3, 0.2), c(2.0, 0.0), c(0.0, 1.0)] {
            let m = dress_regular(&Matrix2C::identity(), &Matrix2C::sigma1(), mu).unwrap();
            assert!(m.distance(&Matrix2C::identity()) < 1e-14);
        }
        assert!(dress_regular(&Matrix2C::identity(), &Matrix2C::sigma1(), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn expansion_and_reconstruction() {
        let a = expand_at_i(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(
            a,
            ExpansionAtI {
                a1: 1.0,
                a2: 0.0,
                a3: 0.0
            }
        );
        let r = reconstruct(&a, 5.0).unwrap();
        assert_eq!((r.u_hat, r.x), (0.0, 5.0));
        let r = reconstruct(
            &ExpansionAtI {
                a1: 0.1f64.exp(),
                a2: 0.0,
                a3: 0.0,
            },
            1.0,
        )
        .unwrap();
        assert!((r.x - 1.2).abs() < 1e-15);
        let r = reconstruct(
            &ExpansionAtI {
                a1: 1.0,
                a2: 0.01,
                a3: -0.01,
            },
            0.0,
        )
        .unwrap();
        assert_eq!(r.u_hat, 0.0);
        assert!(reconstruct(
            &ExpansionAtI {
                a1: 0.0,
                a2: 0.0,
                a3: 0.0
            },
            0.0
        )
        .is_err());
        assert!(expand_at_i(1.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn residue_sum_patterns() {
        let at0 = local_contribution_sum(c(0.7, 0.0), 2.0, None, None, ResidueTarget::AtZero, 3.0).unwrap();
        assert!(at0.distance(&Matrix2C::identity()) < 1e-15);
        let at0 = local_contribution_sum(c(0.0, 1.0), 2.0, None, None, ResidueTarget::AtZero, 1.0).unwrap();
        assert!((at0.get(0, 1) - c(0.0, 2.0)).norm() < 1e-15);
        assert!((at0.get(1, 0) - c(0.0, -2.0)).norm() < 1e-15);
        let ati = local_contribution_sum(c(0.0, 1.0), 2.0, None, None, ResidueTarget::AtI, 1.0).unwrap();
        assert!((ati.get(0, 1) - c(0.0, 1.0)).norm() < 1e-15);
        assert!(local_contribution_sum(c(0.0, 1.0), 2.0, Some(c(1.0, 0.0)), None, ResidueTarget::AtI, 1.0).is_err());
    }

    #[test]
    fn zero_reflection_assembles_to_zero() {
        let rc = ReflectionCoefficient::zero();
        let spec = QuadratureSpec::default();
        for xi in [1.0, -0.1] {
            let a = assemble_leading(&rc, xi, 100.0, &spec).unwrap();
            assert_eq!(a.u_hat, 0.0);
            assert_eq!(a.x_minus_y, 0.0);
        }
    }

    #[test]
    fn dual_path_matches_closed_form() {
        use crate::coeffs::coeffs_for;
        let rc = ReflectionCoefficient::model(0.8, 0.5, 0.7).unwrap();
        let spec = QuadratureSpec::default();
        for (xi, t) in [(1.0, 100.0), (0.3, 1e4), (-0.125, 400.0), (-0.22, 100.0)] {
            let a = assemble_leading(&rc, xi, t, &spec).unwrap();
            let cs = coeffs_for(&rc, xi, &spec).unwrap();
            let closed: f64 = cs.iter().map(|c| c.term_y(t)).sum();
            let envelope: f64 = cs.iter().map(|c| c.envelope(t)).sum();
            assert!(
                (a.u_hat - closed).abs() < 1e-9 * envelope,
                "xi = {xi}, t = {t}: {} vs {closed}",
                a.u_hat
            );
            assert!((a.u_hat + a.beta1 + a.beta2).abs() < 1e-15);
            let y = CauchyEngine::new(&rc, xi, spec).unwrap().y_shift().unwrap();
            assert!((a.x_minus_y - y).abs() < 1e-14);
        }
    }
}
