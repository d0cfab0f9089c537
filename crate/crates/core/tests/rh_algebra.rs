use mch_core::coeffs::coeffs_for;
use mch_core::rh::{
    assemble_leading, delta_from_mr0, dress_regular, expand_at_i, i1_factor, i1_factor_slope, reconstruct,
    reconstruct_variation, remove_pm1_singularity,
};
use mch_core::{CauchyEngine, Error, ExpansionAtI, Matrix2C, QuadratureSpec, ReflectionCoefficient};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn random_c(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random matrix with unit determinant and entries of order one.
fn random_unimodular(rng: &mut ChaCha8Rng) -> Matrix2C {
    loop {
        let (a, b, c) = (random_c(rng, 1.5), random_c(rng, 1.5), random_c(rng, 1.5));
        if a.norm() > 0.3 {
            return Matrix2C::new(a, b, c, (1.0 + b * c) / a);
        }
    }
}

/// Random evaluation point away from `0` and `±1`.
fn random_mu(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let mu = random_c(rng, 3.0);
        if mu.norm() > 0.2 && (mu - 1.0).norm() > 0.2 && (mu + 1.0).norm() > 0.2 {
            return mu;
        }
    }
}

fn structured_mr0(beta: f64) -> Matrix2C {
    let alpha = Complex64::from((1.0 + beta * beta).sqrt());
    Matrix2C::new(alpha, I * beta, -I * beta, alpha)
}

#[test]
fn determinant_identity_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d63_6800);
    for _ in 0..1000 {
        let m = random_unimodular(&mut rng);
        let mu = random_mu(&mut rng);
        let det = remove_pm1_singularity(&m, mu).unwrap().det();
        let want = 1.0 - (mu * mu).inv();
        let scale = 1.0 + m.max_abs() * m.max_abs();
        assert!((det - want).norm() < 1e-12 * scale, "mu = {mu}: {det} vs {want}");
    }
}

#[test]
fn dressing_preserves_unit_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let mr = random_unimodular(&mut rng);
        let mu = random_mu(&mut rng);
        let delta = delta_from_mr0(&structured_mr0(rng.gen_range(-2.0..2.0))).unwrap();
        let det = dress_regular(&mr, &delta, mu).unwrap().det();
        let scale = 1.0 + mr.max_abs() * mr.max_abs() * delta.max_abs();
        assert!((det - 1.0).norm() < 1e-12 * scale, "{det}");
    }
}

#[test]
fn delta_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let beta = rng.gen_range(-5.0..5.0);
        let mr0 = structured_mr0(beta);
        let (a, b) = (mr0.get(0, 0).re, (mr0.get(0, 1) / I).re);
        assert!((a * a - b * b - 1.0).abs() < 1e-12 * (1.0 + beta * beta));
        let delta = delta_from_mr0(&mr0).unwrap();
        assert!((delta * delta).distance(&Matrix2C::identity()) < 1e-12 * (1.0 + beta * beta));
        let want = Matrix2C::new(I * beta, a.into(), a.into(), -I * beta);
        assert!(delta.distance(&want) < 1e-12 * (1.0 + beta * beta));
    }
    let broken = Matrix2C::identity().scale_real(0.9f64.sqrt());
    assert!(matches!(delta_from_mr0(&broken), Err(Error::Contract(_))));
    let skewed = Matrix2C::new(1.2.into(), I * 0.3, I * 0.3, 1.2.into());
    assert!(matches!(delta_from_mr0(&skewed), Err(Error::Contract(_))));
}

#[test]
fn unit_circle_poles() {
    for mu in [1.0, -1.0] {
        let m = remove_pm1_singularity(&Matrix2C::identity(), mu.into()).unwrap();
        assert_eq!(m.det(), Complex64::new(0.0, 0.0));
        assert!(matches!(i1_factor(mu.into()), Err(Error::Singular(_))));
    }
    assert!(remove_pm1_singularity(&Matrix2C::identity(), 0.0.into()).is_err());
}

#[test]
fn i1_slope_matches_difference_quotient() {
    let h = 1e-6;
    for mu in [I, Complex64::new(0.4, 1.3), Complex64::new(-2.0, 0.5)] {
        let fd = (i1_factor(mu + h).unwrap() - i1_factor(mu - h).unwrap()).scale_real(0.5 / h);
        assert!(fd.distance(&i1_factor_slope(mu).unwrap()) < 1e-8);
    }
}

#[test]
fn reconstruction_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let (b1, b2) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let di = rng.gen_range(0.2..1.0);
        let y = rng.gen_range(-100.0..100.0);
        let eta = rng.gen_range(-0.5..0.5);

        let r = reconstruct(&expand_at_i(0.0, b1, b2, di).unwrap(), y).unwrap();
        assert!((r.u_hat + b1 + b2).abs() < 1e-14);
        assert!((r.x - y - 2.0 * di.ln()).abs() < 1e-12 * (1.0 + y.abs()));

        let r = reconstruct(&expand_at_i(eta, b1, b2, di).unwrap(), y).unwrap();
        assert!((r.x - y - 2.0 * ((1.0 - eta) * di).ln()).abs() < 1e-12 * (1.0 + y.abs()));

        // First-order variation around the unperturbed expansion diag(δ(i), 1/δ(i)).
        let base = ExpansionAtI {
            a1: di,
            a2: 0.0,
            a3: 0.0,
        };
        let da = ExpansionAtI {
            a1: 0.0,
            a2: b1 / di,
            a3: b2 * di,
        };
        let v = reconstruct_variation(&base, &da).unwrap();
        assert!((v.u_hat + b1 + b2).abs() < 1e-14);
    }
}

#[test]
fn dual_path_equality() {
    let rc = ReflectionCoefficient::model(0.8, 0.5, 0.7).unwrap();
    let spec = QuadratureSpec::default();
    for xi in [0.3, 0.7, 1.0, 1.5, 1.9, -0.22, -0.125, -0.05] {
        let cs = coeffs_for(&rc, xi, &spec).unwrap();
        let shift = CauchyEngine::new(&rc, xi, spec).unwrap().y_shift().unwrap();
        for t in [1e2, 1e3, 1e4] {
            let a = assemble_leading(&rc, xi, t, &spec).unwrap();
            let closed: f64 = cs.iter().map(|c| c.term_y(t)).sum();
            let envelope: f64 = cs.iter().map(|c| c.envelope(t)).sum();
            assert!((a.u_hat - closed).abs() < 1e-9 * envelope, "xi = {xi}, t = {t}");
            assert!((a.x_minus_y - shift).abs() < 1e-12);
            assert!((a.u_hat + a.beta1 + a.beta2).abs() < 1e-14);
            let corrected = 2.0 * ((1.0 - a.eta) * a.delta_i).ln();
            assert!((a.x_minus_y_corrected - corrected).abs() < 1e-14);
        }
    }
}

proptest! {
    #[test]
    fn assembly_vanishes_without_reflection(xi in prop_oneof![0.01f64..1.99, -0.249f64..-0.01], t in 10.0f64..1e5) {
        let a = assemble_leading(&ReflectionCoefficient::zero(), xi, t, &QuadratureSpec::default()).unwrap();
        prop_assert_eq!(a.u_hat, 0.0);
        prop_assert_eq!(a.x_minus_y, 0.0);
    }

    #[test]
    fn matrix_inverse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_unimodular(&mut rng);
        let p = m * m.inverse().unwrap();
        prop_assert!(p.distance(&Matrix2C::identity()) < 1e-12 * (1.0 + m.max_abs() * m.max_abs()));
    }
}
