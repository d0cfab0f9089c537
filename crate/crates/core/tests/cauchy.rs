mod common;

use std::f64::consts::PI;

use common::{interior, midpoint, model_log_gap, model_log_gap_slope, mu_oracle};
use mch_core::cauchy::{chi_at, delta_eval};
use mch_core::{CauchyEngine, QuadratureSpec, ReflectionCoefficient};
use num_complex::Complex64;
use proptest::prelude::*;

const PANELS: usize = 1_000_000;
const MODEL: (f64, f64, f64) = (0.8, 0.5, 0.7);

fn rc() -> ReflectionCoefficient {
    ReflectionCoefficient::model(MODEL.0, MODEL.1, MODEL.2).unwrap()
}

fn lg(s: f64) -> f64 {
    model_log_gap(MODEL.0, MODEL.1, s)
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// `∫ g` over the positive half of the contour, bounded pieces only, plus
/// the unbounded piece `(mu_1, ∞)` mapped by `s = 1/u` when present.
fn half_contour<G: Fn(f64) -> Complex64>(xi: f64, g: G) -> Complex64 {
    let (mu0, mu1) = mu_oracle(xi);
    let re = |f: &dyn Fn(f64) -> f64, a, b| midpoint(f, a, b, PANELS);
    let mut total = Complex64::new(re(&|s| g(s).re, 1.0 / mu0, mu0), re(&|s| g(s).im, 1.0 / mu0, mu0));
    if let Some(mu1) = mu1 {
        total += Complex64::new(re(&|s| g(s).re, 0.0, 1.0 / mu1), re(&|s| g(s).im, 0.0, 1.0 / mu1));
        let tail = |u: f64| g(1.0 / u) / (u * u);
        total += Complex64::new(re(&|u| tail(u).re, 0.0, 1.0 / mu1), re(&|u| tail(u).im, 0.0, 1.0 / mu1));
    }
    total
}

/// `ln delta(mu)` by brute force: the negative half is folded onto the
/// positive one with `s -> -s`.
fn log_delta_oracle(xi: f64, mu: Complex64) -> Complex64 {
    let sum = half_contour(xi, |s| lg(s) * (1.0 / (s - mu) - 1.0 / (s + mu)));
    sum / Complex64::new(0.0, 2.0 * PI)
}

fn xis() -> Vec<f64> {
    let mut v = interior(0.0, 2.0, 12);
    v.extend(interior(-0.25, 0.0, 8));
    v
}

#[test]
fn delta_at_i_matches_riemann_oracle() {
    let rc = rc();
    for xi in xis() {
        let engine = CauchyEngine::new(&rc, xi, spec()).unwrap();
        let oracle = half_contour(xi, |s| Complex64::new(lg(s) / (s * s + 1.0), 0.0)).re / PI;
        let got = engine.delta_at_i().unwrap().ln();
        assert!((got - oracle).abs() < 1e-8, "xi = {xi}: {got} vs {oracle}");
        assert!((engine.y_shift().unwrap() - 2.0 * oracle).abs() < 2e-8);
    }
}

#[test]
fn delta_off_axis_matches_riemann_oracle() {
    let rc = rc();
    for xi in [1.0, 0.35, -0.125, -0.22] {
        for mu in [
            Complex64::new(0.5, 0.7),
            Complex64::new(-2.0, 0.3),
            Complex64::new(3.0, -1.5),
        ] {
            let got = delta_eval(&rc, xi, mu, &spec()).unwrap().ln();
            let want = log_delta_oracle(xi, mu);
            assert!((got - want).norm() < 1e-8, "xi = {xi}, mu = {mu}: {got} vs {want}");
        }
    }
}

#[test]
fn chi_matches_riemann_oracle() {
    let rc = rc();
    for xi in [1.5, 1.0, 0.4, -0.05, -0.125, -0.2] {
        let (mu0, mu1) = mu_oracle(xi);
        let l0 = lg(mu0);
        // Bounded pieces around ±mu_0, difference quotient against the value at mu_0.
        let mut sum = midpoint(|s| (lg(s) - l0) / (s - mu0), 1.0 / mu0, mu0, PANELS)
            + midpoint(|s| (lg(s) - l0) / (-s - mu0), 1.0 / mu0, mu0, PANELS);
        if let Some(mu1) = mu1 {
            let l1 = lg(mu1);
            sum += midpoint(|s| (lg(s) - l1) / (s - mu0), -1.0 / mu1, 1.0 / mu1, PANELS);
            // Unbounded pieces after integration by parts, mapped by s = ±1/u.
            let slope = |s: f64| model_log_gap_slope(MODEL.0, MODEL.1, s);
            sum -= midpoint(
                |u| (1.0 / u - mu0).ln() * slope(1.0 / u) / (u * u),
                0.0,
                1.0 / mu1,
                PANELS,
            );
            sum -= midpoint(
                |u| (mu0 + 1.0 / u).ln() * slope(-1.0 / u) / (u * u),
                0.0,
                1.0 / mu1,
                PANELS,
            );
        }
        let want = -sum / (2.0 * PI);
        let got = chi_at(&rc, xi, 0, &spec()).unwrap();
        assert!(got.re.abs() < 1e-8, "xi = {xi}: Re chi = {}", got.re);
        assert!((got.im - want).abs() < 1e-8, "xi = {xi}: {} vs {want}", got.im);
    }
}

#[test]
fn property_checks_across_rays() {
    let rc = rc();
    for xi in xis() {
        let engine = CauchyEngine::new(&rc, xi, spec()).unwrap();
        let d0 = engine.delta(Complex64::new(0.0, 0.0)).unwrap();
        assert!((d0 - 1.0).norm() < 1e-12, "xi = {xi}: delta(0) = {d0}");
        assert!(engine.log_delta_slope_at_i().unwrap().norm() < 1e-8);
        for j in 0..if xi < 0.0 { 2 } else { 1 } {
            assert!(engine.chi_at(j).unwrap().re.abs() < 1e-8);
        }
        let di = engine.delta_at_i().unwrap();
        assert!(di > 0.0 && di <= 1.0);
    }
}

#[test]
fn jump_condition_across_contour() {
    let rc = rc();
    let xi = 1.0;
    let engine = CauchyEngine::new(&rc, xi, spec()).unwrap();
    let eps = 1e-7;
    for s in [0.8, 1.0, 1.3, -0.9] {
        let up = engine.log_delta(Complex64::new(s, eps)).unwrap();
        let down = engine.log_delta(Complex64::new(s, -eps)).unwrap();
        assert!((up - down - lg(s)).norm() < 1e-5, "s = {s}: {}", up - down);
    }
}

#[test]
fn vanishing_reflection_is_trivial() {
    let rc = ReflectionCoefficient::zero();
    for xi in [1.0, -0.1] {
        let engine = CauchyEngine::new(&rc, xi, spec()).unwrap();
        assert_eq!(engine.delta_at_i().unwrap(), 1.0);
        assert_eq!(
            engine.delta(Complex64::new(0.3, 2.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reflection_symmetries(re in -5.0f64..5.0, im in 0.05f64..5.0, xi in prop::sample::select(vec![1.2, 0.5, -0.1, -0.2])) {
        let rc = rc();
        let engine = CauchyEngine::new(&rc, xi, spec()).unwrap();
        let mu = Complex64::new(re, im);
        let d = engine.log_delta(mu).unwrap();
        let neg = engine.log_delta(-mu).unwrap();
        let conj = engine.log_delta(mu.conj()).unwrap();
        prop_assert!((d + neg).norm() < 1e-9, "delta(-mu) delta(mu) = {}", (d + neg).exp());
        prop_assert!((d + conj.conj()).norm() < 1e-9);
    }
}
