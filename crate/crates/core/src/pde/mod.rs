//! Fourier pseudospectral integration of the zero-background equation
//! `m̃_t + (ω̃ m̃)_x = 0`, `m̃ = ũ - ũ_xx + 1`, `ω̃ = ũ² - ũ_x² + 2ũ`,
//! on the periodic box `[-L, L)`.
//!
//! The state is the spectrum of `m̃ - 1`. Its zero mode never changes (the
//! right-hand side is a derivative), so the mean is conserved exactly.

mod analysis;

pub use analysis::{
    analytic_signal, envelope_exponent, linear_frequency, measure_mode_frequency, predicted_wavenumbers, ray_report,
    window_envelope, window_max_abs, LocalSpectrum, RayReport, DECAY_HALF_WIDTH, DEFAULT_NOISE_FLOOR,
    ENVELOPE_HALF_WIDTH, WAVENUMBER_WINDOW,
};

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Initial profile `ũ_0(x) = amplitude · exp(-(x - center)² / width²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianProfile {
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
}

impl Default for GaussianProfile {
    fn default() -> Self {
        Self {
            amplitude: 0.05,
            width: 5.0,
            center: 0.0,
        }
    }
}

impl GaussianProfile {
    pub fn eval(&self, x: f64) -> f64 {
        let z = (x - self.center) / self.width;
        self.amplitude * (-z * z).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub half_length: f64,
    pub modes: usize,
    pub dt: f64,
    pub t_end: f64,
    /// Fraction of the resolved band kept in nonlinear products.
    pub dealias: f64,
    pub profile: GaussianProfile,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            half_length: 1024.0,
            modes: 1 << 14,
            dt: 5e-3,
            t_end: 400.0,
            dealias: 2.0 / 3.0,
            profile: GaussianProfile::default(),
        }
    }
}

/// Stability bound of classical RK4 on the imaginary axis, with margin.
const RK4_LIMIT: f64 = 2.5;

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_length > 0.0) || !self.half_length.is_finite() {
            return Err(Error::Domain(format!(
                "half-length must be positive, got {}",
                self.half_length
            )));
        }
        if self.modes < 16 || !self.modes.is_power_of_two() {
            return Err(Error::Domain(format!(
                "modes must be a power of two >= 16, got {}",
                self.modes
            )));
        }
        if !(self.dt > 0.0) || !(self.t_end >= 0.0) {
            return Err(Error::Domain("dt must be positive and t_end non-negative".into()));
        }
        if !(self.dealias > 0.0 && self.dealias <= 1.0) {
            return Err(Error::Domain(format!(
                "dealias fraction must lie in (0, 1], got {}",
                self.dealias
            )));
        }
        if !(self.profile.width > 0.0) || !self.profile.amplitude.is_finite() {
            return Err(Error::Domain(
                "initial profile needs a positive width and finite amplitude".into(),
            ));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.modes as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.modes).map(|j| -self.half_length + j as f64 * dx).collect()
    }

    /// Wavenumbers `q_k = k π / L`, `k = 0..=N/2`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..=self.modes / 2).map(|k| k as f64 * PI / self.half_length).collect()
    }

    /// Largest wavenumber retained by the dealiasing filter.
    pub fn cutoff(&self) -> f64 {
        self.dealias * PI / self.dx()
    }

    /// Grid index nearest to `x`, if inside the box.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let j = ((x + self.half_length) / self.dx()).round();
        (j >= 0.0 && j < self.modes as f64).then_some(j as usize)
    }
}

/// Grid values at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub t: f64,
    pub u_tilde: Vec<f64>,
    pub m_tilde: Vec<f64>,
}

impl FieldState {
    pub fn max_abs_u(&self) -> f64 {
        self.u_tilde.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Conservation and boundary diagnostics of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunDiagnostics {
    pub t: f64,
    pub steps: u64,
    pub mean_initial: f64,
    pub mean_final: f64,
    pub mean_relative_drift: f64,
    /// `max |ũ|` over the outer 5% of the box on either side.
    pub tail_max: f64,
    pub max_abs_u: f64,
}

/// Forward/inverse real transforms with their scratch space.
struct Transforms {
    n: usize,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
    real: Vec<f64>,
    spec: Vec<Complex64>,
    scratch_fwd: Vec<Complex64>,
    scratch_inv: Vec<Complex64>,
}

impl Transforms {
    fn new(n: usize) -> Self {
        let mut planner = RealFftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Self {
            n,
            real: forward.make_input_vec(),
            spec: forward.make_output_vec(),
            scratch_fwd: forward.make_scratch_vec(),
            scratch_inv: inverse.make_scratch_vec(),
            forward,
            inverse,
        }
    }

    /// Unnormalised forward transform of `input` into `out`.
    fn forward(&mut self, input: &[f64], out: &mut [Complex64]) {
        self.real.copy_from_slice(input);
        self.forward
            .process_with_scratch(&mut self.real, out, &mut self.scratch_fwd)
            .expect("buffer sizes are fixed at construction");
    }

    /// Normalised inverse transform of `input` into `out`.
    fn inverse(&mut self, input: &[Complex64], out: &mut [f64]) {
        self.spec.copy_from_slice(input);
        let last = self.spec.len() - 1;
        self.spec[0].im = 0.0;
        self.spec[last].im = 0.0;
        self.inverse
            .process_with_scratch(&mut self.spec, out, &mut self.scratch_inv)
            .expect("buffer sizes are fixed at construction");
        let inv_n = 1.0 / self.n as f64;
        out.iter_mut().for_each(|v| *v *= inv_n);
    }
}

/// `ũ = (1 - ∂_x²)^{-1}(m̃ - 1)` on the periodic grid of half-length `half_length`.
pub fn helmholtz_solve(m_tilde: &[f64], half_length: f64) -> Result<Vec<f64>> {
    let n = m_tilde.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("grid size must be even, got {n}")));
    }
    let mut tr = Transforms::new(n);
    let shifted: Vec<f64> = m_tilde.iter().map(|m| m - 1.0).collect();
    let mut spec = vec![Complex64::new(0.0, 0.0); n / 2 + 1];
    tr.forward(&shifted, &mut spec);
    for (k, s) in spec.iter_mut().enumerate() {
        let q = k as f64 * PI / half_length;
        *s /= 1.0 + q * q;
    }
    let mut out = vec![0.0; n];
    tr.inverse(&spec, &mut out);
    Ok(out)
}

/// Apply `1 - ∂_x²` spectrally (the inverse of [`helmholtz_solve`] up to the `+1`).
pub fn helmholtz_apply(u: &[f64], half_length: f64) -> Result<Vec<f64>> {
    let n = u.len();
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("grid size must be even, got {n}")));
    }
    let mut tr = Transforms::new(n);
    let mut spec = vec![Complex64::new(0.0, 0.0); n / 2 + 1];
    tr.forward(u, &mut spec);
    for (k, s) in spec.iter_mut().enumerate() {
        let q = k as f64 * PI / half_length;
        *s *= 1.0 + q * q;
    }
    let mut out = vec![0.0; n];
    tr.inverse(&spec, &mut out);
    Ok(out)
}

pub struct Simulator {
    config: SimConfig,
    q: Vec<f64>,
    mask: Vec<f64>,
    inv_helmholtz: Vec<f64>,
    /// Spectrum of `m̃ - 1`.
    state: Vec<Complex64>,
    t: f64,
    steps: u64,
    mean_initial: f64,
    tr: Transforms,
    work: Work,
}

/// Per-instance buffers for one right-hand-side evaluation.
struct Work {
    k: [Vec<Complex64>; 4],
    stage: Vec<Complex64>,
    spec: Vec<Complex64>,
    u: Vec<f64>,
    ux: Vec<f64>,
    omega: Vec<f64>,
    m: Vec<f64>,
}

impl Simulator {
    /// Simulator started from the configured Gaussian.
    pub fn new(config: SimConfig) -> Result<Self> {
        let profile = config.profile;
        Self::from_profile(config, |x| profile.eval(x))
    }

    /// Simulator started from an arbitrary smooth periodic `ũ_0`.
    pub fn from_profile(config: SimConfig, u0: impl Fn(f64) -> f64) -> Result<Self> {
        config.validate()?;
        let n = config.modes;
        let q = config.wavenumbers();
        let cutoff = config.cutoff();
        let mask: Vec<f64> = q
            .iter()
            .map(|&k| if k <= cutoff * (1.0 + 1e-12) { 1.0 } else { 0.0 })
            .collect();
        let inv_helmholtz: Vec<f64> = q.iter().map(|k| 1.0 / (1.0 + k * k)).collect();
        let mut tr = Transforms::new(n);
        let u0: Vec<f64> = config.grid().into_iter().map(u0).collect();
        let mut state = vec![Complex64::new(0.0, 0.0); n / 2 + 1];
        tr.forward(&u0, &mut state);
        for (s, k) in state.iter_mut().zip(&q) {
            *s *= 1.0 + k * k;
        }
        let zeros = || vec![Complex64::new(0.0, 0.0); n / 2 + 1];
        let work = Work {
            k: [zeros(), zeros(), zeros(), zeros()],
            stage: zeros(),
            spec: zeros(),
            u: vec![0.0; n],
            ux: vec![0.0; n],
            omega: vec![0.0; n],
            m: vec![0.0; n],
        };
        let mean_initial = state[0].re / n as f64;
        let sim = Self {
            config,
            q,
            mask,
            inv_helmholtz,
            state,
            t: 0.0,
            steps: 0,
            mean_initial,
            tr,
            work,
        };
        sim.check_cfl(&u0)?;
        Ok(sim)
    }

    fn check_cfl(&self, u0: &[f64]) -> Result<()> {
        let umax = u0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // Linear frequencies 2q/(1+q²) are bounded by 1; advection by ω̃ ≈ 2ũ.
        let speed = 1.0 + (2.0 * umax + 2.0 * umax * umax) * self.config.cutoff();
        if self.config.dt * speed > RK4_LIMIT {
            return Err(Error::Domain(format!(
                "dt = {} violates the stability bound (dt · {speed:.3} > {RK4_LIMIT})",
                self.config.dt
            )));
        }
        Ok(())
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Mean of `m̃ - 1` computed from the grid values.
    pub fn mean(&mut self) -> f64 {
        let s = self.state();
        s.m_tilde.iter().map(|m| m - 1.0).sum::<f64>() / s.m_tilde.len() as f64
    }

    pub fn state(&mut self) -> FieldState {
        let n = self.config.modes;
        let mut spec = self.state.clone();
        let mut m = vec![0.0; n];
        self.tr.inverse(&spec, &mut m);
        m.iter_mut().for_each(|v| *v += 1.0);
        for (s, w) in spec.iter_mut().zip(&self.inv_helmholtz) {
            *s *= w;
        }
        let mut u = vec![0.0; n];
        self.tr.inverse(&spec, &mut u);
        FieldState {
            t: self.t,
            u_tilde: u,
            m_tilde: m,
        }
    }

    /// `-i q · P[(ω̃ m̃)]` for the spectrum `input`, written to `work.k[slot]`.
    fn rhs(&mut self, use_stage: bool, slot: usize) {
        let w = &mut self.work;
        let input = if use_stage { &w.stage } else { &self.state };
        for (k, (s, &v)) in w.spec.iter_mut().zip(input.iter()).enumerate() {
            *s = v * (self.mask[k] * self.inv_helmholtz[k]);
        }
        self.tr.inverse(&w.spec, &mut w.u);
        for k in 0..input.len() {
            w.spec[k] *= Complex64::new(0.0, self.q[k]);
        }
        self.tr.inverse(&w.spec, &mut w.ux);
        for ((s, &v), &m) in w.spec.iter_mut().zip(input.iter()).zip(&self.mask) {
            *s = v * m;
        }
        self.tr.inverse(&w.spec, &mut w.m);
        for j in 0..w.u.len() {
            let u = w.u[j];
            w.omega[j] = u * u - w.ux[j] * w.ux[j] + 2.0 * u;
        }
        self.tr.forward(&w.omega, &mut w.spec);
        for k in 0..w.spec.len() {
            w.spec[k] *= self.mask[k];
        }
        self.tr.inverse(&w.spec, &mut w.omega);
        for j in 0..w.u.len() {
            w.omega[j] *= w.m[j] + 1.0;
        }
        let out = &mut w.k[slot];
        self.tr.forward(&w.omega, out);
        for ((o, &q), &m) in out.iter_mut().zip(&self.q).zip(&self.mask) {
            *o *= Complex64::new(0.0, -q * m);
        }
    }

    fn stage_from(&mut self, slot: usize, h: f64) {
        let w = &mut self.work;
        for k in 0..self.state.len() {
            w.stage[k] = self.state[k] + w.k[slot][k] * h;
        }
    }

    /// One classical RK4 step of size `h`.
    pub fn step_by(&mut self, h: f64) -> Result<()> {
        self.rhs(false, 0);
        self.stage_from(0, 0.5 * h);
        self.rhs(true, 1);
        self.stage_from(1, 0.5 * h);
        self.rhs(true, 2);
        self.stage_from(2, h);
        self.rhs(true, 3);
        let w = &self.work;
        let c = h / 6.0;
        for k in 1..self.state.len() {
            self.state[k] += (w.k[0][k] + (w.k[1][k] + w.k[2][k]) * 2.0 + w.k[3][k]) * c;
        }
        self.t += h;
        self.steps += 1;
        if self.steps.is_multiple_of(64) {
            self.check_finite()?;
        }
        Ok(())
    }

    pub fn step(&mut self) -> Result<()> {
        self.step_by(self.config.dt)
    }

    fn check_finite(&self) -> Result<()> {
        let bound = 1e6 * self.config.modes as f64;
        if let Some(bad) = self
            .state
            .iter()
            .find(|s| !s.re.is_finite() || !s.im.is_finite() || s.norm() > bound)
        {
            return Err(Error::Integration {
                t: self.t,
                reason: format!("spectrum blew up (mode value {bad}) after {} steps", self.steps),
            });
        }
        Ok(())
    }

    /// Advance to `target` with steps of `dt`, shortening the last one if needed.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        if target < self.t - 1e-12 {
            return Err(Error::Domain(format!(
                "cannot integrate backwards from {} to {target}",
                self.t
            )));
        }
        let dt = self.config.dt;
        let remaining = target - self.t;
        let full = (remaining / dt + 1e-9).floor() as u64;
        for _ in 0..full {
            self.step_by(dt)?;
        }
        let rest = target - self.t;
        if rest > 1e-9 * dt {
            self.step_by(rest)?;
        }
        self.t = target;
        self.check_finite()
    }

    /// Snapshots at the requested (ascending) times.
    pub fn run(&mut self, times: &[f64]) -> Result<Vec<FieldState>> {
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            self.advance_to(t)?;
            out.push(self.state());
        }
        Ok(out)
    }

    pub fn diagnostics(&mut self) -> RunDiagnostics {
        let s = self.state();
        let n = s.u_tilde.len();
        let mean_final = s.m_tilde.iter().map(|m| m - 1.0).sum::<f64>() / n as f64;
        let edge = n / 20;
        let tail_max = s.u_tilde[..edge]
            .iter()
            .chain(&s.u_tilde[n - edge..])
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let drift = if self.mean_initial == 0.0 {
            mean_final.abs()
        } else {
            ((mean_final - self.mean_initial) / self.mean_initial).abs()
        };
        RunDiagnostics {
            t: self.t,
            steps: self.steps,
            mean_initial: self.mean_initial,
            mean_final,
            mean_relative_drift: drift,
            tail_max,
            max_abs_u: s.max_abs_u(),
        }
    }
}
