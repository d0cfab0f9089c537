//! Observables extracted from simulation snapshots.

use std::f64::consts::PI;

use num_complex::Complex64;
use realfft::RealFftPlanner;
use rustfft::FftPlanner;

use serde::{Deserialize, Serialize};

use super::{FieldState, SimConfig, Simulator};
use crate::error::{Error, Result};
use crate::geometry::{classify_sector, stationary_points, SectorClass};

/// Envelope values below this are treated as numerical noise.
pub const DEFAULT_NOISE_FLOOR: f64 = 1e-13;

/// Oscillations required inside a window before a wavenumber is trusted.
const MIN_OSCILLATIONS: f64 = 6.0;

/// Zero-padded length of windowed spectra.
const PADDED_LEN: usize = 1 << 16;

/// Minimum padding on each side of an envelope window.
const ENVELOPE_PAD: f64 = 20.0;

/// Wavenumber windows span this many radians of the predicted oscillation
/// on each side of the ray.
pub const WAVENUMBER_WINDOW: f64 = 22.0;

/// Half-width in `ζ̃` of the windows used for envelopes on oscillatory rays.
pub const ENVELOPE_HALF_WIDTH: f64 = 0.05;

/// Half-width in `ζ̃` of the windows used on fast-decay rays.
pub const DECAY_HALF_WIDTH: f64 = 0.25;

/// Linear dispersion relation `ω(q) = 2q / (1 + q²)`.
pub fn linear_frequency(q: f64) -> f64 {
    2.0 * q / (1.0 + q * q)
}

/// Analytic signal `u + i H[u]` of a periodic real sequence.
pub fn analytic_signal(u: &[f64]) -> Vec<Complex64> {
    let n = u.len();
    let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, b) in buf.iter_mut().enumerate() {
        if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
            continue;
        }
        *b *= if k < n.div_ceil(2) { 2.0 } else { 0.0 };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    buf.iter_mut().for_each(|b| *b *= inv_n);
    buf
}

/// Grid indices covering `[lo, hi]`, wrapped periodically around the box.
fn window_indices(config: &SimConfig, lo: f64, hi: f64) -> Result<Vec<usize>> {
    let n = config.modes as i64;
    let dx = config.dx();
    let a = ((lo + config.half_length) / dx).round() as i64;
    let b = ((hi + config.half_length) / dx).round() as i64;
    if b < a + 2 {
        return Err(Error::InsufficientData(format!(
            "window [{lo}, {hi}] holds fewer than three grid points"
        )));
    }
    if b - a >= n {
        return Err(Error::InsufficientData(format!(
            "window [{lo}, {hi}] is longer than the periodic box"
        )));
    }
    Ok((a..=b).map(|j| j.rem_euclid(n) as usize).collect())
}

fn window_values(state: &FieldState, config: &SimConfig, lo: f64, hi: f64) -> Result<Vec<f64>> {
    Ok(window_indices(config, lo, hi)?
        .into_iter()
        .map(|j| state.u_tilde[j])
        .collect())
}

/// `max |ũ|` over `x ∈ t[ζ_lo, ζ_hi]` (periodically wrapped).
pub fn window_max_abs(state: &FieldState, config: &SimConfig, zeta_lo: f64, zeta_hi: f64) -> Result<f64> {
    let v = window_values(state, config, state.t * zeta_lo, state.t * zeta_hi)?;
    Ok(v.iter().fold(0.0, |m, u| m.max(u.abs())))
}

/// Local oscillation envelope of `ũ` on the ray `ζ̃`, averaged over
/// `x ∈ t(ζ̃ - δ, ζ̃ + δ)`.
///
/// The window is padded on both sides, detrended and tapered in the pads;
/// wavenumbers below half of the dominant one are removed before taking the
/// analytic signal, so non-oscillatory structures nearby do not leak in.
pub fn window_envelope(state: &FieldState, config: &SimConfig, zeta_tilde: f64, half_width: f64) -> Result<f64> {
    if !(state.t > 0.0) || !(half_width > 0.0) {
        return Err(Error::Domain("envelope needs t > 0 and a positive window".into()));
    }
    let center = zeta_tilde * state.t;
    let inner = half_width * state.t;
    let pad = inner.max(ENVELOPE_PAD);
    let mut v = window_values(state, config, center - inner - pad, center + inner + pad)?;
    let len = v.len();
    let n_pad = ((pad / config.dx()).round() as usize).min(len / 2);

    let xs: Vec<f64> = (0..len).map(|i| i as f64).collect();
    let mx = xs.iter().sum::<f64>() / len as f64;
    let my = v.iter().sum::<f64>() / len as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = xs.iter().zip(&v).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    for (i, y) in v.iter_mut().enumerate() {
        *y -= my + slope * (i as f64 - mx);
        let edge = i.min(len - 1 - i);
        if edge < n_pad {
            *y *= 0.5 - 0.5 * (PI * edge as f64 / n_pad as f64).cos();
        }
    }

    let spec = LocalSpectrum::from_samples(&v, config.dx(), center, inner + pad)?;
    let q_peak = *spec
        .dominant(1, spec.resolution(), 0.0)
        .first()
        .ok_or_else(|| Error::InsufficientData(format!("no oscillation near zeta = {zeta_tilde}")))?;
    let q_min = 0.5 * q_peak;

    let mut buf: Vec<Complex64> = v.iter().map(|&y| Complex64::new(y, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(len).process(&mut buf);
    let dq = 2.0 * PI / (len as f64 * config.dx());
    for (k, b) in buf.iter_mut().enumerate() {
        let positive = k > 0 && 2 * k < len;
        *b *= if positive && k as f64 * dq >= q_min { 2.0 } else { 0.0 };
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let inv = 1.0 / len as f64;
    let core = &buf[n_pad..len - n_pad];
    if core.is_empty() {
        return Err(Error::InsufficientData("envelope window is empty".into()));
    }
    Ok(core.iter().map(|z| z.norm() * inv).sum::<f64>() / core.len() as f64)
}

/// Hann-windowed, zero-padded amplitude spectrum of `ũ` on `[center - w, center + w]`.
#[derive(Debug, Clone)]
pub struct LocalSpectrum {
    pub center: f64,
    pub half_width: f64,
    /// Wavenumber spacing of `magnitude`.
    pub dq: f64,
    pub magnitude: Vec<f64>,
}

impl LocalSpectrum {
    pub fn new(state: &FieldState, config: &SimConfig, center: f64, half_width: f64) -> Result<Self> {
        let v = window_values(state, config, center - half_width, center + half_width)?;
        Self::from_samples(&v, config.dx(), center, half_width)
    }

    /// Spectrum of already extracted samples with spacing `dx`.
    pub fn from_samples(samples: &[f64], dx: f64, center: f64, half_width: f64) -> Result<Self> {
        let len = samples.len();
        if !(3..=PADDED_LEN).contains(&len) {
            return Err(Error::Domain(format!(
                "window of {len} samples is outside [3, {PADDED_LEN}]"
            )));
        }
        let mut input = vec![0.0; PADDED_LEN];
        for (i, u) in samples.iter().enumerate() {
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / (len - 1) as f64).cos();
            input[i] = w * u;
        }
        let fft = RealFftPlanner::<f64>::new().plan_fft_forward(PADDED_LEN);
        let mut out = fft.make_output_vec();
        fft.process(&mut input, &mut out).expect("fixed buffer sizes");
        Ok(Self {
            center,
            half_width,
            dq: 2.0 * PI / (PADDED_LEN as f64 * dx),
            magnitude: out.iter().map(|c| c.norm()).collect(),
        })
    }

    /// Resolution scale `π / w` of the window.
    pub fn resolution(&self) -> f64 {
        PI / self.half_width
    }

    /// Local maxima above `q_min`, refined by parabolic interpolation of the
    /// log-magnitude, strongest first.
    pub fn peaks(&self, q_min: f64) -> Vec<(f64, f64)> {
        let m = &self.magnitude;
        let mut found = Vec::new();
        for k in 1..m.len() - 1 {
            let q = k as f64 * self.dq;
            if q < q_min || !(m[k] > m[k - 1] && m[k] >= m[k + 1]) || m[k] == 0.0 {
                continue;
            }
            let (a, b, c) = (m[k - 1].max(1e-300).ln(), m[k].ln(), m[k + 1].max(1e-300).ln());
            let denom = a - 2.0 * b + c;
            let shift = if denom < 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
            found.push(((k as f64 + shift) * self.dq, m[k]));
        }
        found.sort_by(|x, y| y.1.total_cmp(&x.1));
        found
    }

    /// The `count` strongest peaks at least `min_separation` apart, sorted by wavenumber.
    pub fn dominant(&self, count: usize, q_min: f64, min_separation: f64) -> Vec<f64> {
        let mut chosen: Vec<f64> = Vec::new();
        for (q, _) in self.peaks(q_min) {
            if chosen.iter().all(|c| (c - q).abs() >= min_separation) {
                chosen.push(q);
            }
            if chosen.len() == count {
                break;
            }
        }
        chosen.sort_by(f64::total_cmp);
        chosen
    }
}

impl FieldState {
    /// Dominant local wavenumber of `ũ` around `x = ζ̃ t`.
    pub fn local_wavenumber(&self, config: &SimConfig, zeta_tilde: f64, half_width: f64) -> Result<f64> {
        let spec = LocalSpectrum::new(self, config, zeta_tilde * self.t, half_width)?;
        let q = *spec
            .dominant(1, spec.resolution(), 0.0)
            .first()
            .ok_or_else(|| Error::InsufficientData(format!("no spectral peak near zeta = {zeta_tilde}")))?;
        let oscillations = 2.0 * half_width * q / (2.0 * PI);
        if oscillations < MIN_OSCILLATIONS {
            return Err(Error::InsufficientData(format!(
                "only {oscillations:.1} oscillations of wavenumber {q:.4} fit the window"
            )));
        }
        Ok(q)
    }

    /// The `count` dominant wavenumbers around `x = ζ̃ t`, ascending.
    pub fn local_wavenumbers(
        &self,
        config: &SimConfig,
        zeta_tilde: f64,
        half_width: f64,
        count: usize,
    ) -> Result<Vec<f64>> {
        let spec = LocalSpectrum::new(self, config, zeta_tilde * self.t, half_width)?;
        let r = spec.resolution();
        let qs = spec.dominant(count, r, 2.0 * r);
        if qs.len() < count {
            return Err(Error::InsufficientData(format!(
                "found {} of {count} spectral peaks near zeta = {zeta_tilde}",
                qs.len()
            )));
        }
        Ok(qs)
    }
}

/// Least-squares slope of `ln(envelope)` against `ln t`.
///
/// Samples below `noise_floor` are clamped to it, which can only make a
/// decaying signal look slower; the earliest sample must be above the floor.
pub fn envelope_exponent(samples: &[(f64, f64)], noise_floor: f64) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (t0, e0) = sorted[0];
    let t1 = sorted[sorted.len() - 1].0;
    if !(t0 > 0.0) || t1 < 4.0 * t0 {
        return Err(Error::InsufficientData(format!(
            "sampling times must span a factor of 4, got [{t0}, {t1}]"
        )));
    }
    if !(e0 > noise_floor) {
        return Err(Error::InsufficientData(format!(
            "envelope {e0:e} at t = {t0} is below the noise floor"
        )));
    }
    let pts: Vec<(f64, f64)> = sorted.iter().map(|&(t, e)| (t.ln(), e.max(noise_floor).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// Frequency of a single small Fourier mode `ũ_0 = a cos(q_n x)` measured from
/// the phase drift of its coefficient over `[0, t_end]`.
pub fn measure_mode_frequency(config: &SimConfig, mode: usize, amplitude: f64, t_end: f64) -> Result<f64> {
    if mode == 0 || mode >= config.modes / 2 {
        return Err(Error::Domain(format!("mode index {mode} out of range")));
    }
    let q = mode as f64 * PI / config.half_length;
    let mut sim = Simulator::from_profile(*config, |x| amplitude * (q * x).cos())?;
    let fft = RealFftPlanner::<f64>::new().plan_fft_forward(config.modes);
    let phase_of = |u: &[f64]| -> f64 {
        let mut input = u.to_vec();
        let mut out = fft.make_output_vec();
        fft.process(&mut input, &mut out).expect("fixed buffer sizes");
        out[mode].arg()
    };
    let sample = 0.5;
    let count = (t_end / sample).ceil().max(2.0) as usize;
    let mut times = vec![0.0];
    let mut phases = vec![phase_of(&sim.state().u_tilde)];
    for i in 1..=count {
        let t = t_end * i as f64 / count as f64;
        sim.advance_to(t)?;
        let mut p = phase_of(&sim.state().u_tilde);
        let prev = *phases.last().expect("non-empty");
        while p - prev > PI {
            p -= 2.0 * PI;
        }
        while p - prev < -PI {
            p += 2.0 * PI;
        }
        times.push(t);
        phases.push(p);
    }
    let n = times.len() as f64;
    let mt = times.iter().sum::<f64>() / n;
    let mp = phases.iter().sum::<f64>() / n;
    let num: f64 = times.iter().zip(&phases).map(|(t, p)| (t - mt) * (p - mp)).sum();
    let den: f64 = times.iter().map(|t| (t - mt) * (t - mt)).sum();
    Ok(-num / den)
}

/// Predicted local wavenumbers `2κ_j(ζ̃)` on a ray, ascending; empty off the
/// oscillatory sectors.
pub fn predicted_wavenumbers(zeta_tilde: f64) -> Vec<f64> {
    if !classify_sector(zeta_tilde).is_oscillatory() {
        return Vec::new();
    }
    match stationary_points(zeta_tilde) {
        Ok(stat) => [Some(stat.zero), stat.one]
            .iter()
            .flatten()
            .map(|p| 2.0 * p.kappa)
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// Measured versus predicted observables on one ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayReport {
    pub zeta_tilde: f64,
    pub sector: SectorClass,
    /// `"oscillatory"` or `"fast"`.
    pub label: String,
    pub k_loc_measured: Option<f64>,
    pub k_loc_predicted: Option<f64>,
    pub rel_err: Option<f64>,
    pub envelope_exponent: Option<f64>,
    /// Envelope (oscillatory rays) or `max |ũ|` (fast rays) at each snapshot time.
    pub amplitudes: Vec<(f64, f64)>,
}

/// Compares the snapshots with the leading-order predictions on `ζ̃`.
///
/// Oscillatory rays get the local wavenumber at the latest snapshot against
/// `2κ_0(ζ̃)` and the exponent of the local envelope; fast-decay rays get the
/// exponent of `max |ũ|` over `ζ̃ ± 1/4`. Observables that the data cannot
/// support are left empty.
pub fn ray_report(states: &[FieldState], config: &SimConfig, zeta_tilde: f64) -> Result<RayReport> {
    let last = states
        .iter()
        .max_by(|a, b| a.t.total_cmp(&b.t))
        .ok_or_else(|| Error::InsufficientData("no snapshots".into()))?;
    let sector = classify_sector(zeta_tilde);
    let fast = matches!(sector, SectorClass::FastDecayLeft | SectorClass::FastDecayRight);
    let mut amplitudes = Vec::with_capacity(states.len());
    for s in states {
        let a = if fast {
            window_max_abs(s, config, zeta_tilde - DECAY_HALF_WIDTH, zeta_tilde + DECAY_HALF_WIDTH)?
        } else {
            match window_envelope(s, config, zeta_tilde, ENVELOPE_HALF_WIDTH) {
                Ok(a) => a,
                Err(Error::InsufficientData(_)) => continue,
                Err(e) => return Err(e),
            }
        };
        amplitudes.push((s.t, a));
    }
    let envelope_exponent = envelope_exponent(&amplitudes, DEFAULT_NOISE_FLOOR).ok();
    let k_loc_predicted = predicted_wavenumbers(zeta_tilde).first().copied();
    let k_loc_measured = match k_loc_predicted {
        Some(q) if q > 0.0 => match last.local_wavenumber(config, zeta_tilde, WAVENUMBER_WINDOW / q) {
            Ok(k) => Some(k),
            Err(Error::InsufficientData(_)) => None,
            Err(e) => return Err(e),
        },
        _ => None,
    };
    let rel_err = match (k_loc_measured, k_loc_predicted) {
        (Some(m), Some(p)) => Some((m - p) / p),
        _ => None,
    };
    Ok(RayReport {
        zeta_tilde,
        sector,
        label: if fast { "fast" } else { "oscillatory" }.to_string(),
        k_loc_measured,
        k_loc_predicted,
        rel_err,
        envelope_exponent,
        amplitudes,
    })
}
