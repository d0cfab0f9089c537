//! Reflection coefficients on the real line with the symmetries
//! `r(mu) = -conj(r(-mu)) = conj(r(1/mu))`.
//!
//! Any such function is fixed by its values on `[1, ∞)`: the interval
//! `(0, 1)` is reached through `mu -> 1/mu` and the negative axis through
//! `mu -> -mu`. Both concrete families below are defined on `[1, ∞)` only and
//! extended by those two rules, so the symmetries hold by construction.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `r(mu) = -A exp(-a w^2) exp(i b w)` with `w = mu - 1/mu`, for `mu >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianModel {
    pub amplitude: f64,
    pub width: f64,
    pub chirp: f64,
}

impl GaussianModel {
    pub fn new(amplitude: f64, width: f64, chirp: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(Error::Domain(format!("amplitude {amplitude} outside [0, 1]")));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::Domain(format!("width {width} must be positive")));
        }
        if !chirp.is_finite() {
            return Err(Error::Domain("chirp must be finite".into()));
        }
        Ok(Self {
            amplitude,
            width,
            chirp,
        })
    }

    fn base(&self, mu: f64) -> (Complex64, f64) {
        let w = mu - 1.0 / mu;
        let g = (-self.width * w * w).exp();
        let r = -self.amplitude * g * Complex64::from_polar(1.0, self.chirp * w);
        let abs_sq = self.amplitude * self.amplitude * g * g;
        let d_abs_sq = -4.0 * self.width * w * (1.0 + 1.0 / (mu * mu)) * abs_sq;
        (r, d_abs_sq)
    }

    /// `1 - |r|^2` evaluated without cancellation when `A = 1` and `w` is small.
    fn one_minus_abs_sq(&self, mu: f64) -> f64 {
        let w = mu - 1.0 / mu;
        let a2 = self.amplitude * self.amplitude;
        (1.0 - a2) - a2 * (-2.0 * self.width * w * w).exp_m1()
    }
}

impl Default for GaussianModel {
    fn default() -> Self {
        Self {
            amplitude: 0.8,
            width: 1.0,
            chirp: 0.0,
        }
    }
}

/// Tabulated `r` on `[1, mu_max]`, linearly interpolated, zero beyond `mu_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionTable {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
}

impl ReflectionTable {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::Table("need at least two (mu, r) rows".into()));
        }
        if (nodes[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Table(format!("first node must be mu = 1, got {}", nodes[0])));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Table("nodes must be strictly increasing".into()));
        }
        if values[0].im.abs() > 1e-12 {
            return Err(Error::Table(format!(
                "r(1) must be real by symmetry, got imaginary part {}",
                values[0].im
            )));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite() || v.norm() > 1.0)
        {
            return Err(Error::Table("values must be finite with |r| <= 1".into()));
        }
        let mut nodes = nodes;
        let mut values = values;
        nodes[0] = 1.0;
        values[0].im = 0.0;
        Ok(Self { nodes, values })
    }

    /// Parses whitespace- or comma-separated `mu re im` rows; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            if fields.len() != 3 {
                return Err(Error::Table(format!(
                    "line {}: expected 3 columns (mu, re, im), found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Table(format!("line {}: {e}", lineno + 1)))
            };
            nodes.push(num(fields[0])?);
            values.push(Complex64::new(num(fields[1])?, num(fields[2])?));
        }
        Self::new(nodes, values)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Table(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn base(&self, mu: f64) -> (Complex64, f64) {
        let last = *self.nodes.last().unwrap();
        if mu > last {
            return (Complex64::new(0.0, 0.0), 0.0);
        }
        // partition_point gives the first node > mu; segment is [i-1, i].
        let i = self.nodes.partition_point(|&x| x <= mu).clamp(1, self.nodes.len() - 1);
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let slope = (v1 - v0) / (x1 - x0);
        let r = v0 + slope * (mu - x0);
        let d_abs_sq = 2.0 * (r.conj() * slope).re;
        (r, d_abs_sq)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ReflectionCoefficient {
    Model(GaussianModel),
    Table(ReflectionTable),
}

impl Default for ReflectionCoefficient {
    fn default() -> Self {
        ReflectionCoefficient::Model(GaussianModel::default())
    }
}

impl From<GaussianModel> for ReflectionCoefficient {
    fn from(m: GaussianModel) -> Self {
        ReflectionCoefficient::Model(m)
    }
}

impl From<ReflectionTable> for ReflectionCoefficient {
    fn from(t: ReflectionTable) -> Self {
        ReflectionCoefficient::Table(t)
    }
}

impl ReflectionCoefficient {
    pub fn model(amplitude: f64, width: f64, chirp: f64) -> Result<Self> {
        GaussianModel::new(amplitude, width, chirp).map(Self::Model)
    }

    /// The identically vanishing coefficient.
    pub fn zero() -> Self {
        Self::Model(GaussianModel {
            amplitude: 0.0,
            width: 1.0,
            chirp: 0.0,
        })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Model(m) => m.amplitude == 0.0,
            Self::Table(t) => t.values.iter().all(|v| v.norm() == 0.0),
        }
    }

    /// `r` and `d|r|^2/dmu` on the base interval `mu >= 1`.
    fn base(&self, mu: f64) -> (Complex64, f64) {
        match self {
            Self::Model(m) => m.base(mu),
            Self::Table(t) => t.base(mu),
        }
    }

    pub fn eval(&self, mu: f64) -> Result<Complex64> {
        if mu == 0.0 || !mu.is_finite() {
            return Err(Error::Domain(format!("r(mu) is undefined at mu = {mu}")));
        }
        Ok(self.eval_nonzero(mu))
    }

    fn eval_nonzero(&self, mu: f64) -> Complex64 {
        if mu < 0.0 {
            -self.eval_nonzero(-mu).conj()
        } else if mu < 1.0 {
            self.base(1.0 / mu).0.conj()
        } else {
            self.base(mu).0
        }
    }

    /// `|r(mu)|^2`, extended by continuity to `mu = 0` and `|mu| = ∞` (where it vanishes).
    pub fn abs_sq(&self, mu: f64) -> f64 {
        let m = mu.abs();
        if m == 0.0 || m.is_infinite() {
            return 0.0;
        }
        let m = if m < 1.0 { 1.0 / m } else { m };
        self.base(m).0.norm_sqr()
    }

    /// `d|r|^2/dmu`, from the base-interval derivative and the chain rule.
    pub fn abs_sq_derivative(&self, mu: f64) -> f64 {
        if mu == 0.0 || mu.is_infinite() {
            return 0.0;
        }
        if mu < 0.0 {
            return -self.abs_sq_derivative(-mu);
        }
        if mu < 1.0 {
            let inv = 1.0 / mu;
            return -inv * inv * self.base(inv).1;
        }
        self.base(mu).1
    }

    /// `ln(1 - |r(s)|^2)`; `-inf` where `|r| = 1`.
    pub fn log_gap(&self, s: f64) -> f64 {
        match self {
            Self::Model(m) => {
                let a = s.abs();
                if a == 0.0 || a.is_infinite() {
                    return 0.0;
                }
                m.one_minus_abs_sq(a).ln()
            }
            Self::Table(_) => (-self.abs_sq(s)).ln_1p(),
        }
    }

    /// `d/ds ln(1 - |r(s)|^2)`.
    pub fn log_gap_derivative(&self, s: f64) -> f64 {
        let gap = match self {
            Self::Model(m) if s != 0.0 && s.is_finite() => m.one_minus_abs_sq(s.abs()),
            _ => 1.0 - self.abs_sq(s),
        };
        -self.abs_sq_derivative(s) / gap
    }

    /// True when `|r(±1)| = 1`, the regime where `ln(1 - |r|^2)` has
    /// logarithmic singularities at `s = ±1`.
    pub fn is_singular_at_unit(&self) -> bool {
        self.abs_sq(1.0) >= 1.0 - 1e-12
    }

    /// Largest `|r|` over the table nodes, or the model amplitude.
    pub fn sup_abs(&self) -> f64 {
        match self {
            Self::Model(m) => m.amplitude,
            Self::Table(t) => t.values.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }
}

/// `h = -ln(1 - |r(mu_j)|^2) / (2 pi)`.
pub fn h_at(rc: &ReflectionCoefficient, mu_j: f64) -> Result<f64> {
    if mu_j == 0.0 {
        return Err(Error::Domain(
            "h is evaluated at a stationary point, mu = 0 given".into(),
        ));
    }
    if rc.abs_sq(mu_j) >= 1.0 {
        return Err(Error::Singular(format!("|r({mu_j})| >= 1, h is unbounded")));
    }
    Ok(-rc.log_gap(mu_j) / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `max |r(mu) + conj(r(-mu))|`.
    pub negation_defect: f64,
    /// `max |r(mu) - conj(r(1/mu))|`.
    pub inversion_defect: f64,
    pub points: usize,
}

impl SymmetryReport {
    pub const TOLERANCE: f64 = 1e-14;

    pub fn max_defect(&self) -> f64 {
        self.negation_defect.max(self.inversion_defect)
    }

    pub fn passed(&self) -> bool {
        self.max_defect() < Self::TOLERANCE
    }
}

/// Checks both symmetries on `10^4` log-spaced points in `[1e-4, 1e4]` and
/// their negatives.
pub fn validate_symmetries_of(r: impl Fn(f64) -> Complex64) -> SymmetryReport {
    const N: usize = 10_000;
    let (lo, hi) = (-4.0f64, 4.0f64);
    let mut report = SymmetryReport {
        negation_defect: 0.0,
        inversion_defect: 0.0,
        points: 2 * N,
    };
    for i in 0..N {
        let e = lo + (hi - lo) * i as f64 / (N - 1) as f64;
        let m = 10f64.powf(e);
        for mu in [m, -m] {
            let v = r(mu);
            report.negation_defect = report.negation_defect.max((v + r(-mu).conj()).norm());
            report.inversion_defect = report.inversion_defect.max((v - r(1.0 / mu).conj()).norm());
        }
    }
    report
}

pub fn validate_symmetries(rc: &ReflectionCoefficient) -> SymmetryReport {
    validate_symmetries_of(|mu| rc.eval_nonzero(mu))
}
