//! Spectral-plane geometry of the phase function.
//!
//! The phase is written in terms of the auxiliary variable
//! `k(mu) = (mu - 1/mu) / 4`, so that `theta(mu, xi) = theta_hat(k(mu), xi)`
//! with `theta_hat(k, xi) = k xi - 2k / (1 + 4k^2)`. Real stationary points
//! `k = ±kappa_j` satisfy `xi = (2 - 8 kappa^2) / (1 + 4 kappa^2)^2`; they
//! exist for `-1/4 <= xi <= 2` and organise the real line into the sets
//! `Sigma_a` / `Sigma_b` used by the steepest-descent factorisations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper edge of the first oscillatory range.
pub const XI_RIGHT: f64 = 2.0;
/// Lower edge of the second oscillatory range.
pub const XI_LEFT: f64 = -0.25;

/// Which frame a ray slope `x/t` refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Original solution `u` on the unit background.
    U,
    /// Shifted zero-background solution `u~(x, t) = u(x + t, t) - 1`.
    UTilde,
}

impl std::str::FromStr for Frame {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "u" => Ok(Frame::U),
            "utilde" | "u_tilde" => Ok(Frame::UTilde),
            other => Err(format!("unknown frame `{other}` (expected `u` or `utilde`)")),
        }
    }
}

/// A ray `x/t = zeta` together with its slope in the shifted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayParameter {
    /// Slope in the shifted (zero-background) frame.
    pub xi: f64,
    /// Slope as given by the caller.
    pub zeta: f64,
}

impl RayParameter {
    pub fn new(zeta: f64, frame: Frame) -> Self {
        let xi = match frame {
            Frame::U => zeta - 1.0,
            Frame::UTilde => zeta,
        };
        Self { xi, zeta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorClass {
    /// `xi > 2`: no real stationary points.
    FastDecayRight,
    /// `0 < xi < 2`: four stationary points `±mu_0, ±1/mu_0`.
    Oscillatory1,
    /// `-1/4 < xi < 0`: eight stationary points.
    Oscillatory2,
    /// `xi < -1/4`: no real stationary points.
    FastDecayLeft,
    /// One of `xi ∈ {-1/4, 0, 2}` where stationary points merge.
    Boundary,
}

impl SectorClass {
    pub fn is_oscillatory(self) -> bool {
        matches!(self, SectorClass::Oscillatory1 | SectorClass::Oscillatory2)
    }

    pub fn label(self) -> &'static str {
        match self {
            SectorClass::FastDecayRight => "FastDecayRight",
            SectorClass::Oscillatory1 => "Oscillatory1",
            SectorClass::Oscillatory2 => "Oscillatory2",
            SectorClass::FastDecayLeft => "FastDecayLeft",
            SectorClass::Boundary => "Boundary",
        }
    }
}

impl std::fmt::Display for SectorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify_sector(xi: f64) -> SectorClass {
    if xi > XI_RIGHT {
        SectorClass::FastDecayRight
    } else if xi > 0.0 && xi < XI_RIGHT {
        SectorClass::Oscillatory1
    } else if xi < 0.0 && xi > XI_LEFT {
        SectorClass::Oscillatory2
    } else if xi < XI_LEFT {
        SectorClass::FastDecayLeft
    } else {
        SectorClass::Boundary
    }
}

/// `k(mu) = (mu - 1/mu) / 4`.
pub fn k_of_mu(mu: Complex64) -> Result<Complex64> {
    if mu == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("k(mu) is undefined at mu = 0".into()));
    }
    Ok((mu - mu.inv()) * 0.25)
}

/// Real-line version of [`k_of_mu`].
pub fn k_of_mu_real(mu: f64) -> Result<f64> {
    if mu == 0.0 {
        return Err(Error::Domain("k(mu) is undefined at mu = 0".into()));
    }
    Ok(0.25 * (mu - 1.0 / mu))
}

/// `theta_hat(k, xi) = k xi - 2k / (1 + 4k^2)`; poles at `k = ±i/2`.
pub fn theta_hat(k: Complex64, xi: f64) -> Result<Complex64> {
    let denom = 1.0 + 4.0 * k * k;
    if denom.norm() == 0.0 {
        return Err(Error::Singular(format!("theta_hat has a pole at k = {k}")));
    }
    Ok(k * xi - 2.0 * k / denom)
}

/// `theta(mu, xi) = theta_hat(k(mu), xi)`; poles at `mu = ±i` and `mu = 0`.
pub fn theta(mu: Complex64, xi: f64) -> Result<Complex64> {
    let k = k_of_mu(mu)?;
    theta_hat(k, xi).map_err(|_| Error::Singular(format!("theta has a pole at mu = {mu}")))
}

/// Real stationary point `k = kappa` of `theta_hat` and its derived data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub kappa: f64,
    /// Root `> 1` (or `= 1` when `kappa = 0`) of `mu^2 - 4 kappa mu - 1 = 0`.
    pub mu: f64,
    /// Curvature coefficient `kappa (3 - 4kappa^2) / (1 + 4kappa^2)^3`.
    pub f: f64,
    /// Critical value `theta_hat(kappa) = -16 kappa^3 / (1 + 4kappa^2)^2`.
    pub theta_hat: f64,
}

impl StationaryPoint {
    pub fn from_kappa(kappa: f64) -> Self {
        let k2 = kappa * kappa;
        let s = 1.0 + 4.0 * k2;
        Self {
            kappa,
            mu: 2.0 * kappa + (4.0 * k2 + 1.0).sqrt(),
            f: kappa * (3.0 - 4.0 * k2) / (s * s * s),
            theta_hat: -16.0 * kappa * k2 / (s * s),
        }
    }
}

/// Stationary-point geometry along the ray `y/t = xi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryData {
    pub xi: f64,
    /// Branch `kappa_0 ∈ [0, √3/2]`, present on `[-1/4, 2]`.
    pub zero: StationaryPoint,
    /// Branch `kappa_1 ≥ √3/2`, present on `[-1/4, 0)`.
    pub one: Option<StationaryPoint>,
}

impl StationaryData {
    pub fn branch(&self, j: usize) -> Option<&StationaryPoint> {
        match j {
            0 => Some(&self.zero),
            1 => self.one.as_ref(),
            _ => None,
        }
    }
}

/// Slope of the ray whose stationary point is `kappa`.
pub fn xi_of_kappa(kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    let s = 1.0 + 4.0 * k2;
    (2.0 - 8.0 * k2) / (s * s)
}

/// Stationary points for `-1/4 <= xi <= 2`.
///
/// With `s = sqrt(1 + 4 xi)` the textbook forms
/// `kappa_0^2 = (s - 1 - xi) / (4 xi)` and `kappa_1^2 = -(s + 1 + xi) / (4 xi)`
/// are rewritten as `(3 - s) / (4 (s + 1))` and `(s + 3) / (4 (1 - s))`,
/// which are free of the `0/0` at `xi = 0` and give the continuous
/// extension `kappa_0(0) = 1/2`.
pub fn stationary_points(xi: f64) -> Result<StationaryData> {
    if !xi.is_finite() || !(XI_LEFT..=XI_RIGHT).contains(&xi) {
        return Err(Error::Sector {
            xi,
            found: classify_sector(xi),
            expected: "-1/4 <= xi <= 2",
        });
    }
    let s = (1.0 + 4.0 * xi).max(0.0).sqrt();
    let kappa0 = ((3.0 - s) / (4.0 * (s + 1.0))).max(0.0).sqrt();
    let one = (xi < 0.0).then(|| {
        let kappa1 = ((s + 3.0) / (4.0 * (1.0 - s))).sqrt();
        StationaryPoint::from_kappa(kappa1)
    });
    Ok(StationaryData {
        xi,
        zero: StationaryPoint::from_kappa(kappa0),
        one,
    })
}

/// Open interval `(lo, hi)`; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo < hi, "empty interval ({lo}, {hi})");
        Self { lo, hi }
    }

    pub fn contains(&self, s: f64) -> bool {
        self.lo < s && s < self.hi
    }

    pub fn contains_closure(&self, s: f64) -> bool {
        self.lo <= s && s <= self.hi
    }
}

/// Sorted union of disjoint open intervals.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a union, rejecting unsorted or overlapping input.
    pub fn from_intervals(intervals: Vec<Interval>) -> Result<Self> {
        for w in intervals.windows(2) {
            if w[0].hi > w[1].lo {
                return Err(Error::Contract(format!(
                    "intervals ({}, {}) and ({}, {}) overlap or are unsorted",
                    w[0].lo, w[0].hi, w[1].lo, w[1].hi
                )));
            }
        }
        if intervals.iter().any(|i| !(i.lo < i.hi)) {
            return Err(Error::Contract("degenerate interval".into()));
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, s: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(s))
    }

    pub fn contains_closure(&self, s: f64) -> bool {
        self.intervals.iter().any(|i| i.contains_closure(s))
    }

    /// The part of the union on `(0, +inf)`, as intervals with `lo >= 0`.
    pub fn positive_part(&self) -> Vec<Interval> {
        self.intervals
            .iter()
            .filter(|i| i.hi > 0.0)
            .map(|i| Interval::new(i.lo.max(0.0), i.hi))
            .collect()
    }
}

/// The set `Sigma_b(xi)` where the lower/diagonal/upper factorisation is used.
pub fn sigma_b(xi: f64, stat: &StationaryData) -> Result<IntervalUnion> {
    let inf = f64::INFINITY;
    let union = match classify_sector(xi) {
        SectorClass::FastDecayRight => IntervalUnion::empty(),
        SectorClass::Oscillatory1 => {
            let m0 = stat.zero.mu;
            IntervalUnion::from_intervals(vec![Interval::new(-m0, -1.0 / m0), Interval::new(1.0 / m0, m0)])?
        }
        SectorClass::Oscillatory2 => {
            let m0 = stat.zero.mu;
            let m1 = stat
                .one
                .ok_or_else(|| Error::Contract("second stationary branch missing".into()))?
                .mu;
            IntervalUnion::from_intervals(vec![
                Interval::new(-inf, -m1),
                Interval::new(-m0, -1.0 / m0),
                Interval::new(-1.0 / m1, 1.0 / m1),
                Interval::new(1.0 / m0, m0),
                Interval::new(m1, inf),
            ])?
        }
        SectorClass::FastDecayLeft => IntervalUnion::from_intervals(vec![Interval::new(-inf, inf)])?,
        SectorClass::Boundary => {
            return Err(Error::Sector {
                xi,
                found: SectorClass::Boundary,
                expected: "a non-boundary ray",
            })
        }
    };
    Ok(union)
}
