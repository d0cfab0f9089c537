use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const O: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2C(pub [[Complex64; 2]; 2]);

impl Matrix2C {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Self::new(ONE, O, O, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(O, O, O, O)
    }

    pub const fn sigma1() -> Self {
        Self::new(O, ONE, ONE, O)
    }

    pub const fn sigma3() -> Self {
        Self::new(ONE, O, O, Complex64::new(-1.0, 0.0))
    }

    /// `((0, 1), (-1, 0))`.
    pub const fn antisymmetric() -> Self {
        Self::new(O, ONE, Complex64::new(-1.0, 0.0), O)
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, O, O, d)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[i][j]
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        if det.norm() <= 1e-14 * scale * scale {
            return Err(Error::Singular(format!("matrix is not invertible (det = {det})")));
        }
        let m = &self.0;
        Ok(Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0]).scale(det.inv()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// Entrywise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let m = &self.0;
        Self::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Default for Matrix2C {
    fn default() -> Self {
        Self::identity()
    }
}

impl Add for Matrix2C {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        Self::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Matrix2C {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Matrix2C {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for Matrix2C {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl fmt::Display for Matrix2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let s1 = Matrix2C::sigma1();
        let s3 = Matrix2C::sigma3();
        assert_eq!(s1 * s1, Matrix2C::identity());
        assert_eq!(s3 * s3, Matrix2C::identity());
        assert_eq!(s1 * s3, -(s3 * s1));
        assert_eq!(s1.det(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix2C::new(
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.1),
            Complex64::new(0.3, -0.7),
            Complex64::new(2.0, 0.0),
        );
        let p = m * m.inverse().unwrap();
        assert!(p.distance(&Matrix2C::identity()) < 1e-15);
        assert!(Matrix2C::real(1.0, 2.0, 2.0, 4.0).inverse().is_err());
    }
}
