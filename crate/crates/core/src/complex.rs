//! Boundary and interior points of upper half-space.

use crate::{Error, Result};
use core::fmt;
// Brings sqrt/ln/atan2 into scope for no_std builds; redundant under std.
#[allow(unused_imports)]
use num_traits::Float;

/// Finite complex scalar; all stored values keep both parts finite.
pub type ComplexValue = num_complex::Complex<f64>;

pub(crate) fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

pub(crate) fn ensure_finite(z: ComplexValue) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite)
    }
}

/// Point of the boundary sphere: a finite complex number or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(ComplexValue),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(re: f64, im: f64) -> Self {
        BoundaryPoint::Finite(c(re, im))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<ComplexValue> {
        match self {
            BoundaryPoint::Finite(z) => Some(*z),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Equality with absolute tolerance on finite points.
    pub fn approx_eq(&self, other: &BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }
}

impl From<ComplexValue> for BoundaryPoint {
    fn from(z: ComplexValue) -> Self {
        BoundaryPoint::Finite(z)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Infinity => write!(f, "inf"),
            BoundaryPoint::Finite(z) => write!(f, "{z}"),
        }
    }
}

/// Interior point (z, h) of upper half-space, h > 0 strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpacePoint {
    pub z: ComplexValue,
    pub h: f64,
}

impl HalfSpacePoint {
    pub fn new(z: ComplexValue, h: f64) -> Result<Self> {
        ensure_finite(z)?;
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::DegenerateHeight);
        }
        Ok(HalfSpacePoint { z, h })
    }

    /// Hyperbolic distance: cosh d = 1 + (|z1-z2|^2 + (h1-h2)^2) / (2 h1 h2).
    pub fn distance(&self, other: &HalfSpacePoint) -> f64 {
        let num = (self.z - other.z).norm_sqr() + (self.h - other.h) * (self.h - other.h);
        let ch = 1.0 + num / (2.0 * self.h * other.h);
        ch.max(1.0).acosh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_height() {
        assert_eq!(HalfSpacePoint::new(c(0.0, 0.0), 0.0), Err(Error::DegenerateHeight));
        assert_eq!(HalfSpacePoint::new(c(0.0, 0.0), -1.0), Err(Error::DegenerateHeight));
        assert!(HalfSpacePoint::new(c(0.0, 0.0), 1e-300).is_ok());
    }

    #[test]
    fn rejects_nonfinite() {
        assert_eq!(HalfSpacePoint::new(c(f64::NAN, 0.0), 1.0), Err(Error::NonFinite));
        assert_eq!(HalfSpacePoint::new(c(0.0, f64::INFINITY), 1.0), Err(Error::NonFinite));
    }

    #[test]
    fn vertical_distance_is_log_ratio() {
        let p = HalfSpacePoint::new(c(0.0, 0.0), 1.0).unwrap();
        let q = HalfSpacePoint::new(c(0.0, 0.0), 2.0).unwrap();
        assert!((p.distance(&q) - 2.0f64.ln()).abs() < 1e-12);
        assert_eq!(p.distance(&p), 0.0);
    }
}
