//! Normalized Moebius transformations and their half-space action.

use crate::complex::{ensure_finite, ComplexValue, HalfSpacePoint};
use crate::{BoundaryPoint, Error, Result, Tol, FIXES_INFINITY, SINGULAR_DET};
use core::fmt;
// Brings sqrt/ln/atan2 into scope for no_std builds; redundant under std.
#[allow(unused_imports)]
use num_traits::Float;

/// 2x2 complex matrix of determinant 1, identified up to global sign.
///
/// Stored entries are the determinant-1 representative whose trace has
/// nonnegative real part (ties: nonnegative imaginary part; a zero trace
/// defers to the first entry of a, b, c, d with a nonzero sign class).
/// Equality still quotients by the sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: ComplexValue,
    pub b: ComplexValue,
    pub c: ComplexValue,
    pub d: ComplexValue,
}

/// Conjugacy type of a normalized map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// Sign classes within this margin of zero fall through to the next entry,
/// keeping canonicalization stable under roundoff of a genuinely zero part.
const SIGN_EPS: f64 = 1e-13;

fn sign_class(w: ComplexValue) -> i8 {
    if w.re > SIGN_EPS {
        1
    } else if w.re < -SIGN_EPS {
        -1
    } else if w.im > SIGN_EPS {
        1
    } else if w.im < -SIGN_EPS {
        -1
    } else {
        0
    }
}

impl MoebiusMap {
    pub fn identity() -> Self {
        MoebiusMap {
            a: ComplexValue::new(1.0, 0.0),
            b: ComplexValue::new(0.0, 0.0),
            c: ComplexValue::new(0.0, 0.0),
            d: ComplexValue::new(1.0, 0.0),
        }
    }

    /// Translation z -> z + t.
    pub fn translation(t: ComplexValue) -> Self {
        MoebiusMap {
            a: ComplexValue::new(1.0, 0.0),
            b: t,
            c: ComplexValue::new(0.0, 0.0),
            d: ComplexValue::new(1.0, 0.0),
        }
    }

    /// Scales a raw matrix to determinant 1 and picks the canonical sign.
    pub fn normalize(
        a: ComplexValue,
        b: ComplexValue,
        c: ComplexValue,
        d: ComplexValue,
    ) -> Result<Self> {
        ensure_finite(a)?;
        ensure_finite(b)?;
        ensure_finite(c)?;
        ensure_finite(d)?;
        let det = a * d - b * c;
        if det.norm() <= SINGULAR_DET {
            return Err(Error::SingularMatrix);
        }
        let s = det.sqrt();
        Self::canonical(a / s, b / s, c / s, d / s)
    }

    fn canonical(
        a: ComplexValue,
        b: ComplexValue,
        c: ComplexValue,
        d: ComplexValue,
    ) -> Result<Self> {
        ensure_finite(a)?;
        ensure_finite(b)?;
        ensure_finite(c)?;
        ensure_finite(d)?;
        let mut flip = 1.0;
        for probe in [a + d, a, b, c, d] {
            match sign_class(probe) {
                1 => break,
                -1 => {
                    flip = -1.0;
                    break;
                }
                _ => continue,
            }
        }
        Ok(MoebiusMap {
            a: a * flip,
            b: b * flip,
            c: c * flip,
            d: d * flip,
        })
    }

    pub fn entries(&self) -> [ComplexValue; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> ComplexValue {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> ComplexValue {
        self.a + self.d
    }

    /// Matrix product self * other: applies `other` first.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        // Determinant drifts only by roundoff; rescale rather than re-check.
        let s = (a * d - b * c).sqrt();
        Self::canonical(a / s, b / s, c / s, d / s).expect("product of finite unimodular maps")
    }

    pub fn inverse(&self) -> MoebiusMap {
        Self::canonical(self.d, -self.b, -self.c, self.a).expect("adjugate of finite map")
    }

    /// Entrywise equality up to a global sign.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let plus = (self.a - other.a)
            .norm()
            .max((self.b - other.b).norm())
            .max((self.c - other.c).norm())
            .max((self.d - other.d).norm());
        if plus <= tol {
            return true;
        }
        let minus = (self.a + other.a)
            .norm()
            .max((self.b + other.b).norm())
            .max((self.c + other.c).norm())
            .max((self.d + other.d).norm());
        minus <= tol
    }

    /// Boundary action; the pole -d/c maps to infinity and infinity to a/c.
    ///
    /// Pole detection is relative: w = cz + d counts as zero when it has
    /// cancelled below 1e-13 of its constituent magnitudes.
    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c.norm() <= FIXES_INFINITY {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let w = self.c * z + self.d;
                let scale = self.c.norm() * z.norm() + self.d.norm();
                if w.norm() <= 1e-13 * scale || w.norm() == 0.0 {
                    return BoundaryPoint::Infinity;
                }
                let q = (self.a * z + self.b) / w;
                if q.re.is_finite() && q.im.is_finite() {
                    BoundaryPoint::Finite(q)
                } else {
                    BoundaryPoint::Infinity
                }
            }
        }
    }

    /// Poincare extension to upper half-space.
    ///
    /// With w = cz + d and D = |w|^2 + |c|^2 h^2:
    /// z' = ((az + b) conj(w) + a conj(c) h^2) / D, h' = h / D.
    pub fn apply_interior(&self, p: &HalfSpacePoint) -> Result<HalfSpacePoint> {
        let w = self.c * p.z + self.d;
        let h2 = p.h * p.h;
        let den = w.norm_sqr() + self.c.norm_sqr() * h2;
        let z = ((self.a * p.z + self.b) * w.conj() + self.a * self.c.conj() * h2) / den;
        let h = p.h / den;
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::DegenerateHeight);
        }
        HalfSpacePoint::new(z, h)
    }

    /// Conjugacy class from the squared trace (sign-invariant).
    pub fn classify(&self, tol: Tol) -> MapClass {
        let id = MoebiusMap::identity();
        if self.approx_eq(&id, tol.eq) {
            return MapClass::Identity;
        }
        let t2 = self.trace() * self.trace();
        if (t2 - ComplexValue::new(4.0, 0.0)).norm() <= tol.eq {
            return MapClass::Parabolic;
        }
        if t2.im.abs() <= tol.eq && t2.re >= -tol.eq && t2.re < 4.0 {
            return MapClass::Elliptic;
        }
        MapClass::Loxodromic
    }

    /// Translation length of an upper-triangular parabolic z -> z + t.
    ///
    /// The identity counts as the zero translation. Errors with
    /// NotUpperParabolic when c is not negligible or the squared trace is
    /// not 4 within tolerance.
    pub fn parabolic_translation(&self, tol: Tol) -> Result<ComplexValue> {
        if self.c.norm() > FIXES_INFINITY {
            return Err(Error::NotUpperParabolic);
        }
        let t2 = self.trace() * self.trace();
        if (t2 - ComplexValue::new(4.0, 0.0)).norm() > tol.eq {
            return Err(Error::NotUpperParabolic);
        }
        Ok(self.b / self.d)
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
