//! Isometric spheres, geodesics and metric queries in upper half-space.

use crate::complex::{c, ComplexValue, HalfSpacePoint};
use crate::group::Word;
use crate::moebius::MoebiusMap;
use crate::{BoundaryPoint, Error, Result, Tol, ENDPOINT_SEP, FIXES_INFINITY};
use alloc::vec::Vec;
// Brings sqrt/ln/atan2 into scope for no_std builds; redundant under std.
#[allow(unused_imports)]
use num_traits::Float;

/// Euclidean hemisphere |p - center| = radius centered on the boundary.
///
/// For a map m with c != 0 this is the isometric sphere I(m): center
/// m^-1(inf) = -d/c, radius 1/|c|. `owner` records the word that produced
/// the map, when known.
#[derive(Debug, Clone, PartialEq)]
pub struct IsometricSphere {
    pub center: ComplexValue,
    pub radius: f64,
    pub owner: Option<Word>,
}

impl IsometricSphere {
    pub fn new(center: ComplexValue, radius: f64) -> Self {
        IsometricSphere {
            center,
            radius,
            owner: None,
        }
    }

    /// Center and radius agree within tol; owners are ignored.
    pub fn approx_eq(&self, other: &IsometricSphere, tol: f64) -> bool {
        (self.center - other.center).norm() <= tol && (self.radius - other.radius).abs() <= tol
    }

    /// Translate by tau = j*t_alpha + k*t_beta; the owner word gains the
    /// matching trailing offset (translation by tau is right-composition
    /// with the lattice element for -tau).
    pub fn translated(&self, tau: ComplexValue, j: i32, k: i32) -> IsometricSphere {
        IsometricSphere {
            center: self.center + tau,
            radius: self.radius,
            owner: self.owner.as_ref().map(|w| w.translated(-j, -k)),
        }
    }
}

/// Complete geodesic, named by its two distinct ideal endpoints.
///
/// If one endpoint is infinity it is stored as `e2`, so `e1` is always the
/// foot of a vertical line when `e2` is infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    e1: BoundaryPoint,
    e2: BoundaryPoint,
}

impl Geodesic {
    pub fn new(p: BoundaryPoint, q: BoundaryPoint) -> Result<Self> {
        match (p, q) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => Err(Error::DegenerateGeodesic),
            (BoundaryPoint::Infinity, f) => Ok(Geodesic {
                e1: f,
                e2: BoundaryPoint::Infinity,
            }),
            (f, BoundaryPoint::Infinity) => Ok(Geodesic {
                e1: f,
                e2: BoundaryPoint::Infinity,
            }),
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
                if (u - v).norm() <= ENDPOINT_SEP {
                    Err(Error::DegenerateGeodesic)
                } else {
                    Ok(Geodesic {
                        e1: BoundaryPoint::Finite(u),
                        e2: BoundaryPoint::Finite(v),
                    })
                }
            }
        }
    }

    pub fn vertical(foot: ComplexValue) -> Self {
        Geodesic {
            e1: BoundaryPoint::Finite(foot),
            e2: BoundaryPoint::Infinity,
        }
    }

    pub fn endpoints(&self) -> (BoundaryPoint, BoundaryPoint) {
        (self.e1, self.e2)
    }

    pub fn is_vertical(&self) -> bool {
        self.e2.is_infinity()
    }

    pub fn foot(&self) -> Option<ComplexValue> {
        if self.is_vertical() {
            self.e1.as_finite()
        } else {
            None
        }
    }

    /// Unordered endpoint equality within tol.
    pub fn approx_eq(&self, other: &Geodesic, tol: f64) -> bool {
        (self.e1.approx_eq(&other.e1, tol) && self.e2.approx_eq(&other.e2, tol))
            || (self.e1.approx_eq(&other.e2, tol) && self.e2.approx_eq(&other.e1, tol))
    }

    /// Image geodesic under a Moebius map (endpointwise).
    pub fn map(&self, m: &MoebiusMap) -> Result<Geodesic> {
        Geodesic::new(m.apply_boundary(self.e1), m.apply_boundary(self.e2))
    }

    /// True when z lies on the boundary projection of the carrier and the
    /// point (z, h) sits on the geodesic, both within Euclidean tol.
    pub fn contains(&self, p: &HalfSpacePoint, tol: f64) -> bool {
        match (self.e1, self.e2) {
            (BoundaryPoint::Finite(f), BoundaryPoint::Infinity) => (p.z - f).norm() <= tol,
            (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
                let e = (v - u) / 2.0;
                let m = (u + v) / 2.0;
                let rel = (p.z - m) * e.conj() / e.norm();
                if rel.im.abs() > tol {
                    return false;
                }
                (rel.re.hypot(p.h) - e.norm()).abs() <= tol
            }
            _ => unreachable!("canonical form keeps infinity in e2"),
        }
    }
}

/// End of a geodesic segment: an interior point or an ideal endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentEnd {
    Interior(HalfSpacePoint),
    Ideal(BoundaryPoint),
}

/// Segment of a carrier geodesic between two ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    pub carrier: Geodesic,
    pub start: SegmentEnd,
    pub end: SegmentEnd,
}

impl GeodesicSegment {
    /// Interior ends must lie on the carrier within 1e-9.
    pub fn new(carrier: Geodesic, start: SegmentEnd, end: SegmentEnd) -> Result<Self> {
        for end in [&start, &end] {
            if let SegmentEnd::Interior(p) = end {
                if !carrier.contains(p, 1e-9) {
                    return Err(Error::DegenerateConfiguration);
                }
            }
        }
        Ok(GeodesicSegment {
            carrier,
            start,
            end,
        })
    }
}

/// Image of a hemisphere under a Moebius map: another hemisphere, or a
/// vertical half-plane when the rim passes through the pole.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereImage {
    Sphere(IsometricSphere),
    Plane(VerticalPlane),
}

/// Vertical half-plane over the boundary line anchor + s*direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalPlane {
    pub anchor: ComplexValue,
    /// Unit direction, canonicalized to nonnegative real part (ties:
    /// nonnegative imaginary part).
    pub direction: ComplexValue,
}

/// Relative position of two complete geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicRelation {
    Intersecting,
    Disjoint,
    /// Exactly one shared ideal endpoint; distance 0 is not attained.
    Asymptotic,
    Equal,
}

pub fn isometric_sphere(m: &MoebiusMap) -> Result<IsometricSphere> {
    if m.c.norm() <= FIXES_INFINITY {
        return Err(Error::FixesInfinity);
    }
    Ok(IsometricSphere::new(-m.d / m.c, 1.0 / m.c.norm()))
}

/// Dual geodesic of I(m): vertical line from m^-1(inf) (the center) to inf.
pub fn dual_geodesic(m: &MoebiusMap) -> Result<Geodesic> {
    Ok(Geodesic::vertical(isometric_sphere(m)?.center))
}

/// Image of the hemisphere over `s` under the Poincare extension of m.
///
/// Decomposing m(z) = a/c - (1/c^2) / (z - p) about the pole p = -d/c turns
/// the rim circle into an exact inversion image; the affine branch (c ~ 0)
/// keeps translations exact. Hemispheres map to hemispheres because both are
/// the spheres orthogonal to the boundary over their rims.
pub fn transform_sphere(m: &MoebiusMap, s: &IsometricSphere, tol: Tol) -> Result<SphereImage> {
    let r = s.radius;
    if m.c.norm() <= FIXES_INFINITY {
        let scale = m.a / m.d;
        let center = (m.a * s.center + m.b) / m.d;
        return Ok(SphereImage::Sphere(IsometricSphere::new(
            center,
            scale.norm() * r,
        )));
    }
    let pole = -m.d / m.c;
    let w = s.center - pole;
    let q = w.norm_sqr() - r * r;
    if q.abs() <= tol.eq * (1.0 + w.norm_sqr() + r * r) {
        // Rim through the pole: image is the line through two rim images.
        let dir_to_pole = if w.norm() == 0.0 { c(1.0, 0.0) } else { -w / w.norm() };
        let z1 = s.center + r * dir_to_pole * c(0.0, 1.0);
        let z2 = s.center - r * dir_to_pole;
        let (w1, w2) = match (
            m.apply_boundary(BoundaryPoint::Finite(z1)),
            m.apply_boundary(BoundaryPoint::Finite(z2)),
        ) {
            (BoundaryPoint::Finite(w1), BoundaryPoint::Finite(w2)) => (w1, w2),
            _ => return Err(Error::DegenerateConfiguration),
        };
        let mut direction = (w2 - w1) / (w2 - w1).norm();
        if direction.re < 0.0 || (direction.re == 0.0 && direction.im < 0.0) {
            direction = -direction;
        }
        return Ok(SphereImage::Plane(VerticalPlane {
            anchor: w1,
            direction,
        }));
    }
    let c2 = m.c * m.c;
    let center = m.a / m.c - w.conj() / (q * c2);
    let radius = r / (q.abs() * m.c.norm_sqr());
    Ok(SphereImage::Sphere(IsometricSphere::new(center, radius)))
}

/// Meeting of the vertical line over `foot` with the hemisphere surface.
pub fn vertical_meet_sphere(foot: ComplexValue, s: &IsometricSphere) -> Result<HalfSpacePoint> {
    let d = (foot - s.center).norm();
    if d >= s.radius {
        return Err(Error::OutsideFootprint);
    }
    let h = (s.radius * s.radius - d * d).sqrt();
    if h <= 0.0 {
        return Err(Error::OutsideFootprint);
    }
    HalfSpacePoint::new(foot, h)
}

/// Transverse meetings of a geodesic with the hemisphere surface.
///
/// Substituting the semicircle parametrization into the sphere equation is
/// linear in cos(theta), so a transverse meeting point is unique; the
/// coplanar case (the geodesic lying on the hemisphere) yields none.
pub fn geodesic_meet_sphere(g: &Geodesic, s: &IsometricSphere) -> Vec<HalfSpacePoint> {
    let mut out = Vec::new();
    match (g.endpoints().0, g.endpoints().1) {
        (BoundaryPoint::Finite(f), BoundaryPoint::Infinity) => {
            if let Ok(p) = vertical_meet_sphere(f, s) {
                out.push(p);
            }
        }
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            let mid = (u + v) / 2.0;
            let e = (v - u) / 2.0;
            let w = mid - s.center;
            let den = 2.0 * (w.conj() * e).re;
            if den.abs() <= 1e-15 * (w.norm_sqr() + e.norm_sqr() + 1.0) {
                return out;
            }
            let t = (s.radius * s.radius - w.norm_sqr() - e.norm_sqr()) / den;
            if t.abs() < 1.0 {
                let h = e.norm() * (1.0 - t * t).sqrt();
                if let Ok(p) = HalfSpacePoint::new(mid + e * t, h) {
                    out.push(p);
                }
            }
        }
        _ => unreachable!("canonical form keeps infinity in e2"),
    }
    out
}

fn cross_ratio(g1: &Geodesic, g2: &Geodesic) -> ComplexValue {
    let (a, b) = g1.endpoints();
    let (cc, d) = g2.endpoints();
    // At most one infinity among the four once shared endpoints are excluded.
    match (a, b, cc, d) {
        (BoundaryPoint::Infinity, _, _, _) => {
            let (b, cc, d) = (fin(b), fin(cc), fin(d));
            (b - d) / (b - cc)
        }
        (_, BoundaryPoint::Infinity, _, _) => {
            let (a, cc, d) = (fin(a), fin(cc), fin(d));
            (a - cc) / (a - d)
        }
        (_, _, BoundaryPoint::Infinity, _) => {
            let (a, b, d) = (fin(a), fin(b), fin(d));
            (b - d) / (a - d)
        }
        (_, _, _, BoundaryPoint::Infinity) => {
            let (a, b, cc) = (fin(a), fin(b), fin(cc));
            (a - cc) / (b - cc)
        }
        _ => {
            let (a, b, cc, d) = (fin(a), fin(b), fin(cc), fin(d));
            ((a - cc) * (b - d)) / ((a - d) * (b - cc))
        }
    }
}

fn fin(p: BoundaryPoint) -> ComplexValue {
    p.as_finite().unwrap_or_else(|| c(0.0, 0.0))
}

/// Distance between two complete geodesics with a relation flag.
///
/// With cross-ratio chi of the endpoint quadruple and w = sqrt(chi), the
/// complex distance is 2 artanh(w), whose real part is ln|1+w| - ln|1-w|.
pub fn geodesic_distance(g1: &Geodesic, g2: &Geodesic, tol: Tol) -> (f64, GeodesicRelation) {
    let (a, b) = g1.endpoints();
    let (cc, d) = g2.endpoints();
    let shared = [(a, cc), (a, d), (b, cc), (b, d)]
        .iter()
        .filter(|(p, q)| p.approx_eq(q, tol.eq))
        .count();
    if g1.approx_eq(g2, tol.eq) {
        return (0.0, GeodesicRelation::Equal);
    }
    if shared >= 1 {
        return (0.0, GeodesicRelation::Asymptotic);
    }
    let w = cross_ratio(g1, g2).sqrt();
    let up = (ComplexValue::new(1.0, 0.0) + w).norm();
    let dn = (ComplexValue::new(1.0, 0.0) - w).norm();
    let dist = if dn == 0.0 {
        f64::INFINITY
    } else {
        (up.ln() - dn.ln()).abs()
    };
    if dist <= tol.eq {
        (dist, GeodesicRelation::Intersecting)
    } else {
        (dist, GeodesicRelation::Disjoint)
    }
}

/// A map sending g to the vertical axis (0, inf).
pub fn map_to_axis(g: &Geodesic) -> MoebiusMap {
    match g.endpoints() {
        (BoundaryPoint::Finite(p), BoundaryPoint::Infinity) => {
            MoebiusMap::translation(-p)
        }
        (BoundaryPoint::Finite(p), BoundaryPoint::Finite(q)) => {
            MoebiusMap::normalize(c(1.0, 0.0), -p, c(1.0, 0.0), -q)
                .expect("distinct endpoints give det p - q != 0")
        }
        _ => unreachable!("canonical form keeps infinity in e2"),
    }
}

/// Hyperbolic distance from a point to a complete geodesic.
pub fn point_to_geodesic(p: &HalfSpacePoint, g: &Geodesic) -> f64 {
    let m = map_to_axis(g);
    let q = m.apply_interior(p).expect("isometry preserves the interior");
    (q.z.norm() / q.h).asinh()
}

/// Half-turn (rotation by pi) about a geodesic.
pub fn half_turn(g: &Geodesic) -> MoebiusMap {
    match g.endpoints() {
        (BoundaryPoint::Finite(u), BoundaryPoint::Infinity) => {
            // z -> 2u - z.
            MoebiusMap::normalize(c(1.0, 0.0), -2.0 * u, c(0.0, 0.0), c(-1.0, 0.0))
                .expect("unimodular after scaling")
        }
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            MoebiusMap::normalize(u + v, -2.0 * u * v, c(2.0, 0.0), -(u + v))
                .expect("det -(u-v)^2 != 0")
        }
        _ => unreachable!("canonical form keeps infinity in e2"),
    }
}

/// Transverse intersection point of two geodesics, if one exists.
pub fn geodesic_intersection(
    g1: &Geodesic,
    g2: &Geodesic,
    tol: Tol,
) -> Option<HalfSpacePoint> {
    let m = map_to_axis(g1);
    let h1 = m.apply_boundary(g2.endpoints().0);
    let h2 = m.apply_boundary(g2.endpoints().1);
    let (u, v) = match (h1, h2) {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => (u, v),
        // Image vertical: shares the endpoint inf with the axis.
        _ => return None,
    };
    let mid = (u + v) / 2.0;
    let e = (v - u) / 2.0;
    if e.norm() == 0.0 {
        return None;
    }
    let t = -(mid * e.conj()).re / e.norm_sqr();
    let residual = (mid + e * t).norm();
    if residual > 1e-6 * (1.0 + mid.norm() + e.norm()) || t.abs() >= 1.0 {
        return None;
    }
    let h = e.norm() * (1.0 - t * t).sqrt();
    let on_axis = HalfSpacePoint::new(c(0.0, 0.0), h).ok()?;
    let _ = tol;
    m.inverse().apply_interior(&on_axis).ok()
}

/// Midpoint of the geodesic segment between two interior points.
pub fn hyperbolic_midpoint(p: &HalfSpacePoint, q: &HalfSpacePoint) -> HalfSpacePoint {
    let s = (q.z - p.z).norm();
    if s <= 1e-12 * (1.0 + p.z.norm() + p.h.abs() + q.h.abs()) {
        // Vertical segment: geometric mean of heights.
        let z = (p.z + q.z) / 2.0;
        return HalfSpacePoint::new(z, (p.h * q.h).sqrt()).expect("positive heights");
    }
    let u = (q.z - p.z) / s;
    let x0 = (s * s + q.h * q.h - p.h * p.h) / (2.0 * s);
    let radius = x0.hypot(p.h);
    let phi_p = p.h.atan2(-x0);
    let phi_q = q.h.atan2(s - x0);
    // Arc length along the semicircle: xi(phi) = ln tan(phi/2).
    let xi = ((phi_p / 2.0).tan().ln() + (phi_q / 2.0).tan().ln()) / 2.0;
    let phi = 2.0 * xi.exp().atan();
    let z = p.z + u * (x0 + radius * phi.cos());
    HalfSpacePoint::new(z, radius * phi.sin()).expect("interior midpoint")
}

/// Feet of the common perpendicular: the closest point pair (q1 on g1,
/// q2 on g2) of two disjoint geodesics.
///
/// The perpendicular is the axis of the composition of the two half-turns;
/// its endpoints are the fixed points of that composition.
pub fn common_perpendicular(
    g1: &Geodesic,
    g2: &Geodesic,
    tol: Tol,
) -> Result<(HalfSpacePoint, HalfSpacePoint)> {
    let k = half_turn(g1).compose(&half_turn(g2));
    let perp = if k.c.norm() <= FIXES_INFINITY {
        let den = k.d - k.a;
        if den.norm() <= FIXES_INFINITY {
            return Err(Error::DegenerateConfiguration);
        }
        Geodesic::new(BoundaryPoint::Finite(k.b / den), BoundaryPoint::Infinity)?
    } else {
        let disc = (k.d - k.a) * (k.d - k.a) + 4.0 * k.c * k.b;
        let sq = disc.sqrt();
        let z1 = ((k.a - k.d) + sq) / (2.0 * k.c);
        let z2 = ((k.a - k.d) - sq) / (2.0 * k.c);
        Geodesic::new(BoundaryPoint::Finite(z1), BoundaryPoint::Finite(z2))
            .map_err(|_| Error::DegenerateConfiguration)?
    };
    let q1 = geodesic_intersection(&perp, g1, tol).ok_or(Error::DegenerateConfiguration)?;
    let q2 = geodesic_intersection(&perp, g2, tol).ok_or(Error::DegenerateConfiguration)?;
    Ok((q1, q2))
}

/// Equidistant sphere between the horoballs of delta^-1(inf) and
/// gamma^-1(inf): the delta^-1-image of I(gamma delta^-1).
pub fn equidistant_surface(
    delta: &MoebiusMap,
    gamma: &MoebiusMap,
    tol: Tol,
) -> Result<SphereImage> {
    let q = gamma.compose(&delta.inverse());
    if q.c.norm() <= FIXES_INFINITY {
        return Err(Error::CoincidentHoroballs);
    }
    transform_sphere(&delta.inverse(), &isometric_sphere(&q)?, tol)
}
