//! Tunnel geodesics: dual arcs, triangle areas and self-intersection.

use crate::complex::{BoundaryPoint, ComplexValue, HalfSpacePoint};
use crate::ford::{sphere_relation, SphereRelation};
use crate::geometry::{
    common_perpendicular, dual_geodesic, equidistant_surface, geodesic_distance,
    geodesic_intersection, hyperbolic_midpoint, isometric_sphere, point_to_geodesic,
    vertical_meet_sphere, Geodesic, GeodesicRelation, GeodesicSegment, SegmentEnd, SphereImage,
};
use crate::group::{
    enumerate, prop42_family, thm43_family, CompressionBodyRep, FamilyTag, Word,
};
use crate::moebius::MoebiusMap;
use crate::{Error, Result, Tol};
use alloc::vec;
// Brings sqrt/ln/atan2 into scope for no_std builds; redundant under std.
#[allow(unused_imports)]
use num_traits::Float;

/// The three lift arcs of a quotient tunnel geodesic.
///
/// alpha1 and alpha3 are vertical (one ideal end at infinity); alpha2's
/// carrier joins the centers of I(delta^-1) and I(gamma delta^-1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcTriple {
    pub alpha1: GeodesicSegment,
    pub alpha2: GeodesicSegment,
    pub alpha3: GeodesicSegment,
}

/// Vertices of the area-test triangle, as interior points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrianglePoints {
    pub p1: HalfSpacePoint,
    pub p2: HalfSpacePoint,
    pub p3: HalfSpacePoint,
}

impl TrianglePoints {
    pub fn projections(&self) -> (ComplexValue, ComplexValue, ComplexValue) {
        (self.p1.z, self.p2.z, self.p3.z)
    }
}

/// Result of the bisection hunt for a vanishing signed area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionFinding {
    pub k: usize,
    pub t0: f64,
    pub residual_area: f64,
    pub lift_distance_at_t0: f64,
    pub witness: (Geodesic, Geodesic),
    /// The vertical lift's foot lies strictly inside the open segment of
    /// the other lift's feet (collinearity alone permits a miss).
    pub betweenness: bool,
}

/// Ball witnessing two near-intersecting arcs of one quotient geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonBall {
    pub center: HalfSpacePoint,
    pub radius: f64,
    pub lift_distances: (f64, f64),
}

/// One-parameter families with a movable generator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TunnelFamily {
    Prop42,
    Thm43 { n: usize },
}

fn family_rep(family: TunnelFamily, k: usize, t: f64) -> Result<CompressionBodyRep> {
    match family {
        TunnelFamily::Prop42 => {
            if k != 1 {
                return Err(Error::OutOfRange);
            }
            prop42_family(t)
        }
        TunnelFamily::Thm43 { n } => {
            if k == 0 || k >= n {
                return Err(Error::OutOfRange);
            }
            let mut ts = vec![2.0; n];
            ts[k - 1] = t;
            thm43_family(n, &ts)
        }
    }
}

/// Role assignment for index k: the fixed generator plays delta, the element
/// delta_k = gamma_k^-1 gamma_n plays gamma, and gamma_k is the movable
/// generator whose sphere receives p3.
struct TunnelRoles {
    fixed: MoebiusMap,
    varying: MoebiusMap,
    delta_elem: MoebiusMap,
}

fn resolve_roles(rep: &CompressionBodyRep, k: usize) -> Result<TunnelRoles> {
    let (fixed, varying) = match &rep.family {
        Some(FamilyTag::Prop42 { .. }) => {
            if k != 1 {
                return Err(Error::OutOfRange);
            }
            (rep.gammas[0], rep.gammas[1])
        }
        Some(FamilyTag::Thm43 { n, .. }) => {
            if k == 0 || k >= *n {
                return Err(Error::OutOfRange);
            }
            (rep.gammas[*n - 1], rep.gammas[k - 1])
        }
        _ => return Err(Error::NotFamilyRep),
    };
    Ok(TunnelRoles {
        fixed,
        varying,
        delta_elem: varying.inverse().compose(&fixed),
    })
}

/// Decomposes the quotient image of the dual of I(gamma) into the three
/// lift arcs, given I(gamma) inside the half-ball of I(delta).
///
/// alpha1 descends the dual from infinity to I(delta); alpha2 is the
/// delta-image of the dual segment between I(delta) and the equidistant
/// surface, running from I(delta^-1) to I(gamma delta^-1); alpha3 descends
/// the dual of I(gamma^-1) to I(delta gamma^-1).
pub fn dual_arc_decomposition(
    delta: &MoebiusMap,
    gamma: &MoebiusMap,
    tol: Tol,
) -> Result<ArcTriple> {
    let ig = isometric_sphere(gamma)?;
    let id = isometric_sphere(delta)?;
    if sphere_relation(&ig, &id, tol).0 != SphereRelation::S1InsideS2 {
        return Err(Error::HypothesisViolated);
    }
    let dual = dual_geodesic(gamma)?;
    let q1 = vertical_meet_sphere(ig.center, &id)?;
    let alpha1 = GeodesicSegment::new(
        dual,
        SegmentEnd::Ideal(BoundaryPoint::Infinity),
        SegmentEnd::Interior(q1),
    )?;
    let surface = match equidistant_surface(delta, gamma, tol)? {
        SphereImage::Sphere(s) => s,
        SphereImage::Plane(_) => return Err(Error::DegenerateConfiguration),
    };
    let q2 = vertical_meet_sphere(ig.center, &surface)?;
    let alpha2 = GeodesicSegment::new(
        dual.map(delta)?,
        SegmentEnd::Interior(delta.apply_interior(&q1)?),
        SegmentEnd::Interior(delta.apply_interior(&q2)?),
    )?;
    let dual_inv = dual_geodesic(&gamma.inverse())?;
    let idg = isometric_sphere(&delta.compose(&gamma.inverse()))?;
    let q3 = vertical_meet_sphere(
        isometric_sphere(&gamma.inverse())?.center,
        &idg,
    )?;
    let alpha3 = GeodesicSegment::new(
        dual_inv,
        SegmentEnd::Ideal(BoundaryPoint::Infinity),
        SegmentEnd::Interior(q3),
    )?;
    Ok(ArcTriple {
        alpha1,
        alpha2,
        alpha3,
    })
}

/// The triangle vertices for index k of a built-in family.
///
/// p1 and p2 are the images under the fixed generator of the dual's
/// meetings with its isometric sphere and with the equidistant surface;
/// p3 is the meeting of the dual of I(delta_k^-1) with the movable
/// generator's sphere I(gamma_k).
pub fn triangle_points(rep: &CompressionBodyRep, k: usize) -> Result<TrianglePoints> {
    let roles = resolve_roles(rep, k)?;
    let tol = rep.tol;
    let ig = isometric_sphere(&roles.delta_elem)?;
    let id = isometric_sphere(&roles.fixed)?;
    let q1 =
        vertical_meet_sphere(ig.center, &id).map_err(|_| Error::DegenerateConfiguration)?;
    let p1 = roles.fixed.apply_interior(&q1)?;
    let surface = match equidistant_surface(&roles.fixed, &roles.delta_elem, tol)? {
        SphereImage::Sphere(s) => s,
        SphereImage::Plane(_) => return Err(Error::DegenerateConfiguration),
    };
    let q2 = vertical_meet_sphere(ig.center, &surface)
        .map_err(|_| Error::DegenerateConfiguration)?;
    let p2 = roles.fixed.apply_interior(&q2)?;
    let p3 = vertical_meet_sphere(
        isometric_sphere(&roles.delta_elem.inverse())?.center,
        &isometric_sphere(&roles.varying)?,
    )
    .map_err(|_| Error::DegenerateConfiguration)?;
    Ok(TrianglePoints { p1, p2, p3 })
}

/// Half the z-component of the cross product of the projected edge
/// vectors (p1 - p3) and (p2 - p3).
pub fn signed_area(pts: &TrianglePoints) -> f64 {
    let u = pts.p1.z - pts.p3.z;
    let v = pts.p2.z - pts.p3.z;
    0.5 * (u.re * v.im - u.im * v.re)
}

/// The two lifts whose meeting decides self-intersection: the geodesic
/// joining the centers of I(gamma_k^-1) and I(gamma_n^-1), and the dual
/// of I(delta_k^-1).
pub fn lift_pair(rep: &CompressionBodyRep, k: usize) -> Result<(Geodesic, Geodesic)> {
    let roles = resolve_roles(rep, k)?;
    let ea = isometric_sphere(&roles.varying.inverse())?.center;
    let eb = isometric_sphere(&roles.fixed.inverse())?.center;
    let ga = Geodesic::new(BoundaryPoint::Finite(ea), BoundaryPoint::Finite(eb))
        .map_err(|_| Error::DegenerateConfiguration)?;
    let gb = dual_geodesic(&roles.delta_elem.inverse())?;
    Ok((ga, gb))
}

/// Distance between the two lifts of the tunnel geodesic for index k.
pub fn lift_pair_distance(
    rep: &CompressionBodyRep,
    k: usize,
) -> Result<(f64, GeodesicRelation)> {
    let (ga, gb) = lift_pair(rep, k)?;
    Ok(geodesic_distance(&ga, &gb, rep.tol))
}

fn betweenness_verified(ga: &Geodesic, gb: &Geodesic) -> bool {
    let foot = match gb.foot() {
        Some(f) => f,
        None => return false,
    };
    let (u, v) = match ga.endpoints() {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => (u, v),
        _ => return false,
    };
    let dir = v - u;
    let w = foot - u;
    let den = dir.norm_sqr();
    if den == 0.0 {
        return false;
    }
    let cross = (w.re * dir.im - w.im * dir.re).abs();
    if cross > 1e-6 * (1.0 + foot.norm() + u.norm() + v.norm()) {
        return false;
    }
    let s = (w.re * dir.re + w.im * dir.im) / den;
    s > 1e-9 && s < 1.0 - 1e-9
}

/// Bisects the signed area over the interval to find the parameter t0
/// where the triangle degenerates and the lifts cross.
///
/// Plain bisection on the sign change; stops at |hi - lo| <= tol.
pub fn find_t0(
    family: TunnelFamily,
    k: usize,
    interval: (f64, f64),
    tol: f64,
) -> Result<IntersectionFinding> {
    let (mut lo, mut hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && tol > 0.0) {
        return Err(Error::OutOfRange);
    }
    let area_at = |t: f64| -> Result<f64> {
        let rep = family_rep(family, k, t)?;
        Ok(signed_area(&triangle_points(&rep, k)?))
    };
    let mut f_lo = area_at(lo)?;
    let f_hi = area_at(hi)?;
    let t0 = if f_lo == 0.0 {
        lo
    } else if f_hi == 0.0 {
        hi
    } else if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange);
    } else {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = area_at(mid)?;
            if f_mid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let rep = family_rep(family, k, t0)?;
    let residual_area = signed_area(&triangle_points(&rep, k)?);
    let (ga, gb) = lift_pair(&rep, k)?;
    let (dist, _) = geodesic_distance(&ga, &gb, rep.tol);
    Ok(IntersectionFinding {
        k,
        t0,
        residual_area,
        lift_distance_at_t0: dist,
        witness: (ga, gb),
        betweenness: betweenness_verified(&ga, &gb),
    })
}

/// Minimum distance from g to its images under enumerated group elements,
/// with the minimizing pair of words (identity, witness).
///
/// Stabilizer images (equal as sets) are excluded, as are asymptotic
/// images: their infimum 0 is unattained at any interior point, so they
/// never witness a self-intersection. With nothing to compare the
/// distance is infinite and both words are the identity.
pub fn min_translate_distance(
    rep: &CompressionBodyRep,
    g: &Geodesic,
    max_len: usize,
    lattice_bound: i32,
) -> Result<(f64, (Word, Word))> {
    let mut best: Option<(f64, Word)> = None;
    for element in enumerate(rep, max_len, lattice_bound)? {
        let image = match g.map(&element.map) {
            Ok(image) => image,
            Err(_) => continue,
        };
        let (dist, relation) = geodesic_distance(g, &image, rep.tol);
        if matches!(
            relation,
            GeodesicRelation::Equal | GeodesicRelation::Asymptotic
        ) {
            continue;
        }
        if best.as_ref().map_or(true, |(b, _)| dist < *b) {
            best = Some((dist, element.word));
        }
    }
    match best {
        Some((dist, word)) => Ok((dist, (Word::identity(), word))),
        None => Ok((f64::INFINITY, (Word::identity(), Word::identity()))),
    }
}

/// Ball of radius eps about a point that both lifts pass within eps/4 of,
/// witnessing the two sub-arcs of the tunnel inside one ball.
pub fn epsilon_ball_witness(
    rep: &CompressionBodyRep,
    k: usize,
    eps: f64,
) -> Result<EpsilonBall> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::OutOfRange);
    }
    let (ga, gb) = lift_pair(rep, k)?;
    let (dist, relation) = geodesic_distance(&ga, &gb, rep.tol);
    if matches!(
        relation,
        GeodesicRelation::Equal | GeodesicRelation::Asymptotic
    ) {
        return Err(Error::DegenerateConfiguration);
    }
    if dist > eps / 2.0 {
        return Err(Error::TooFarApart);
    }
    let center = match geodesic_intersection(&ga, &gb, rep.tol) {
        Some(p) => p,
        None => {
            let (q1, q2) = common_perpendicular(&ga, &gb, rep.tol)?;
            hyperbolic_midpoint(&q1, &q2)
        }
    };
    Ok(EpsilonBall {
        center,
        radius: eps,
        lift_distances: (
            point_to_geodesic(&center, &ga),
            point_to_geodesic(&center, &gb),
        ),
    })
}
