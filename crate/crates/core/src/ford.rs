//! Ford domain assembly: sphere relations, visibility and simplicity.

use crate::complex::ComplexValue;
use crate::geometry::{isometric_sphere, transform_sphere, IsometricSphere, SphereImage};
use crate::group::{
    enumerate, fundamental_parallelogram, lattice_coords, lattice_translates_in_window,
    reduced_basis, shortest_lattice_length, CompressionBodyRep, GroupElement, Region, Word,
};
use crate::moebius::MoebiusMap;
use crate::{cmp_f64, Result, Tol};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
// Brings sqrt/ln/atan2 into scope for no_std builds; redundant under std.
#[allow(unused_imports)]
use num_traits::Float;

/// Relative position of two hemisphere footprints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereRelation {
    Disjoint,
    Tangent,
    Overlapping,
    S1InsideS2,
    S2InsideS1,
    Equal,
}

/// Classification with the signed rim gap |c1 - c2| - (r1 + r2).
///
/// Strict containment is tolerance-guarded; both external and internal
/// tangency report Tangent.
pub fn sphere_relation(
    s1: &IsometricSphere,
    s2: &IsometricSphere,
    tol: Tol,
) -> (SphereRelation, f64) {
    let d = (s1.center - s2.center).norm();
    let gap = d - (s1.radius + s2.radius);
    let relation = if d <= tol.eq && (s1.radius - s2.radius).abs() <= tol.eq {
        SphereRelation::Equal
    } else if gap.abs() <= tol.eq {
        SphereRelation::Tangent
    } else if (d + s1.radius - s2.radius).abs() <= tol.eq
        || (d + s2.radius - s1.radius).abs() <= tol.eq
    {
        SphereRelation::Tangent
    } else if d + s1.radius < s2.radius - tol.eq {
        SphereRelation::S1InsideS2
    } else if d + s2.radius < s1.radius - tol.eq {
        SphereRelation::S2InsideS1
    } else if gap > tol.eq {
        SphereRelation::Disjoint
    } else {
        SphereRelation::Overlapping
    };
    (relation, gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Visible,
    Invisible,
    Uncertain,
}

/// Sampled visibility of a hemisphere against a collection of others.
///
/// Samples the apex plus grid_res radius fractions times 4*grid_res angles.
/// The clearance of a sample against another sphere is its Euclidean
/// distance to that sphere's surface (negative inside the half-ball); the
/// margin is max over samples of min over others. Margin above tolerance
/// means some sample is exposed (visible); below -tolerance every sample is
/// covered (invisible). The max-min is exact: a sample's scan stops early
/// only once its running min cannot exceed the best margin found.
pub fn visibility(
    target: &IsometricSphere,
    others: &[IsometricSphere],
    grid_res: usize,
    tol: Tol,
) -> (Visibility, f64) {
    if others.is_empty() {
        return (Visibility::Visible, f64::INFINITY);
    }
    let angles: Vec<(f64, f64)> = (0..4 * grid_res.max(1))
        .map(|l| {
            let th = core::f64::consts::TAU * l as f64 / (4 * grid_res.max(1)) as f64;
            (th.cos(), th.sin())
        })
        .collect();
    let mut best = f64::NEG_INFINITY;
    let scan = |z: ComplexValue, h: f64, best: &mut f64| {
        let mut low = f64::INFINITY;
        for o in others {
            let e = ((z - o.center).norm_sqr() + h * h).sqrt() - o.radius;
            if e < low {
                low = e;
                if low <= *best {
                    return;
                }
            }
        }
        if low > *best {
            *best = low;
        }
    };
    scan(target.center, target.radius, &mut best);
    for j in 1..=grid_res {
        let f = (j as f64 - 0.5) / grid_res as f64;
        let rho = f * target.radius;
        let h = target.radius * (1.0 - f * f).sqrt();
        for (cs, sn) in &angles {
            let z = target.center + ComplexValue::new(rho * cs, rho * sn);
            scan(z, h, &mut best);
        }
    }
    let verdict = if best > tol.eq {
        Visibility::Visible
    } else if best < -tol.eq {
        Visibility::Invisible
    } else {
        Visibility::Uncertain
    };
    (verdict, best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleVerdict {
    Simple,
    NotSimple,
    Uncertain,
}

/// Outcome of the simple-Ford test: the worst pair among all generator
/// spheres and their lattice translates.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFordReport {
    pub verdict: SimpleVerdict,
    pub witness: Option<(IsometricSphere, IsometricSphere, SphereRelation)>,
    pub min_gap: f64,
}

/// Generator spheres I(gamma_i^±) in order gamma_1, gamma_1^-1, gamma_2, ...
pub fn generator_spheres(rep: &CompressionBodyRep) -> Result<Vec<IsometricSphere>> {
    let mut out = Vec::with_capacity(2 * rep.gammas.len());
    for g in &rep.gammas {
        out.push(isometric_sphere(g)?);
        out.push(isometric_sphere(&g.inverse())?);
    }
    Ok(out)
}

/// Pairwise disjointness of generator spheres and all lattice translates.
///
/// Each unordered sphere pair is reduced modulo the lattice: the offset
/// between centers is expressed in a Gauss-reduced basis and candidate
/// translates within ±2 of the rounded coordinates are classified. For a
/// sphere against its own translates the zero vector is excluded.
pub fn is_simple_ford(rep: &CompressionBodyRep) -> Result<SimpleFordReport> {
    let tol = rep.tol;
    let spheres = generator_spheres(rep)?;
    let (bu, bv) = reduced_basis(rep.t_alpha, rep.t_beta);
    let det = (bu.conj() * bv).im;
    let coords = |w: ComplexValue| {
        let p = (w.conj() * bv).im / det;
        let q = (bu.conj() * w).im / det;
        (p, q)
    };
    let mut min_gap = f64::INFINITY;
    let mut witness: Option<(IsometricSphere, IsometricSphere, SphereRelation)> = None;
    let mut worst = SphereRelation::Disjoint;
    let severity = |r: SphereRelation| match r {
        SphereRelation::Disjoint => 0,
        SphereRelation::Tangent => 1,
        SphereRelation::Overlapping => 2,
        SphereRelation::S1InsideS2 | SphereRelation::S2InsideS1 => 3,
        SphereRelation::Equal => 4,
    };
    for i in 0..spheres.len() {
        for j in i..spheres.len() {
            let (p0, q0) = coords(spheres[i].center - spheres[j].center);
            for dp in -2..=2i64 {
                for dq in -2..=2i64 {
                    let p = p0.round() as i64 + dp;
                    let q = q0.round() as i64 + dq;
                    if i == j && p == 0 && q == 0 {
                        continue;
                    }
                    let tau = p as f64 * bu + q as f64 * bv;
                    let moved = IsometricSphere::new(spheres[j].center + tau, spheres[j].radius);
                    let (rel, gap) = sphere_relation(&spheres[i], &moved, tol);
                    let more_severe = severity(rel) > severity(worst);
                    if gap < min_gap || more_severe {
                        if gap < min_gap {
                            min_gap = gap;
                        }
                        if more_severe || witness.is_none() || gap <= min_gap {
                            witness = Some((spheres[i].clone(), moved.clone(), rel));
                        }
                        if more_severe {
                            worst = rel;
                        }
                    }
                }
            }
        }
    }
    let verdict = match worst {
        _ if severity(worst) >= 2 => SimpleVerdict::NotSimple,
        SphereRelation::Tangent => SimpleVerdict::Uncertain,
        _ if min_gap <= tol.eq => SimpleVerdict::Uncertain,
        _ => SimpleVerdict::Simple,
    };
    Ok(SimpleFordReport {
        verdict,
        witness,
        min_gap,
    })
}

/// One reported sphere of a Ford footprint.
#[derive(Debug, Clone, PartialEq)]
pub struct FootprintSphere {
    pub sphere: IsometricSphere,
    pub visibility: Visibility,
    /// Clearance against the locality-filtered candidate pool; +infinity
    /// when nothing comes near.
    pub margin: f64,
}

/// Ford domain footprint over the fundamental parallelogram: one sphere per
/// lattice class (the representative with center inside the parallelogram),
/// each classified by sampled visibility.
#[derive(Debug, Clone, PartialEq)]
pub struct FordFootprint {
    pub spheres: Vec<FootprintSphere>,
    pub parallelogram: Region,
    pub max_len: usize,
    pub lattice_bound: i32,
    pub grid_res: usize,
}

/// Tolerance dedup of spheres keyed by quantized center and radius.
struct SphereDedup {
    tol: f64,
    quantum: f64,
    buckets: BTreeMap<(i64, i64, i64), Vec<(ComplexValue, f64)>>,
}

impl SphereDedup {
    fn new(tol: f64) -> SphereDedup {
        SphereDedup {
            tol,
            quantum: (tol * 1e3).max(1e-6),
            buckets: BTreeMap::new(),
        }
    }

    fn insert(&mut self, s: &IsometricSphere) -> bool {
        let q = |x: f64| (x / self.quantum).round().clamp(-1e15, 1e15) as i64;
        let key = (q(s.center.re), q(s.center.im), q(s.radius));
        for di in -1..=1i64 {
            for dj in -1..=1i64 {
                for dk in -1..=1i64 {
                    if let Some(b) = self.buckets.get(&(key.0 + di, key.1 + dj, key.2 + dk)) {
                        if b.iter().any(|(c0, r0)| {
                            (c0 - s.center).norm() <= self.tol && (r0 - s.radius).abs() <= self.tol
                        }) {
                            return false;
                        }
                    }
                }
            }
        }
        self.buckets
            .entry(key)
            .or_default()
            .push((s.center, s.radius));
        true
    }
}

/// Translates of s whose footprint disk comes within `pad` of the window.
fn translates_near(
    s: &IsometricSphere,
    rep: &CompressionBodyRep,
    window: &Region,
    pad: f64,
) -> Vec<IsometricSphere> {
    // Reuses the bounding-box search by inflating the radius, then restores it.
    let inflated = IsometricSphere {
        center: s.center,
        radius: s.radius + pad,
        owner: s.owner.clone(),
    };
    lattice_translates_in_window(&inflated, rep, window)
        .into_iter()
        .map(|mut t| {
            t.radius = s.radius;
            t
        })
        .collect()
}

/// The translate of s whose center lies in the half-open window.
fn canonical_translate(s: &IsometricSphere, rep: &CompressionBodyRep) -> IsometricSphere {
    let (x, y) = lattice_coords(rep, s.center);
    let j = -x.floor();
    let k = -y.floor();
    let tau = j * rep.t_alpha + k * rep.t_beta;
    s.translated(tau, j as i32, k as i32)
}

pub fn ford_footprint(
    rep: &CompressionBodyRep,
    max_len: usize,
    lattice_bound: i32,
    grid_res: usize,
) -> Result<FordFootprint> {
    let tol = rep.tol;
    let para = fundamental_parallelogram(rep);
    let elements = enumerate(rep, max_len, lattice_bound)?;
    let mut base: Vec<IsometricSphere> = Vec::new();
    let mut dedup = SphereDedup::new(tol.eq);
    for el in &elements {
        if el.map.c.norm() <= 1e-12 {
            continue;
        }
        let mut s = isometric_sphere(&el.map)?;
        s.owner = Some(el.word.clone());
        // Distinct words often share a sphere (leading offsets are invisible
        // to the center formula); canonical class representatives dedup them.
        let rep_sphere = canonical_translate(&s, rep);
        if dedup.insert(&rep_sphere) {
            base.push(rep_sphere);
        }
    }
    let r_max = base.iter().map(|s| s.radius).fold(0.0f64, f64::max);
    let mut pool: Vec<IsometricSphere> = Vec::new();
    for s in &base {
        pool.extend(translates_near(s, rep, &para, 3.0 * r_max));
    }
    let mut spheres: Vec<FootprintSphere> = Vec::new();
    for target in &base {
        let candidates: Vec<IsometricSphere> = pool
            .iter()
            .filter(|o| {
                let same = (o.center - target.center).norm() <= tol.eq
                    && (o.radius - target.radius).abs() <= tol.eq;
                !same
                    && (o.center - target.center).norm()
                        < o.radius + target.radius + 4.0 * r_max
            })
            .cloned()
            .collect();
        let (verdict, margin) = visibility(target, &candidates, grid_res, tol);
        spheres.push(FootprintSphere {
            sphere: target.clone(),
            visibility: verdict,
            margin,
        });
    }
    spheres.sort_by(|a, b| {
        cmp_f64(a.sphere.center.re, b.sphere.center.re)
            .then(cmp_f64(a.sphere.center.im, b.sphere.center.im))
            .then(cmp_f64(a.sphere.radius, b.sphere.radius))
    });
    Ok(FordFootprint {
        spheres,
        parallelogram: para,
        max_len,
        lattice_bound,
        grid_res,
    })
}

/// Residual of one generator's gluing identity.
#[derive(Debug, Clone, PartialEq)]
pub struct FacePairingReport {
    pub pass: bool,
    /// Per generator: worst deviation of g(I(g)) from I(g^-1) over both
    /// directions (center and radius combined).
    pub residuals: Vec<f64>,
}

const FACE_PAIRING_BOUND: f64 = 1e-8;

/// Checks the gluing identity g(I(g)) = I(g^-1) for every generator, in
/// both directions.
///
/// Two residuals are combined: the sphere-level image of transform_sphere
/// against the inverse sphere, and surface samples pushed through the
/// interior action, measured against the inverse sphere's equation. The
/// point-level check is the one that catches non-unimodular matrices (the
/// sphere-level identity alone is determinant-blind).
pub fn face_pairing_check(rep: &CompressionBodyRep) -> Result<FacePairingReport> {
    let tol = rep.tol;
    let mut residuals = Vec::with_capacity(rep.gammas.len());
    for g in &rep.gammas {
        let mut worst = 0.0f64;
        for m in [*g, g.inverse()] {
            let source = isometric_sphere(&m)?;
            let expect = isometric_sphere(&m.inverse())?;
            let res = match transform_sphere(&m, &source, tol)? {
                SphereImage::Sphere(img) => {
                    (img.center - expect.center).norm() + (img.radius - expect.radius).abs()
                }
                SphereImage::Plane(_) => f64::INFINITY,
            };
            worst = worst.max(res);
            for lat in [0.25f64, 0.6, 0.9] {
                let h = source.radius * (1.0 - lat * lat).sqrt();
                for az in 0..12 {
                    let th = core::f64::consts::TAU * az as f64 / 12.0;
                    let z = source.center
                        + lat * source.radius * ComplexValue::new(th.cos(), th.sin());
                    let p = crate::complex::HalfSpacePoint::new(z, h)?;
                    let q = m.apply_interior(&p)?;
                    let res = (q.z - expect.center).norm_sqr() + q.h * q.h
                        - expect.radius * expect.radius;
                    worst = worst.max(res.abs());
                }
            }
        }
        residuals.push(worst);
    }
    let pass = residuals.iter().all(|r| *r <= FACE_PAIRING_BOUND);
    Ok(FacePairingReport { pass, residuals })
}

/// Rewrites each generator as x^-1 gamma w with lattice elements x, w so
/// that the centers of both its isometric spheres lie in the fundamental
/// parallelogram. Radii are unchanged; the family tag is dropped whenever a
/// generator actually moves (family-specific constructions assume the
/// family's own sphere positions).
pub fn normalize_generators(rep: &CompressionBodyRep) -> Result<CompressionBodyRep> {
    let lattice_floor = |z: ComplexValue| {
        let (x, y) = lattice_coords(rep, z);
        x.floor() * rep.t_alpha + y.floor() * rep.t_beta
    };
    let mut gammas = Vec::with_capacity(rep.gammas.len());
    let mut moved = false;
    for g in &rep.gammas {
        let fwd = isometric_sphere(g)?;
        let bwd = isometric_sphere(&g.inverse())?;
        // Right factor T(tau) moves I(g) by -tau; left factor T(sigma)
        // moves I(g^-1) by +sigma and leaves I(g) alone.
        let tau = lattice_floor(fwd.center);
        let sigma = -lattice_floor(bwd.center);
        if tau.norm() > 0.0 || sigma.norm() > 0.0 {
            moved = true;
        }
        gammas.push(
            MoebiusMap::translation(sigma)
                .compose(g)
                .compose(&MoebiusMap::translation(tau)),
        );
    }
    Ok(CompressionBodyRep {
        t_alpha: rep.t_alpha,
        t_beta: rep.t_beta,
        gammas,
        tol: rep.tol,
        family: if moved { None } else { rep.family.clone() },
    })
}

/// Indiscreteness certificate: elements whose sphere radius exceeds the
/// minimal lattice translation length.
#[derive(Debug, Clone, PartialEq)]
pub struct AlarmReport {
    pub alarm: bool,
    /// Minimal nonzero lattice translation length T.
    pub threshold: f64,
    /// Offending words with their sphere radii (radius > T + tolerance).
    pub offenders: Vec<(Word, f64)>,
}

/// A discrete group with a rank-2 parabolic subgroup fixing infinity keeps
/// every isometric sphere radius at most the minimal translation length T;
/// any larger sphere certifies indiscreteness.
pub fn discreteness_alarm(rep: &CompressionBodyRep, elements: &[GroupElement]) -> AlarmReport {
    let (bu, bv) = reduced_basis(rep.t_alpha, rep.t_beta);
    let mut threshold = shortest_lattice_length(rep.t_alpha, rep.t_beta);
    for j in -2..=2i32 {
        for k in -2..=2i32 {
            if j == 0 && k == 0 {
                continue;
            }
            threshold = threshold.min((j as f64 * bu + k as f64 * bv).norm());
        }
    }
    let mut offenders = Vec::new();
    for el in elements {
        if el.map.c.norm() <= 1e-12 {
            continue;
        }
        let radius = 1.0 / el.map.c.norm();
        if radius > threshold + rep.tol.eq {
            offenders.push((el.word.clone(), radius));
        }
    }
    AlarmReport {
        alarm: !offenders.is_empty(),
        threshold,
        offenders,
    }
}
