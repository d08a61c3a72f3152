//! Representation data, word enumeration and the cusp lattice.

use crate::complex::{c, ComplexValue};
use crate::moebius::{MapClass, MoebiusMap};
use crate::{Error, Result, Tol, FIXES_INFINITY};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
// Brings sqrt/ln/atan2 into scope for no_std builds; redundant under std.
#[allow(unused_imports)]
use num_traits::Float;

/// Lattice offset (j, k) standing for translation by j*t_alpha + k*t_beta.
pub type LatticeOffset = (i32, i32);

/// Single generator letter: gamma_{index+1} or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(&self) -> Letter {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }
}

/// Freely reduced word: offsets o_0..o_L interleaved with letters l_1..l_L,
/// naming the element T(o_0) l_1 T(o_1) ... l_L T(o_L).
///
/// Keeping offsets on both sides of every letter makes the truncated word
/// set closed under inversion. Invariant: offsets.len() == letters.len() + 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    letters: Vec<Letter>,
    offsets: Vec<LatticeOffset>,
}

impl Word {
    pub fn new(letters: Vec<Letter>, offsets: Vec<LatticeOffset>) -> Word {
        assert_eq!(
            offsets.len(),
            letters.len() + 1,
            "a word carries one more offset than letters"
        );
        Word { letters, offsets }
    }

    pub fn identity() -> Word {
        Word {
            letters: Vec::new(),
            offsets: vec![(0, 0)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn offsets(&self) -> &[LatticeOffset] {
        &self.offsets
    }

    pub fn syllable_len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty() && self.offsets.iter().all(|o| *o == (0, 0))
    }

    /// No adjacent inverse pair separated by a zero offset.
    pub fn is_freely_reduced(&self) -> bool {
        (1..self.letters.len()).all(|i| {
            self.letters[i] != self.letters[i - 1].inverted() || self.offsets[i] != (0, 0)
        })
    }

    pub fn inverse(&self) -> Word {
        let letters = self.letters.iter().rev().map(Letter::inverted).collect();
        let offsets = self
            .offsets
            .iter()
            .rev()
            .map(|(j, k)| (-j, -k))
            .collect();
        Word { letters, offsets }
    }

    /// Append (dj, dk) to the trailing offset: the word for w * T(dj, dk).
    pub fn translated(&self, dj: i32, dk: i32) -> Word {
        let mut out = self.clone();
        let last = out.offsets.last_mut().expect("offsets are never empty");
        last.0 += dj;
        last.1 += dk;
        out
    }

    pub fn evaluate(&self, rep: &CompressionBodyRep) -> MoebiusMap {
        let tau = |o: &LatticeOffset| {
            MoebiusMap::translation(o.0 as f64 * rep.t_alpha + o.1 as f64 * rep.t_beta)
        };
        let mut acc = tau(&self.offsets[0]);
        for (i, l) in self.letters.iter().enumerate() {
            let g = if l.inverse {
                rep.gammas[l.index].inverse()
            } else {
                rep.gammas[l.index]
            };
            acc = acc.compose(&g).compose(&tau(&self.offsets[i + 1]));
        }
        acc
    }
}

impl core::fmt::Display for Word {
    /// Tokens joined by dots: a{j} and b{k} for offsets, g{i} / G{i} for
    /// gamma_i and its inverse; the empty word prints as "e".
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut tokens: Vec<String> = Vec::new();
        let push_offset = |tokens: &mut Vec<String>, o: &LatticeOffset| {
            if o.0 != 0 {
                tokens.push(alloc::format!("a{}", o.0));
            }
            if o.1 != 0 {
                tokens.push(alloc::format!("b{}", o.1));
            }
        };
        push_offset(&mut tokens, &self.offsets[0]);
        for (i, l) in self.letters.iter().enumerate() {
            let name = if l.inverse { 'G' } else { 'g' };
            tokens.push(alloc::format!("{}{}", name, l.index + 1));
            push_offset(&mut tokens, &self.offsets[i + 1]);
        }
        if tokens.is_empty() {
            return f.write_str("e");
        }
        f.write_str(&tokens.join("."))
    }
}

/// Group element: a word together with its evaluated map.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub word: Word,
    pub map: MoebiusMap,
}

/// Which built-in family produced a representation, with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyTag {
    SimpleFord,
    Prop42 { t: f64 },
    Thm43 { n: usize, t: Vec<f64> },
}

/// Parabolic representation of a (1;n+1)-compression-body group: the cusp
/// lattice translations and the sphere-carrying generators.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressionBodyRep {
    pub t_alpha: ComplexValue,
    pub t_beta: ComplexValue,
    pub gammas: Vec<MoebiusMap>,
    pub tol: Tol,
    pub family: Option<FamilyTag>,
}

/// First invariant a representation violates, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepFailure {
    NonFiniteTranslation,
    DependentLattice,
    MissingGenerators,
    FixesInfinity { index: usize },
    NotLoxodromic { index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepReport {
    pub pass: bool,
    pub failure: Option<RepFailure>,
}

pub fn validate(rep: &CompressionBodyRep) -> RepReport {
    let fail = |failure| RepReport {
        pass: false,
        failure: Some(failure),
    };
    let finite =
        |z: ComplexValue| z.re.is_finite() && z.im.is_finite();
    if !finite(rep.t_alpha) || !finite(rep.t_beta) || rep.t_alpha.norm() == 0.0 {
        return fail(RepFailure::NonFiniteTranslation);
    }
    if (rep.t_beta / rep.t_alpha).im.abs() <= 1e-9 {
        return fail(RepFailure::DependentLattice);
    }
    if rep.gammas.is_empty() {
        return fail(RepFailure::MissingGenerators);
    }
    for (index, g) in rep.gammas.iter().enumerate() {
        if g.c.norm() <= FIXES_INFINITY {
            return fail(RepFailure::FixesInfinity { index });
        }
        if g.classify(rep.tol) != MapClass::Loxodromic {
            return fail(RepFailure::NotLoxodromic { index });
        }
    }
    RepReport {
        pass: true,
        failure: None,
    }
}

/// Half-open parallelogram base + s*e1 + u*e2, s,u in [0,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub base: ComplexValue,
    pub e1: ComplexValue,
    pub e2: ComplexValue,
}

impl Region {
    fn area2(&self) -> f64 {
        (self.e1.conj() * self.e2).im
    }

    pub fn is_empty(&self) -> bool {
        self.area2().abs() <= 1e-12 * (1.0 + self.e1.norm_sqr() + self.e2.norm_sqr())
    }

    /// Affine coordinates (s, u) with z = base + s*e1 + u*e2.
    pub fn coords(&self, z: ComplexValue) -> (f64, f64) {
        let w = z - self.base;
        let det = self.area2();
        let s = (w.conj() * self.e2).im / det;
        let u = (self.e1.conj() * w).im / det;
        (s, u)
    }

    pub fn contains(&self, z: ComplexValue) -> bool {
        if self.is_empty() {
            return false;
        }
        let (s, u) = self.coords(z);
        (0.0..1.0).contains(&s) && (0.0..1.0).contains(&u)
    }

    pub fn corners(&self) -> [ComplexValue; 4] {
        [
            self.base,
            self.base + self.e1,
            self.base + self.e1 + self.e2,
            self.base + self.e2,
        ]
    }

    /// Euclidean distance from z to the closed parallelogram (0 inside).
    pub fn distance_to(&self, z: ComplexValue) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        let (s, u) = self.coords(z);
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u) {
            return 0.0;
        }
        let corners = self.corners();
        let mut best = f64::INFINITY;
        for i in 0..4 {
            let a = corners[i];
            let b = corners[(i + 1) % 4];
            best = best.min(point_segment_distance(z, a, b));
        }
        best
    }
}

fn point_segment_distance(z: ComplexValue, a: ComplexValue, b: ComplexValue) -> f64 {
    let e = b - a;
    let len2 = e.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * e.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + e * t)).norm()
}

pub fn fundamental_parallelogram(rep: &CompressionBodyRep) -> Region {
    Region {
        base: c(0.0, 0.0),
        e1: rep.t_alpha,
        e2: rep.t_beta,
    }
}

/// Real lattice coordinates (j, k) with tau = j*t_alpha + k*t_beta.
pub fn lattice_coords(rep: &CompressionBodyRep, tau: ComplexValue) -> (f64, f64) {
    let det = (rep.t_alpha.conj() * rep.t_beta).im;
    let j = (tau.conj() * rep.t_beta).im / det;
    let k = (rep.t_alpha.conj() * tau).im / det;
    (j, k)
}

/// Gauss-reduced basis of the cusp lattice: |u| <= |v| and |u ± v| >= |v|.
pub fn reduced_basis(t_alpha: ComplexValue, t_beta: ComplexValue) -> (ComplexValue, ComplexValue) {
    let dot = |a: ComplexValue, b: ComplexValue| (a * b.conj()).re;
    let (mut u, mut v) = (t_alpha, t_beta);
    if u.norm_sqr() > v.norm_sqr() {
        core::mem::swap(&mut u, &mut v);
    }
    loop {
        let m = (dot(v, u) / u.norm_sqr()).round();
        v -= u * m;
        if v.norm_sqr() >= u.norm_sqr() {
            return (u, v);
        }
        core::mem::swap(&mut u, &mut v);
    }
}

/// Length of the shortest nonzero lattice translation.
pub fn shortest_lattice_length(t_alpha: ComplexValue, t_beta: ComplexValue) -> f64 {
    let (u, v) = reduced_basis(t_alpha, t_beta);
    u.norm().min(v.norm()).min((u + v).norm()).min((u - v).norm())
}

pub const DEFAULT_ENUM_CAP: usize = 1_000_000;

pub fn enumerate(
    rep: &CompressionBodyRep,
    max_len: usize,
    lattice_bound: i32,
) -> Result<Vec<GroupElement>> {
    enumerate_with_cap(rep, max_len, lattice_bound, DEFAULT_ENUM_CAP)
}

/// All freely reduced words of syllable length 1..=max_len with offset
/// coordinates within lattice_bound, deduplicated by map equality (up to
/// sign, within rep.tol). Order: by length, then lexicographically in the
/// token sequence (offsets ascending, letters by index with the plain
/// generator before its inverse). Keeps the first representative of every
/// duplicate class.
pub fn enumerate_with_cap(
    rep: &CompressionBodyRep,
    max_len: usize,
    lattice_bound: i32,
    cap: usize,
) -> Result<Vec<GroupElement>> {
    let n = rep.gammas.len();
    let letters: Vec<Letter> = (0..n)
        .flat_map(|index| {
            [false, true].map(|inverse| Letter { index, inverse })
        })
        .collect();
    let b = lattice_bound;
    let mut offsets: Vec<LatticeOffset> = Vec::new();
    for j in -b..=b {
        for k in -b..=b {
            offsets.push((j, k));
        }
    }
    let mut dedup = MapDedup::new(rep.tol);
    let mut out: Vec<GroupElement> = Vec::new();
    let mut generated = 0usize;
    for target in 1..=max_len {
        let mut word_letters: Vec<Letter> = Vec::new();
        let mut word_offsets: Vec<LatticeOffset> = Vec::new();
        descend(
            rep,
            &letters,
            &offsets,
            target,
            &mut word_letters,
            &mut word_offsets,
            &mut generated,
            cap,
            &mut dedup,
            &mut out,
        )?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    rep: &CompressionBodyRep,
    letters: &[Letter],
    offsets: &[LatticeOffset],
    target: usize,
    word_letters: &mut Vec<Letter>,
    word_offsets: &mut Vec<LatticeOffset>,
    generated: &mut usize,
    cap: usize,
    dedup: &mut MapDedup,
    out: &mut Vec<GroupElement>,
) -> Result<()> {
    for &o in offsets {
        word_offsets.push(o);
        if word_letters.len() == target {
            *generated += 1;
            if *generated > cap {
                return Err(Error::BudgetExceeded { cap });
            }
            let word = Word::new(word_letters.clone(), word_offsets.clone());
            let map = word.evaluate(rep);
            if dedup.insert(&map, out.len()) {
                out.push(GroupElement { word, map });
            }
        } else {
            for &l in letters {
                let blocked = word_letters
                    .last()
                    .is_some_and(|prev| l == prev.inverted() && o == (0, 0));
                if blocked {
                    continue;
                }
                word_letters.push(l);
                descend(
                    rep,
                    letters,
                    offsets,
                    target,
                    word_letters,
                    word_offsets,
                    generated,
                    cap,
                    dedup,
                    out,
                )?;
                word_letters.pop();
            }
        }
        word_offsets.pop();
    }
    Ok(())
}

/// Tolerance dedup of maps up to sign: coarse buckets on the a-entry,
/// exact check via MoebiusMap::approx_eq against bucket neighbors.
struct MapDedup {
    tol: Tol,
    quantum: f64,
    buckets: BTreeMap<(i64, i64), Vec<MoebiusMap>>,
}

impl MapDedup {
    fn new(tol: Tol) -> MapDedup {
        MapDedup {
            tol,
            quantum: (tol.eq * 1e3).max(1e-6),
            buckets: BTreeMap::new(),
        }
    }

    fn key(&self, m: &MoebiusMap) -> (i64, i64) {
        let q = |x: f64| (x / self.quantum).round().clamp(-1e15, 1e15) as i64;
        (q(m.a.re), q(m.a.im))
    }

    /// True when the map is new; `_ord` is unused but keeps call sites
    /// explicit that insertion order decides representatives.
    fn insert(&mut self, m: &MoebiusMap, _ord: usize) -> bool {
        let neg = MoebiusMap {
            a: -m.a,
            b: -m.b,
            c: -m.c,
            d: -m.d,
        };
        for key in [self.key(m), self.key(&neg)] {
            for dj in -1..=1i64 {
                for dk in -1..=1i64 {
                    if let Some(bucket) = self.buckets.get(&(key.0 + dj, key.1 + dk)) {
                        if bucket.iter().any(|kept| kept.approx_eq(m, self.tol.eq)) {
                            return false;
                        }
                    }
                }
            }
        }
        self.buckets.entry(self.key(m)).or_default().push(*m);
        true
    }
}

/// Lattice translates of a sphere whose footprint disk meets the window.
///
/// Bounding-box search: window corners are pulled back to lattice
/// coordinates, expanded by the radius, and the integer box is scanned.
pub fn lattice_translates_in_window(
    s: &crate::geometry::IsometricSphere,
    rep: &CompressionBodyRep,
    window: &Region,
) -> Vec<crate::geometry::IsometricSphere> {
    let mut out = Vec::new();
    if window.is_empty() {
        return out;
    }
    let mut jmin = f64::INFINITY;
    let mut jmax = f64::NEG_INFINITY;
    let mut kmin = f64::INFINITY;
    let mut kmax = f64::NEG_INFINITY;
    let pad = s.radius + 1e-9;
    let unit = rep.t_alpha.norm().min(rep.t_beta.norm()).max(1e-9);
    let slack = pad / unit + 2.0;
    for corner in window.corners() {
        let (j, k) = lattice_coords(rep, corner - s.center);
        jmin = jmin.min(j - slack);
        jmax = jmax.max(j + slack);
        kmin = kmin.min(k - slack);
        kmax = kmax.max(k + slack);
    }
    for j in (jmin.floor() as i64)..=(jmax.ceil() as i64) {
        for k in (kmin.floor() as i64)..=(kmax.ceil() as i64) {
            let tau = j as f64 * rep.t_alpha + k as f64 * rep.t_beta;
            if window.distance_to(s.center + tau) <= s.radius {
                out.push(s.translated(tau, j as i32, k as i32));
            }
        }
    }
    out
}

pub fn example_simple_ford() -> CompressionBodyRep {
    let gamma = MoebiusMap::normalize(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, -5.0))
        .expect("unimodular");
    let delta = MoebiusMap::normalize(c(-5.0, -5.0), c(-26.0, -25.0), c(1.0, 0.0), c(5.0, 0.0))
        .expect("unimodular");
    CompressionBodyRep {
        t_alpha: c(100.0, 0.0),
        t_beta: c(0.0, 100.0),
        gammas: vec![gamma, delta],
        tol: Tol::default(),
        family: Some(FamilyTag::SimpleFord),
    }
}

fn conjugated_standard_generator(shift: f64, w: ComplexValue) -> MoebiusMap {
    let a = MoebiusMap::translation(c(shift, 0.0));
    let m = MoebiusMap::normalize(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), w)
        .expect("unimodular");
    a.compose(&m).compose(&a.inverse())
}

/// Two-generator family with one intersecting tunnel geodesic at t = 2:
/// gamma_1 conjugated to center 15 - 2i, gamma_2 with center 5 + (t-2)i.
pub fn prop42_family(t: f64) -> Result<CompressionBodyRep> {
    if !(0.0..=4.0).contains(&t) {
        return Err(Error::OutOfRange);
    }
    let gamma1 = conjugated_standard_generator(10.0, c(5.0, -2.0));
    let gamma2 = conjugated_standard_generator(0.0, c(5.0, t - 2.0));
    Ok(CompressionBodyRep {
        t_alpha: c(20.0, 0.0),
        t_beta: c(0.0, 20.0),
        gammas: vec![gamma1, gamma2],
        tol: Tol::default(),
        family: Some(FamilyTag::Prop42 { t }),
    })
}

/// n-generator family: gamma_k centered at 5 + 10(k-1) + (t_k - 2)i with
/// lattice (11n, 10i); requires t_k in [0,4] for k < n and t_n = 2.
pub fn thm43_family(n: usize, t: &[f64]) -> Result<CompressionBodyRep> {
    if n < 2 || t.len() != n {
        return Err(Error::OutOfRange);
    }
    if t[..n - 1].iter().any(|tk| !(0.0..=4.0).contains(tk)) {
        return Err(Error::OutOfRange);
    }
    if (t[n - 1] - 2.0).abs() > 1e-9 {
        return Err(Error::OutOfRange);
    }
    let gammas = (1..=n)
        .map(|k| conjugated_standard_generator(10.0 * (k as f64 - 1.0), c(5.0, t[k - 1] - 2.0)))
        .collect();
    Ok(CompressionBodyRep {
        t_alpha: c(11.0 * n as f64, 0.0),
        t_beta: c(0.0, 10.0),
        gammas,
        tol: Tol::default(),
        family: Some(FamilyTag::Thm43 {
            n,
            t: t.to_vec(),
        }),
    })
}

/// delta_k = gamma_k^-1 gamma_n for k < n, delta_n = gamma_n.
pub fn delta_generators(rep: &CompressionBodyRep) -> Result<Vec<MoebiusMap>> {
    match rep.family {
        Some(FamilyTag::Thm43 { n, .. }) => {
            let last = rep.gammas[n - 1];
            Ok((0..n)
                .map(|i| {
                    if i + 1 < n {
                        rep.gammas[i].inverse().compose(&last)
                    } else {
                        last
                    }
                })
                .collect())
        }
        _ => Err(Error::NotFamilyRep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{isometric_sphere, IsometricSphere};

    #[test]
    fn validation_of_the_builtin_rep() {
        let rep = example_simple_ford();
        assert!(validate(&rep).pass);
        let delta = rep.gammas[1];
        assert!((delta.det() - c(1.0, 0.0)).norm() < 1e-12);

        let mut dependent = rep.clone();
        dependent.t_beta = 2.0 * dependent.t_alpha;
        assert_eq!(
            validate(&dependent).failure,
            Some(RepFailure::DependentLattice)
        );

        let mut parabolic = rep.clone();
        parabolic.gammas[0] = MoebiusMap::translation(c(1.0, 0.0));
        assert_eq!(
            validate(&parabolic).failure,
            Some(RepFailure::FixesInfinity { index: 0 })
        );

        let mut elliptic = rep.clone();
        elliptic.gammas[1] =
            MoebiusMap::normalize(c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(
            validate(&elliptic).failure,
            Some(RepFailure::NotLoxodromic { index: 1 })
        );
    }

    #[test]
    fn parallelogram_extent_and_distance() {
        let rep = prop42_family(2.0).unwrap();
        let para = fundamental_parallelogram(&rep);
        assert!(para.contains(c(19.9, 9.9)));
        assert!(para.contains(c(0.0, 0.0)));
        assert!(!para.contains(c(20.0, 0.0)));
        assert!(!para.contains(c(-0.01, 5.0)));
        assert_eq!(para.distance_to(c(10.0, 10.0)), 0.0);
        assert!((para.distance_to(c(25.0, 5.0)) - 5.0).abs() < 1e-12);
        assert!((para.distance_to(c(-3.0, -4.0)) - 5.0).abs() < 1e-12);

        let thm = thm43_family(2, &[1.0, 2.0]).unwrap();
        let para = fundamental_parallelogram(&thm);
        assert!((para.e1 - c(22.0, 0.0)).norm() < 1e-12);
        assert!((para.e2 - c(0.0, 10.0)).norm() < 1e-12);
    }

    #[test]
    fn enumerate_n2_length1() {
        let rep = example_simple_ford();
        let els = enumerate(&rep, 1, 0).unwrap();
        assert_eq!(els.len(), 4);
        let expect = [
            rep.gammas[0],
            rep.gammas[0].inverse(),
            rep.gammas[1],
            rep.gammas[1].inverse(),
        ];
        let names = ["g1", "G1", "g2", "G2"];
        for (i, el) in els.iter().enumerate() {
            assert!(el.map.approx_eq(&expect[i], 1e-12));
            assert_eq!(alloc::format!("{}", el.word), names[i]);
            assert!(el.word.is_freely_reduced());
        }
    }

    /// Brute-force enumerator with O(N^2) dedup as the independent oracle.
    fn naive_enumerate(
        rep: &CompressionBodyRep,
        max_len: usize,
        b: i32,
    ) -> Vec<MoebiusMap> {
        let n = rep.gammas.len();
        let mut all: Vec<(Vec<(i32, i32)>, Vec<Letter>)> = Vec::new();
        let mut offsets = Vec::new();
        for j in -b..=b {
            for k in -b..=b {
                offsets.push((j, k));
            }
        }
        let mut letters = Vec::new();
        for index in 0..n {
            for inverse in [false, true] {
                letters.push(Letter { index, inverse });
            }
        }
        for target in 1..=max_len {
            let mut stack: Vec<(Vec<(i32, i32)>, Vec<Letter>)> =
                offsets.iter().map(|o| (vec![*o], Vec::new())).collect();
            while let Some((os, ls)) = stack.pop() {
                if ls.len() == target {
                    all.push((os, ls));
                    continue;
                }
                for &l in &letters {
                    if let Some(prev) = ls.last() {
                        if l == prev.inverted() && *os.last().unwrap() == (0, 0) {
                            continue;
                        }
                    }
                    for &o in &offsets {
                        let mut os2 = os.clone();
                        let mut ls2 = ls.clone();
                        ls2.push(l);
                        os2.push(o);
                        stack.push((os2, ls2));
                    }
                }
            }
        }
        let mut maps: Vec<MoebiusMap> = Vec::new();
        for (os, ls) in all {
            let m = Word::new(ls, os).evaluate(rep);
            if !maps.iter().any(|kept| kept.approx_eq(&m, rep.tol.eq)) {
                maps.push(m);
            }
        }
        maps
    }

    #[test]
    fn enumerate_matches_naive_oracle() {
        let rep = example_simple_ford();
        let els = enumerate(&rep, 2, 0).unwrap();
        let oracle = naive_enumerate(&rep, 2, 0);
        assert_eq!(els.len(), oracle.len());
        for el in &els {
            assert!(oracle.iter().any(|m| m.approx_eq(&el.map, 1e-9)));
        }

        let rep = prop42_family(1.25).unwrap();
        let els = enumerate(&rep, 2, 1).unwrap();
        let oracle = naive_enumerate(&rep, 2, 1);
        assert_eq!(els.len(), oracle.len());
    }

    #[test]
    fn enumerate_is_closed_under_inversion_and_deterministic() {
        let rep = prop42_family(0.75).unwrap();
        let els = enumerate(&rep, 2, 1).unwrap();
        for el in &els {
            let inv = el.map.inverse();
            assert!(
                els.iter().any(|other| other.map.approx_eq(&inv, 1e-9)),
                "inverse of {} missing",
                el.word
            );
            let evaluated = el.word.evaluate(&rep);
            assert!(evaluated.approx_eq(&el.map, 1e-9));
        }
        let again = enumerate(&rep, 2, 1).unwrap();
        assert_eq!(els.len(), again.len());
        for (x, y) in els.iter().zip(again.iter()) {
            assert_eq!(x.word, y.word);
        }
    }

    #[test]
    fn enumerate_respects_the_cap() {
        let rep = example_simple_ford();
        assert_eq!(
            enumerate_with_cap(&rep, 3, 1, 100),
            Err(Error::BudgetExceeded { cap: 100 })
        );
        assert!(enumerate(&rep, 0, 0).unwrap().is_empty());
    }

    #[test]
    fn word_algebra() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let random_word = |rng: &mut rand_chacha::ChaCha8Rng, max: usize| {
            let len = rng.gen_range(1..=max);
            let letters: Vec<Letter> = (0..len)
                .map(|_| Letter {
                    index: rng.gen_range(0..2),
                    inverse: rng.gen_bool(0.5),
                })
                .collect();
            let offsets: Vec<(i32, i32)> = (0..=len)
                .map(|_| (rng.gen_range(-1..=1), rng.gen_range(-1..=1)))
                .collect();
            Word::new(letters, offsets)
        };
        // t = 2 keeps every matrix entry a Gaussian integer, so products of
        // length-4 words evaluate exactly and the laws hold to float noise.
        let rep = prop42_family(2.0).unwrap();
        for _ in 0..200 {
            let w = random_word(&mut rng, 4);
            let m = w.evaluate(&rep);
            assert!(w.inverse().evaluate(&rep).approx_eq(&m.inverse(), 1e-9));
            assert!(w.inverse().inverse() == w);
            let shifted = w.translated(1, -1).evaluate(&rep);
            let tau = MoebiusMap::translation(rep.t_alpha - rep.t_beta);
            assert!(shifted.approx_eq(&m.compose(&tau), 1e-9));
        }
        // Non-integer data: long products amplify the representation error
        // of the inputs, so keep words short and the bound scale-aware.
        let rep = prop42_family(1.3).unwrap();
        for _ in 0..200 {
            let w = random_word(&mut rng, 2);
            let m = w.evaluate(&rep);
            let scale = 1.0
                + m.entries()
                    .iter()
                    .map(|e| e.norm())
                    .fold(0.0f64, f64::max);
            assert!(w
                .inverse()
                .evaluate(&rep)
                .approx_eq(&m.inverse(), 1e-9 * scale));
        }
        assert_eq!(alloc::format!("{}", Word::identity()), "e");
        let w = Word::new(
            vec![
                Letter {
                    index: 0,
                    inverse: false,
                },
                Letter {
                    index: 1,
                    inverse: true,
                },
            ],
            vec![(1, 0), (0, -2), (0, 0)],
        );
        assert_eq!(alloc::format!("{}", w), "a1.g1.b-2.G2");
    }

    #[test]
    fn translate_search_matches_exhaustive_scan() {
        // A unit sphere deep inside the 100 x 100 parallelogram: every
        // other translate stays far from the window.
        let rep = example_simple_ford();
        let sphere = IsometricSphere::new(c(50.0, 50.0), 1.0);
        let window = fundamental_parallelogram(&rep);
        let found = lattice_translates_in_window(&sphere, &rep, &window);
        assert_eq!(found.len(), 1);
        assert!(found[0].approx_eq(&sphere, 1e-12));

        use rand::{Rng, SeedableRng};
        let rep = prop42_family(2.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..50 {
            let s = IsometricSphere::new(
                c(rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0)),
                rng.gen_range(0.1..3.0),
            );
            let window = Region {
                base: c(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)),
                e1: c(rng.gen_range(1.0..10.0), 0.0),
                e2: c(0.0, rng.gen_range(1.0..10.0)),
            };
            let found = lattice_translates_in_window(&s, &rep, &window);
            let mut oracle = Vec::new();
            for j in -10..=10 {
                for k in -10..=10 {
                    let tau = j as f64 * rep.t_alpha + k as f64 * rep.t_beta;
                    if window.distance_to(s.center + tau) <= s.radius {
                        oracle.push(s.center + tau);
                    }
                }
            }
            assert_eq!(found.len(), oracle.len());
            for f in &found {
                assert!(oracle.iter().any(|c0| (c0 - f.center).norm() < 1e-9));
            }
        }

        let empty = Region {
            base: c(0.0, 0.0),
            e1: c(0.0, 0.0),
            e2: c(0.0, 0.0),
        };
        assert!(lattice_translates_in_window(&sphere, &rep, &empty).is_empty());
    }

    #[test]
    fn reduced_basis_and_shortest_vector() {
        let (u, v) = reduced_basis(c(100.0, 0.0), c(0.0, 100.0));
        assert!((u.norm() - 100.0).abs() < 1e-9 && (v.norm() - 100.0).abs() < 1e-9);
        assert!((shortest_lattice_length(c(22.0, 0.0), c(0.0, 10.0)) - 10.0).abs() < 1e-12);
        // Skewed basis reduces: (10, 0) and (10, 1) -> shortest is (0, 1).
        assert!((shortest_lattice_length(c(10.0, 0.0), c(10.0, 1.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn builtin_family_matrices() {
        let rep = prop42_family(2.0).unwrap();
        assert!(validate(&rep).pass);
        let g1 = rep.gammas[0];
        let expect =
            MoebiusMap::normalize(c(-10.0, 0.0), c(151.0, -20.0), c(-1.0, 0.0), c(15.0, -2.0))
                .unwrap();
        assert!(g1.approx_eq(&expect, 1e-12));
        for t in [0.0, 1.0, 3.5, 4.0] {
            let rep = prop42_family(t).unwrap();
            assert!(rep.gammas[0].approx_eq(&expect, 1e-12));
            let s2 = isometric_sphere(&rep.gammas[1]).unwrap();
            assert!((s2.center - c(5.0, t - 2.0)).norm() < 1e-12);
            assert!(validate(&rep).pass);
        }
        assert_eq!(prop42_family(5.0), Err(Error::OutOfRange));
        assert_eq!(prop42_family(-0.1), Err(Error::OutOfRange));
        assert_eq!(prop42_family(f64::NAN), Err(Error::OutOfRange));

        let t = [1.0, 3.0, 0.5, 2.0];
        let rep = thm43_family(4, &t).unwrap();
        assert!(validate(&rep).pass);
        for (i, g) in rep.gammas.iter().enumerate() {
            let k = i as f64 + 1.0;
            let inv = isometric_sphere(&g.inverse()).unwrap();
            assert!((inv.center - c(10.0 * (k - 1.0), 0.0)).norm() < 1e-10);
            assert!((inv.radius - 1.0).abs() < 1e-12);
            let fwd = isometric_sphere(g).unwrap();
            assert!((fwd.center - c(5.0 + 10.0 * (k - 1.0), t[i] - 2.0)).norm() < 1e-10);
        }
        assert_eq!(thm43_family(1, &[2.0]), Err(Error::OutOfRange));
        assert_eq!(thm43_family(2, &[1.0, 1.9]), Err(Error::OutOfRange));
        assert_eq!(thm43_family(2, &[4.5, 2.0]), Err(Error::OutOfRange));
        assert_eq!(thm43_family(3, &[1.0, 2.0]), Err(Error::OutOfRange));
    }

    #[test]
    fn delta_generator_products() {
        let rep = thm43_family(2, &[2.0, 2.0]).unwrap();
        let deltas = delta_generators(&rep).unwrap();
        assert_eq!(deltas.len(), 2);
        assert!(deltas[1].approx_eq(&rep.gammas[1], 1e-12));
        let byhand = rep.gammas[0].inverse().compose(&rep.gammas[1]);
        assert!(deltas[0].approx_eq(&byhand, 1e-12));

        // I(delta_1^-1) sits strictly inside the half-ball of I(gamma_1).
        let inner = isometric_sphere(&deltas[0].inverse()).unwrap();
        let outer = isometric_sphere(&rep.gammas[0]).unwrap();
        assert!((inner.center - c(4.9, 0.0)).norm() < 1e-10);
        assert!((inner.radius - 0.1).abs() < 1e-12);
        assert!((inner.center - outer.center).norm() + inner.radius < outer.radius);

        assert_eq!(
            delta_generators(&example_simple_ford()),
            Err(Error::NotFamilyRep)
        );
    }
}
