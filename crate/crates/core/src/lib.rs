//! Ford domains of (1;n+1)-compression-body groups in upper half-space.
//!
//! The crate is split along the objects it computes with:
//!
//! * [`moebius`]: normalized 2x2 complex matrices acting on the boundary
//!   sphere and, via the Poincare extension, on upper half-space.
//! * [`geometry`]: isometric spheres, geodesics and the metric queries
//!   (meetings, transforms, distances) the Ford construction needs.
//! * [`group`]: compression-body representations, word enumeration over the
//!   generators interleaved with cusp-lattice offsets, and the built-in
//!   one-parameter families.
//! * [`ford`]: sphere visibility, the simple-Ford test, face pairings and the
//!   translation-length discreteness alarm.
//! * [`tunnel`]: dual-arc decompositions, the signed-area intersection
//!   criterion and epsilon-ball witnesses for self-intersecting tunnels.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! instead of `std` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("enable either the `std` or the `libm` feature");

pub mod complex;
pub mod ford;
pub mod geometry;
pub mod group;
pub mod moebius;
pub mod tunnel;

use core::fmt;

pub use complex::{BoundaryPoint, ComplexValue, HalfSpacePoint};
pub use moebius::MoebiusMap;

/// Absolute tolerance context threaded through every approximate comparison.
///
/// `eq` bounds entrywise matrix equality, sphere center/radius equality and
/// endpoint matching; operations with their own fixed thresholds (singularity
/// cutoffs, determinant drift) document them at the use site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    pub eq: f64,
}

impl Tol {
    pub const DEFAULT_EQ: f64 = 1e-9;

    pub const fn new(eq: f64) -> Self {
        Tol { eq }
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol::new(Tol::DEFAULT_EQ)
    }
}

/// Determinant magnitudes at or below this are treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// Lower-left entries at or below this magnitude fix the point at infinity.
pub const FIXES_INFINITY: f64 = 1e-12;

/// Geodesic endpoints closer than this do not span a geodesic.
pub const ENDPOINT_SEP: f64 = 1e-12;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes surfaced by the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A stored value would be non-finite.
    NonFinite,
    /// Matrix determinant magnitude at or below the singularity cutoff.
    SingularMatrix,
    /// Poincare-extension image height underflowed to zero.
    DegenerateHeight,
    /// Element is not an upper-triangular parabolic.
    NotUpperParabolic,
    /// Element fixes infinity and owns no isometric sphere.
    FixesInfinity,
    /// Vertical line misses the sphere footprint.
    OutsideFootprint,
    /// The two horoballs coincide; no equidistant sphere exists.
    CoincidentHoroballs,
    /// Claimed geodesic endpoints coincide.
    DegenerateGeodesic,
    /// Parameter outside its documented range.
    OutOfRange,
    /// Enumeration would exceed the configured element cap.
    BudgetExceeded { cap: usize },
    /// Containment hypothesis of the arc decomposition fails.
    HypothesisViolated,
    /// A required sphere meeting is empty or a construction degenerates.
    DegenerateConfiguration,
    /// Operation needs a rep built by one of the built-in families.
    NotFamilyRep,
    /// Bisection interval endpoints have equal sign.
    NoSignChange,
    /// Lift pair further apart than the requested ball allows.
    TooFarApart,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFinite => write!(f, "value is not finite"),
            Error::SingularMatrix => write!(f, "matrix is singular within tolerance"),
            Error::DegenerateHeight => write!(f, "image height underflowed to zero"),
            Error::NotUpperParabolic => write!(f, "not an upper-triangular parabolic"),
            Error::FixesInfinity => write!(f, "element fixes infinity"),
            Error::OutsideFootprint => write!(f, "foot lies outside the sphere footprint"),
            Error::CoincidentHoroballs => write!(f, "horoballs coincide"),
            Error::DegenerateGeodesic => write!(f, "geodesic endpoints coincide"),
            Error::OutOfRange => write!(f, "parameter out of range"),
            Error::BudgetExceeded { cap } => write!(f, "enumeration exceeds cap of {cap}"),
            Error::HypothesisViolated => write!(f, "containment hypothesis violated"),
            Error::DegenerateConfiguration => write!(f, "degenerate configuration"),
            Error::NotFamilyRep => write!(f, "rep was not built by a known family"),
            Error::NoSignChange => write!(f, "no sign change over the interval"),
            Error::TooFarApart => write!(f, "lifts are too far apart"),
        }
    }
}

impl core::error::Error for Error {}

/// Total order on finite floats; the toolkit never stores NaN.
pub(crate) fn cmp_f64(a: f64, b: f64) -> core::cmp::Ordering {
    a.partial_cmp(&b).expect("finite by invariant")
}
