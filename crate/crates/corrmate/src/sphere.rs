//! Riemann-sphere arithmetic: points with infinity, Möbius maps, hyperbolic
//! geodesics of the unit disk, and anticonformal reflections.
//!
//! This is the substrate everything else is built on. Points are kept in a
//! tagged finite/infinite representation because all formulas downstream are
//! affine; poles are handled explicitly where they occur.

use num_complex::Complex64;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::Error;

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub const ZERO: SpherePoint = SpherePoint::Finite(Complex64::new(0.0, 0.0));
    pub const ONE: SpherePoint = SpherePoint::Finite(Complex64::new(1.0, 0.0));

    pub fn new(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    /// Finite value or an error; for call sites that require finiteness.
    pub fn expect_finite(&self) -> Result<Complex64, Error> {
        self.finite().ok_or(Error::UnexpectedInfinity)
    }

    /// Chordal (spherical) distance, well-defined for every pair of points.
    ///
    /// `dist(z, w) = 2|z-w| / sqrt((1+|z|^2)(1+|w|^2))`, extended continuously
    /// to infinity. Ranges over `[0, 2]`.
    pub fn chordal_dist(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
                // Large moduli lose precision in the naive formula; route
                // through reciprocals, chordal distance is eta-invariant.
                if z.norm_sqr() > 1e16 && w.norm_sqr() > 1e16 {
                    return SpherePoint::Finite(z.inv()).chordal_dist(&SpherePoint::Finite(w.inv()));
                }
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }

    /// Tolerance-based equality. Finite points compare by Euclidean distance;
    /// infinity equals only infinity.
    pub fn approx_eq(&self, other: &SpherePoint, eps: f64) -> bool {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => true,
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => (z - w).norm() <= eps,
            _ => false,
        }
    }

    /// The involution `eta(z) = 1/z`.
    pub fn eta(&self) -> SpherePoint {
        match self {
            SpherePoint::Infinity => SpherePoint::ZERO,
            SpherePoint::Finite(z) if z.norm_sqr() == 0.0 => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::Finite(z.inv()),
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl From<f64> for SpherePoint {
    fn from(x: f64) -> Self {
        SpherePoint::Finite(Complex64::new(x, 0.0))
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

// Wire format: [re, im] for finite points, the string "inf" for infinity.
impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            SpherePoint::Infinity => serializer.serialize_str("inf"),
            SpherePoint::Finite(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PointVisitor;
        impl<'de> Visitor<'de> for PointVisitor {
            type Value = SpherePoint;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("[re, im] or the string \"inf\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<SpherePoint, E> {
                if s == "inf" {
                    Ok(SpherePoint::Infinity)
                } else {
                    Err(E::custom(format!("unknown sphere point literal {s:?}")))
                }
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<SpherePoint, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                Ok(SpherePoint::new(re, im))
            }
        }
        deserializer.deserialize_any(PointVisitor)
    }
}

/// A Möbius transformation `z -> (az + b)/(cz + d)` stored as its matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "MobiusWire", try_from = "MobiusWire")]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

/// Wire format: [[re,im]; 4] in row-major (a, b, c, d) order.
#[derive(Serialize, Deserialize)]
struct MobiusWire([[f64; 2]; 4]);

impl From<MobiusMap> for MobiusWire {
    fn from(m: MobiusMap) -> Self {
        MobiusWire([
            [m.a.re, m.a.im],
            [m.b.re, m.b.im],
            [m.c.re, m.c.im],
            [m.d.re, m.d.im],
        ])
    }
}

impl TryFrom<MobiusWire> for MobiusMap {
    type Error = Error;
    fn try_from(w: MobiusWire) -> Result<Self, Error> {
        let e = w.0;
        MobiusMap::new(
            Complex64::new(e[0][0], e[0][1]),
            Complex64::new(e[1][0], e[1][1]),
            Complex64::new(e[2][0], e[2][1]),
            Complex64::new(e[3][0], e[3][1]),
        )
    }
}

impl MobiusMap {
    pub const IDENTITY: MobiusMap = MobiusMap {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    /// Builds a map, rejecting degenerate matrices.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, Error> {
        let m = MobiusMap { a, b, c, d };
        let scale = a.norm() + b.norm() + c.norm() + d.norm();
        if m.det().norm() <= 1e-14 * scale * scale {
            return Err(Error::DegenerateMobius);
        }
        Ok(m)
    }

    /// The rotation `z -> omega z`.
    pub fn rotation(omega: Complex64) -> Self {
        MobiusMap {
            a: omega,
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// The involution `eta(z) = 1/z`.
    pub fn eta() -> Self {
        MobiusMap {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
            c: Complex64::new(1.0, 0.0),
            d: Complex64::new(0.0, 0.0),
        }
    }

    /// Determinant `ad - bc`, computed with compensated products: the naive
    /// expression loses `|entries|^2 eps` to cancellation on near-parabolic
    /// matrices, which would dominate normalization residuals.
    pub fn det(&self) -> Complex64 {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let re = dot4(
            [a.re, -a.im, -b.re, b.im],
            [d.re, d.im, c.re, c.im],
        );
        let im = dot4(
            [a.re, a.im, -b.re, -b.im],
            [d.im, d.re, c.im, c.re],
        );
        Complex64::new(re, im)
    }

    /// Applies the map with the usual conventions at infinity and the pole.
    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => {
                if self.c.norm() <= pole_tol(self) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                let num = self.a * z + self.b;
                if den.norm() <= pole_tol(self) * (1.0 + z.norm()) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(num / den)
                }
            }
        }
    }

    /// Convenience for finite arguments known to avoid the pole.
    pub fn apply_complex(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Derivative `det / (cz + d)^2` at a finite point.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        self.det() / (den * den)
    }

    /// Matrix product; `compose(M1, M2)` acts as `M1` after `M2`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Adjugate matrix; inverse up to the determinant scalar.
    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Integer power of the map (negative exponents via the adjugate).
    pub fn pow(&self, k: i32) -> MobiusMap {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = MobiusMap::IDENTITY;
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Scales to determinant one and fixes the overall sign so the first
    /// entry of modulus above `1e-12` has nonnegative real part (ties on the
    /// real part broken by the imaginary part). Idempotent up to sign flips
    /// forced by the canonicalization itself.
    pub fn normalize(&self) -> MobiusMap {
        let s = self.det().sqrt();
        let mut m = MobiusMap {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
        };
        for e in [m.a, m.b, m.c, m.d] {
            if e.norm() > 1e-12 {
                if e.re < -1e-12 || (e.re.abs() <= 1e-12 && e.im < 0.0) {
                    m = MobiusMap {
                        a: -m.a,
                        b: -m.b,
                        c: -m.c,
                        d: -m.d,
                    };
                }
                break;
            }
        }
        m
    }

    /// Frobenius distance between the determinant-one representatives,
    /// minimized over the residual scalar ambiguity. A determinant-one
    /// matrix with rounded entries has true determinant `1 + O(|entries|^2
    /// eps)`, so a rigid plus/minus comparison bottoms out at
    /// `|entries|^3 eps`; aligning by the least-squares scalar (which is
    /// `±1` up to that rounding) removes the artificial floor while still
    /// measuring projective equality.
    pub fn dist_up_to_sign(&self, other: &MobiusMap) -> f64 {
        let p = self.normalize();
        let q = other.normalize();
        let norm_p =
            p.a.norm_sqr() + p.b.norm_sqr() + p.c.norm_sqr() + p.d.norm_sqr();
        let inner = q.a * p.a.conj() + q.b * p.b.conj() + q.c * p.c.conj() + q.d * p.d.conj();
        let lambda = inner / norm_p;
        // Guard completely orthogonal representatives (genuinely different
        // maps): fall back to the rigid comparison.
        if lambda.norm() < 0.5 {
            let d1 = ((p.a - q.a).norm_sqr()
                + (p.b - q.b).norm_sqr()
                + (p.c - q.c).norm_sqr()
                + (p.d - q.d).norm_sqr())
            .sqrt();
            let d2 = ((p.a + q.a).norm_sqr()
                + (p.b + q.b).norm_sqr()
                + (p.c + q.c).norm_sqr()
                + (p.d + q.d).norm_sqr())
            .sqrt();
            return d1.min(d2);
        }
        ((p.a * lambda - q.a).norm_sqr()
            + (p.b * lambda - q.b).norm_sqr()
            + (p.c * lambda - q.c).norm_sqr()
            + (p.d * lambda - q.d).norm_sqr())
        .sqrt()
    }

    /// Distance to the identity up to sign; zero for trivial maps.
    pub fn dist_to_identity(&self) -> f64 {
        self.dist_up_to_sign(&MobiusMap::IDENTITY)
    }

    /// The Möbius map sending the three distinct points `z1, z2, z3` to
    /// `0, 1, infinity` respectively.
    pub fn three_points_to_standard(
        z1: SpherePoint,
        z2: SpherePoint,
        z3: SpherePoint,
    ) -> Result<MobiusMap, Error> {
        // Cross-ratio matrix, with the infinite cases taken as limits.
        let one = Complex64::new(1.0, 0.0);
        let m = match (z1, z2, z3) {
            (SpherePoint::Infinity, SpherePoint::Finite(z2), SpherePoint::Finite(z3)) => {
                MobiusMap::new(Complex64::new(0.0, 0.0), z2 - z3, one, -z3)?
            }
            (SpherePoint::Finite(z1), SpherePoint::Infinity, SpherePoint::Finite(z3)) => {
                MobiusMap::new(one, -z1, one, -z3)?
            }
            (SpherePoint::Finite(z1), SpherePoint::Finite(z2), SpherePoint::Infinity) => {
                MobiusMap::new(one, -z1, Complex64::new(0.0, 0.0), z2 - z1)?
            }
            (SpherePoint::Finite(z1), SpherePoint::Finite(z2), SpherePoint::Finite(z3)) => {
                MobiusMap::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))?
            }
            _ => return Err(Error::DegenerateMobius),
        };
        Ok(m)
    }

    /// The Möbius map sending `src[i]` to `dst[i]` for three distinct points.
    pub fn from_three_points(
        src: [SpherePoint; 3],
        dst: [SpherePoint; 3],
    ) -> Result<MobiusMap, Error> {
        let s = Self::three_points_to_standard(src[0], src[1], src[2])?;
        let t = Self::three_points_to_standard(dst[0], dst[1], dst[2])?;
        Ok(t.inverse().compose(&s))
    }
}

fn pole_tol(m: &MobiusMap) -> f64 {
    let scale = m.a.norm() + m.b.norm() + m.c.norm() + m.d.norm();
    1e-14 * scale.max(1.0)
}

/// Compensated four-term dot product `sum x_i y_i` (error-free product
/// transformations accumulated in a correction term).
fn dot4(x: [f64; 4], y: [f64; 4]) -> f64 {
    let mut s = 0.0f64;
    let mut comp = 0.0f64;
    for k in 0..4 {
        let p = x[k] * y[k];
        let e = x[k].mul_add(y[k], -p);
        let t = s + p;
        let q = if s.abs() >= p.abs() {
            (s - t) + p
        } else {
            (p - t) + s
        };
        s = t;
        comp += q + e;
    }
    s + comp
}

/// An anticonformal reflection `z -> apply(M, conj(z))`, used only inside the
/// group builder; two of them compose to a genuine [`MobiusMap`].
#[derive(Debug, Clone, Copy)]
pub struct Reflection {
    m: MobiusMap,
}

impl Reflection {
    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => self.m.apply(SpherePoint::Infinity),
            SpherePoint::Finite(z) => self.m.apply(SpherePoint::Finite(z.conj())),
        }
    }

    /// Composes `self` after `other` into a Möbius map: the anticonformal
    /// parts cancel and the second factor's matrix gets conjugated.
    pub fn compose_into_mobius(&self, other: &Reflection) -> MobiusMap {
        let n = MobiusMap {
            a: other.m.a.conj(),
            b: other.m.b.conj(),
            c: other.m.c.conj(),
            d: other.m.d.conj(),
        };
        self.m.compose(&n)
    }
}

/// A bi-infinite hyperbolic geodesic of the unit disk, recorded by its two
/// ideal endpoints on the unit circle. The ordering of the endpoints selects
/// a preferred boundary arc: the counter-clockwise arc from `u` to `v`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Geodesic {
    pub u: Complex64,
    pub v: Complex64,
}

/// Which complementary arc of a geodesic's endpoints bounds the half-plane
/// under discussion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcSide {
    /// The counter-clockwise arc from `u` to `v`.
    CcwFromU,
    /// The counter-clockwise arc from `v` to `u`.
    CcwFromV,
}

impl Geodesic {
    pub fn new(u: Complex64, v: Complex64, eps: f64) -> Result<Self, Error> {
        if (u.norm() - 1.0).abs() > eps || (v.norm() - 1.0).abs() > eps {
            return Err(Error::GeodesicEndpointOffCircle);
        }
        if (u - v).norm() <= eps {
            return Err(Error::DegenerateGeodesic);
        }
        Ok(Geodesic { u, v })
    }

    /// From endpoint angles, in radians.
    pub fn from_angles(a: f64, b: f64, eps: f64) -> Result<Self, Error> {
        Self::new(Complex64::cis(a), Complex64::cis(b), eps)
    }

    /// A geodesic is a diameter iff its endpoints are antipodal.
    pub fn is_diameter(&self, eps: f64) -> bool {
        (self.u + self.v).norm() <= eps
    }

    /// Center and radius of the circle through the endpoints orthogonal to
    /// the unit circle; `None` for diameters.
    pub fn orthocircle(&self, eps: f64) -> Option<(Complex64, f64)> {
        if self.is_diameter(eps) {
            return None;
        }
        let denom = 1.0 + (self.u * self.v.conj()).re;
        let c = (self.u + self.v) / denom;
        let r2 = c.norm_sqr() - 1.0;
        Some((c, r2.max(0.0).sqrt()))
    }

    /// Reflection (anticonformal involution) fixing the geodesic pointwise.
    ///
    /// For a diameter through `u` this is `z -> u^2 conj(z)`; otherwise it is
    /// inversion in the orthocircle, `z -> c + r^2 / conj(z - c)`.
    pub fn reflect(&self, z: SpherePoint, eps: f64) -> SpherePoint {
        match self.orthocircle(eps) {
            None => match z {
                SpherePoint::Infinity => SpherePoint::Infinity,
                SpherePoint::Finite(z) => SpherePoint::Finite(self.u * self.u * z.conj()),
            },
            Some((c, r)) => match z {
                SpherePoint::Infinity => SpherePoint::Finite(c),
                SpherePoint::Finite(z) => {
                    let w = (z - c).conj();
                    if w.norm() <= 1e-300 {
                        SpherePoint::Infinity
                    } else {
                        SpherePoint::Finite(c + r * r / w)
                    }
                }
            },
        }
    }

    /// The reflection as an anticonformal matrix, for composition into
    /// genuine Möbius maps.
    pub fn reflection(&self, eps: f64) -> Reflection {
        match self.orthocircle(eps) {
            None => Reflection {
                m: MobiusMap {
                    a: self.u * self.u,
                    b: Complex64::new(0.0, 0.0),
                    c: Complex64::new(0.0, 0.0),
                    d: Complex64::new(1.0, 0.0),
                },
            },
            Some((c, r)) => Reflection {
                // c + r^2/(conj z - conj c) = (c z' + (r^2 - |c|^2)) / (z' - conj c)
                m: MobiusMap {
                    a: c,
                    b: Complex64::new(r * r - c.norm_sqr(), 0.0),
                    c: Complex64::new(1.0, 0.0),
                    d: -c.conj(),
                },
            },
        }
    }

    /// Midpoint of the designated boundary arc, used as the side witness.
    fn arc_midpoint(&self, side: ArcSide) -> Complex64 {
        let (from, to) = match side {
            ArcSide::CcwFromU => (self.u, self.v),
            ArcSide::CcwFromV => (self.v, self.u),
        };
        let a = from.arg();
        let mut b = to.arg();
        if b <= a {
            b += std::f64::consts::TAU;
        }
        Complex64::cis(0.5 * (a + b))
    }

    /// Whether `z` lies in the closed hyperbolic half-plane bounded by the
    /// geodesic on the side of the designated boundary arc.
    pub fn halfplane_contains(&self, side: ArcSide, z: SpherePoint, eps: f64) -> bool {
        let Some(z) = z.finite() else { return false };
        let witness = self.arc_midpoint(side);
        match self.orthocircle(eps) {
            Some((c, r)) => {
                let inside_witness = (witness - c).norm() < r;
                if inside_witness {
                    (z - c).norm() <= r + eps
                } else {
                    (z - c).norm() >= r - eps
                }
            }
            None => {
                // Signed side of the diameter through u: Im(z * conj(u)).
                let s_witness = (witness * self.u.conj()).im;
                let s = (z * self.u.conj()).im;
                if s_witness >= 0.0 {
                    s >= -eps
                } else {
                    s <= eps
                }
            }
        }
    }
}
