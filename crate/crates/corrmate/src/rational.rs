//! Coefficient-level rational maps on the Riemann sphere: evaluation with
//! explicit pole and infinity conventions, derivatives, critical points with
//! multiplicity, full fibers, and Möbius pre/post-composition.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{self, Poly};
use crate::sphere::{MobiusMap, SpherePoint};

/// Cluster radius for multiplicity inference in fibers and critical points.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// Moduli above which evaluation switches to the reciprocal chart. Kept
/// small enough that no intermediate of a direct degree-70 Horner pass or
/// the following complex division can overflow.
const BIG: f64 = 1e4;

/// A rational map `num/den` with ascending coefficient vectors.
///
/// Normalized so that the denominator is monic when nonconstant and exactly
/// `1` in the polynomial case; numerator and denominator share no root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RationalWire", try_from = "RationalWire")]
pub struct RationalMap {
    num: Poly,
    den: Poly,
}

#[derive(Serialize, Deserialize)]
struct RationalWire {
    num: Vec<[f64; 2]>,
    den: Vec<[f64; 2]>,
}

impl From<RationalMap> for RationalWire {
    fn from(r: RationalMap) -> Self {
        RationalWire {
            num: r.num.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            den: r.den.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<RationalWire> for RationalMap {
    type Error = Error;
    fn try_from(w: RationalWire) -> Result<Self, Error> {
        let to_poly = |v: Vec<[f64; 2]>| Poly::new(v.into_iter().map(|c| Complex64::new(c[0], c[1])).collect());
        RationalMap::new(to_poly(w.num), to_poly(w.den))
    }
}

impl RationalMap {
    /// Builds and normalizes a map, rejecting degenerate input.
    pub fn new(num: Poly, den: Poly) -> Result<Self, Error> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::DegenerateRationalMap(
                "numerator or denominator is identically zero".into(),
            ));
        }
        let mut num = num;
        let mut den = den;
        // Denominator monic; constant denominators become exactly 1.
        if den.degree() == 0 {
            let c = den.coeffs[0];
            num = num.scale(c.inv());
            den = Poly::one();
        } else {
            let lead = *den.coeffs.last().unwrap();
            num = num.scale(lead.inv());
            den = den.scale(lead.inv());
        }
        let map = RationalMap { num, den };
        map.check_coprime()?;
        Ok(map)
    }

    pub fn from_coeffs(num: &[Complex64], den: &[Complex64]) -> Result<Self, Error> {
        Self::new(Poly::new(num.to_vec()), Poly::new(den.to_vec()))
    }

    /// The power map `z -> z^d`.
    pub fn power(d: usize) -> Self {
        RationalMap {
            num: Poly::monomial(d),
            den: Poly::one(),
        }
    }

    fn check_coprime(&self) -> Result<(), Error> {
        if self.den.degree() == 0 {
            return Ok(());
        }
        for r in poly::all_roots(&self.den)? {
            let scale = self.num.eval_abs(r.norm()).max(1e-300);
            if self.num.eval(r).norm() <= 1e-10 * scale {
                return Err(Error::DegenerateRationalMap(format!(
                    "numerator and denominator share a root near {r}"
                )));
            }
        }
        Ok(())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Global (topological) degree: `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    /// Evaluation, total on the sphere: poles map to infinity and the value
    /// at infinity is settled by degree comparison. Moduli beyond `1e8` are
    /// routed through the reciprocal chart for stability.
    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => self.eval_reciprocal_chart(Complex64::new(0.0, 0.0)),
            SpherePoint::Finite(z) if z.norm() > BIG => self.eval_reciprocal_chart(z.inv()),
            SpherePoint::Finite(z) => {
                let nv = self.num.eval(z);
                let dv = self.den.eval(z);
                let dscale = self.den.eval_abs(z.norm()).max(1e-300);
                if dv.norm() <= 1e-14 * dscale {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(nv / dv)
                }
            }
        }
    }

    /// Evaluates `R(1/u)` as a ratio of reversed-coefficient polynomials.
    fn eval_reciprocal_chart(&self, u: Complex64) -> SpherePoint {
        let big = self.degree();
        let rev = |p: &Poly| {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); big + 1];
            for (k, c) in p.coeffs.iter().enumerate() {
                coeffs[big - k] = *c;
            }
            Poly::new(coeffs)
        };
        let nv = rev(&self.num).eval(u);
        let dv = rev(&self.den).eval(u);
        let dscale = rev(&self.den).eval_abs(u.norm()).max(1e-300);
        if dv.norm() <= 1e-14 * dscale {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(nv / dv)
        }
    }

    /// Derivative by the quotient rule, with the same pole conventions.
    /// Returns infinity at (multiple) poles and routes large moduli through
    /// the reciprocal chart like [`eval`](Self::eval).
    pub fn eval_derivative(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => SpherePoint::Infinity,
            SpherePoint::Finite(z) if z.norm() > BIG => {
                // R'(z) = -u^2 (N' D - N D')(u) / D(u)^2 with u = 1/z and
                // N, D the reversed numerator and denominator.
                let u = z.inv();
                let big = self.degree();
                let rev = |p: &Poly| {
                    let mut coeffs = vec![Complex64::new(0.0, 0.0); big + 1];
                    for (k, c) in p.coeffs.iter().enumerate() {
                        coeffs[big - k] = *c;
                    }
                    Poly::new(coeffs)
                };
                let n = rev(&self.num);
                let d = rev(&self.den);
                let wron = n.derivative().mul(&d).sub(&n.mul(&d.derivative()));
                let dv = d.eval(u);
                let dscale = d.eval_abs(u.norm()).max(1e-300);
                if dv.norm() <= 1e-14 * dscale {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(-u * u * wron.eval(u) / (dv * dv))
                }
            }
            SpherePoint::Finite(z) => {
                let w = self.wronskian();
                let dv = self.den.eval(z);
                let dscale = self.den.eval_abs(z.norm()).max(1e-300);
                if dv.norm() <= 1e-14 * dscale {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(w.eval(z) / (dv * dv))
                }
            }
        }
    }

    /// `num' den - num den'`; its roots are the finite critical points, with
    /// order-`m` poles contributing multiplicity `m - 1` automatically.
    pub fn wronskian(&self) -> Poly {
        self.num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()))
    }

    /// Local degree at infinity (1 when infinity is a regular point).
    pub fn local_degree_at_infinity(&self) -> usize {
        let dn = self.num.degree();
        let dd = self.den.degree();
        if dn != dd {
            return dn.abs_diff(dd);
        }
        // R(inf) finite: expand R - R(inf).
        let v = self.num.coeffs[dn] / self.den.coeffs[dd];
        let diff = self.num.sub(&self.den.scale(v));
        dn - diff.degree()
    }

    /// Critical points with multiplicities; the total always sums to
    /// `2 deg - 2`.
    pub fn critical_points(&self) -> Result<Vec<(SpherePoint, usize)>, Error> {
        let mut out: Vec<(SpherePoint, usize)> = Vec::new();
        let w = self.wronskian();
        if !w.is_zero() && w.degree() >= 1 || w.coeffs[0].norm() == 0.0 {
            for (z, m) in poly::roots_with_multiplicity(&w, CLUSTER_RADIUS)? {
                out.push((SpherePoint::Finite(z), m));
            }
        }
        let e_inf = self.local_degree_at_infinity();
        if e_inf >= 2 {
            out.push((SpherePoint::Infinity, e_inf - 1));
        }
        Ok(out)
    }

    /// The full fiber over `w`, with multiplicities summing to the degree.
    /// Every finite point satisfies `chordal(R(u), w) < 1e-8`.
    pub fn solve_preimages(&self, w: SpherePoint) -> Result<Vec<(SpherePoint, usize)>, Error> {
        let degree = self.degree();
        let mut out: Vec<(SpherePoint, usize)> = Vec::new();
        let p = match w {
            SpherePoint::Infinity => self.den.clone(),
            SpherePoint::Finite(w) => self.num.sub(&self.den.scale(w)),
        };
        let mut found = 0usize;
        if !p.is_zero() {
            for (z, m) in poly::roots_with_multiplicity(&p, CLUSTER_RADIUS)? {
                out.push((SpherePoint::Finite(z), m));
                found += m;
            }
        }
        if found < degree {
            out.push((SpherePoint::Infinity, degree - found));
        }
        Ok(out)
    }

    /// Coefficients of `mpost . R . mpre`, renormalized. Degree is preserved
    /// for nondegenerate Möbius maps.
    pub fn conjugate(&self, mpost: &MobiusMap, mpre: &MobiusMap) -> Result<RationalMap, Error> {
        let big = self.degree();
        let l1 = Poly::new(vec![mpre.b, mpre.a]);
        let l2 = Poly::new(vec![mpre.d, mpre.c]);
        let substitute = |p: &Poly| {
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs.iter().enumerate() {
                let term = l1.pow(k).mul(&l2.pow(big - k)).scale(*c);
                acc = acc.add(&term);
            }
            acc
        };
        let n1 = substitute(&self.num);
        let d1 = substitute(&self.den);
        let num = n1.scale(mpost.a).add(&d1.scale(mpost.b));
        let den = n1.scale(mpost.c).add(&d1.scale(mpost.d));
        RationalMap::new(num, den)
    }
}
