//! The three normalized rational-map families whose coefficient spaces
//! realize a Bers slice in the space of correspondences: punctured spheres
//! (family A), punctured spheres with one order-two point (family B), and
//! orbifolds with one higher-order point (family C).
//!
//! All maps are normalized so that `R(z) = z + O(1/z)` at infinity and the
//! pole at the origin has exact order `np - 1`. The dependent coefficients
//! encode the inversion symmetry of the critical polynomial
//! `Q(z) = z^p - sum_j j a_j z^{p-1-j}` (families A, B) respectively
//! `Q(z) = z^p + sum_j (-1)^j e_j (1 - nj) z^{p-j}` (family C), whose roots
//! are the critical points on the boundary curve.

use num_complex::Complex64;

use crate::error::Error;
use crate::group::teich_dimension;
use crate::poly::{self, Poly};
use crate::rational::RationalMap;
use crate::sphere::SpherePoint;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Parameters for the even-`p`, `n = 1` family
/// `R(z) = z + a_1/z + ... + 1/((2q-1) z^{2q-1})` with `p = 2q`.
#[derive(Debug, Clone)]
pub struct FamilyAParams {
    pub q: u32,
    /// Free coefficients `a_1 .. a_{q-2}`.
    pub free: Vec<Complex64>,
}

/// Parameters for the odd-`p`, `n = 1` family
/// `R(z) = z + a_1/z + ... + 1/(2q z^{2q})` with `p = 2q + 1`.
#[derive(Debug, Clone)]
pub struct FamilyBParams {
    pub q: u32,
    /// Free coefficients `a_1 .. a_{q-1}`.
    pub free: Vec<Complex64>,
}

/// Parameters for the `n >= 3` family
/// `R(z) = ((z - a_1) ... (z - a_p))^n / z^{np-1}`, parametrized by the
/// inversion-symmetric root multiset of its critical polynomial.
#[derive(Debug, Clone)]
pub struct FamilyCParams {
    pub n: u32,
    pub p: u32,
    /// The `p` roots of the critical polynomial: `1`, `-1` when `p` is even,
    /// and pairs `c, 1/c`.
    pub critical_data: Vec<Complex64>,
}

impl FamilyCParams {
    /// Assembles the symmetric critical multiset from the free parameters
    /// `c_1, ..., c_k` (one per inversion pair).
    pub fn from_free(n: u32, p: u32, free: &[Complex64]) -> Result<Self, Error> {
        let expected = free_parameter_count_c(p);
        if free.len() != expected {
            return Err(Error::BadFamilyParameters(format!(
                "family c with p = {p} takes {expected} free parameters, got {}",
                free.len()
            )));
        }
        let mut critical_data = vec![ONE];
        if p % 2 == 0 {
            critical_data.push(-ONE);
        }
        for c in free {
            if c.norm() < 1e-12 {
                return Err(Error::BadFamilyParameters(
                    "critical parameters must be nonzero".into(),
                ));
            }
            critical_data.push(*c);
            critical_data.push(c.inv());
        }
        Ok(FamilyCParams {
            n,
            p,
            critical_data,
        })
    }
}

fn free_parameter_count_c(p: u32) -> usize {
    if p % 2 == 0 {
        (p as usize - 2) / 2
    } else {
        (p as usize - 1) / 2
    }
}

/// Number of free complex parameters of the family attached to `(n, p)`;
/// equals the Teichmüller dimension of the extended group.
pub fn free_parameter_count(n: u32, p: u32) -> Result<usize, Error> {
    if n == 1 {
        if p % 2 == 0 {
            let q = p / 2;
            if q < 2 {
                return Err(Error::BadFamilyParameters(format!("family a needs q >= 2, got p = {p}")));
            }
            Ok(q as usize - 2)
        } else {
            let q = (p - 1) / 2;
            if q < 2 {
                return Err(Error::BadFamilyParameters(format!("family b needs q >= 2, got p = {p}")));
            }
            Ok(q as usize - 1)
        }
    } else {
        Ok(free_parameter_count_c(p))
    }
}

/// Builds the family-A map for `p = 2q`.
pub fn build_family_a(params: &FamilyAParams) -> Result<RationalMap, Error> {
    let q = params.q as usize;
    if q < 2 {
        return Err(Error::BadFamilyParameters("family a needs q >= 2".into()));
    }
    if params.free.len() != q - 2 {
        return Err(Error::BadFamilyParameters(format!(
            "family a with q = {q} takes {} free parameters, got {}",
            q - 2,
            params.free.len()
        )));
    }
    let p = 2 * q;
    // Laurent coefficients a_1 .. a_{p-1}; indices q-1 and 2q-2 vanish,
    // indices q .. 2q-3 are dependent, the last is 1/(2q-1).
    let mut a = vec![Complex64::new(0.0, 0.0); p];
    for (j, c) in params.free.iter().enumerate() {
        a[j + 1] = *c;
    }
    for j in 2..=q.saturating_sub(1) {
        a[2 * q - j - 1] = -((j - 1) as f64 / (2 * q - j - 1) as f64) * a[j - 1];
    }
    a[2 * q - 1] = Complex64::new(1.0 / (2 * q - 1) as f64, 0.0);
    laurent_to_map(&a, p)
}

/// Builds the family-B map for `p = 2q + 1`.
pub fn build_family_b(params: &FamilyBParams) -> Result<RationalMap, Error> {
    let q = params.q as usize;
    if q < 2 {
        return Err(Error::BadFamilyParameters("family b needs q >= 2".into()));
    }
    if params.free.len() != q - 1 {
        return Err(Error::BadFamilyParameters(format!(
            "family b with q = {q} takes {} free parameters, got {}",
            q - 1,
            params.free.len()
        )));
    }
    let p = 2 * q + 1;
    let mut a = vec![Complex64::new(0.0, 0.0); p];
    for (j, c) in params.free.iter().enumerate() {
        a[j + 1] = *c;
    }
    for j in 2..=q {
        a[2 * q - j] = -((j - 1) as f64 / (2 * q - j) as f64) * a[j - 1];
    }
    a[2 * q] = Complex64::new(1.0 / (2 * q) as f64, 0.0);
    laurent_to_map(&a, p)
}

/// `z + a_1/z + ... + a_{p-1}/z^{p-1}` as a rational map with pole order
/// `p - 1` at the origin. `a[0]` is unused padding so `a[j]` is `a_j`.
fn laurent_to_map(a: &[Complex64], p: usize) -> Result<RationalMap, Error> {
    let mut num = vec![Complex64::new(0.0, 0.0); p + 1];
    num[p] = ONE;
    for j in 1..p {
        num[p - 1 - j] = a[j];
    }
    RationalMap::new(Poly::new(num), Poly::monomial(p - 1))
}

/// Builds the family-C map from its symmetric critical data.
pub fn build_family_c(params: &FamilyCParams) -> Result<RationalMap, Error> {
    let n = params.n as usize;
    let p = params.p as usize;
    if params.n < 3 {
        return Err(Error::BadFamilyParameters("family c needs n >= 3".into()));
    }
    if params.critical_data.len() != p {
        return Err(Error::BadFamilyParameters(format!(
            "family c with p = {p} needs {p} critical values, got {}",
            params.critical_data.len()
        )));
    }
    check_symmetric_multiset(&params.critical_data, p as u32)?;
    // Expand Q from its roots and read off the elementary symmetric
    // functions of the zeros: e_j = (-1)^j Q_{p-j} / (1 - nj).
    let q_poly = Poly::from_roots(&params.critical_data);
    let mut s_coeffs = vec![Complex64::new(0.0, 0.0); p + 1];
    s_coeffs[p] = ONE;
    for j in 1..=p {
        let denom = 1.0 - (n * j) as f64;
        s_coeffs[p - j] = q_poly.coeffs[p - j] / denom;
    }
    let s = Poly::new(s_coeffs);
    let zeros = poly::all_roots(&s)?;
    for (i, z1) in zeros.iter().enumerate() {
        for z2 in zeros.iter().skip(i + 1) {
            if (z1 - z2).norm() < 1e-9 {
                return Err(Error::BadFamilyParameters(format!(
                    "degenerate parameters: zeros collide near {z1}"
                )));
            }
        }
    }
    let num = s.pow(n);
    RationalMap::new(num, Poly::monomial(n * p - 1))
}

fn check_symmetric_multiset(data: &[Complex64], p: u32) -> Result<(), Error> {
    let tol = 1e-7;
    for c in data {
        if c.norm() < 1e-12 {
            return Err(Error::BadFamilyParameters("critical datum at zero".into()));
        }
    }
    if !data.iter().any(|c| (c - ONE).norm() < tol) {
        return Err(Error::BadFamilyParameters(
            "critical data must contain 1".into(),
        ));
    }
    if p % 2 == 0 && !data.iter().any(|c| (c + ONE).norm() < tol) {
        return Err(Error::BadFamilyParameters(
            "critical data must contain -1 for even p".into(),
        ));
    }
    // Inversion closure by nearest matching.
    for c in data {
        let inv = c.inv();
        if !data.iter().any(|d| (d - inv).norm() < tol) {
            return Err(Error::BadFamilyParameters(format!(
                "critical data not closed under inversion at {c}"
            )));
        }
    }
    Ok(())
}

/// The critical polynomial `Q` of a normalized family map: the monic degree
/// `p` factor of the derivative numerator carrying the boundary critical
/// points.
pub fn critical_polynomial(map: &RationalMap, n: u32, p: u32) -> Result<Poly, Error> {
    let num = map.num();
    let np = (n * p) as usize;
    if num.degree() != np || map.den().degree() != np - 1 {
        return Err(Error::FamilyAudit(format!(
            "map is not in normalized family form for (n, p) = ({n}, {p})"
        )));
    }
    let p = p as usize;
    if n == 1 {
        // Q(z) = z^p - sum_j j a_j z^{p-1-j} with a_j = num_{p-1-j}.
        let mut coeffs = vec![Complex64::new(0.0, 0.0); p + 1];
        coeffs[p] = ONE;
        for j in 1..p {
            coeffs[p - 1 - j] = -(j as f64) * num.coeffs[p - 1 - j];
        }
        Ok(Poly::new(coeffs))
    } else {
        let s = num.nth_root(n as usize, 1e-8)?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); p + 1];
        for j in 0..=p {
            let factor = 1.0 - (n as usize * j) as f64;
            coeffs[p - j] = s.coeffs[p - j] * factor;
        }
        Ok(Poly::new(coeffs))
    }
}

/// Residual of the inversion antisymmetry `z^p Q(1/z) = -Q(z)`,
/// coefficient-wise and relative to the largest coefficient.
pub fn inversion_symmetry_residual(q_poly: &Poly) -> f64 {
    let p = q_poly.degree();
    let scale = q_poly.max_coeff_norm();
    let mut worst: f64 = 0.0;
    for k in 0..=p {
        // Reversal with sign: coeff_k(Q) + coeff_{p-k}(Q) should vanish.
        let r = (q_poly.coeffs[k] + q_poly.coeffs[p - k]).norm();
        worst = worst.max(r / scale);
    }
    worst
}

/// Classified critical structure of a family map.
#[derive(Debug, Clone)]
pub struct FamilyAudit {
    /// Critical points on the boundary curve (the roots of `Q`).
    pub boundary: Vec<Complex64>,
    /// How many boundary points are fixed by `z -> 1/z`.
    pub eta_fixed: usize,
    /// Multiplicity of the critical point at the origin.
    pub pole_multiplicity: usize,
    /// The higher-order critical points with their shared value (n >= 2).
    pub tiling: Vec<Complex64>,
    pub tiling_value: Option<Complex64>,
}

/// Audits the critical structure required of a normalized family map of
/// degree `np`:
///
/// 1. exactly `p` boundary critical points forming an inversion-invariant
///    set with two (even `p`) or one (odd `p`) fixed points of `z -> 1/z`;
/// 2. a critical point of multiplicity `np - 2` at the origin (the order
///    `np - 1` pole);
/// 3. for `n >= 2`, `p` critical points of multiplicity `n - 1` sharing one
///    critical value;
/// 4. `R(infinity) = infinity` with derivative 1 in the series sense.
pub fn validate_family(map: &RationalMap, n: u32, p: u32) -> Result<FamilyAudit, Error> {
    let np = (n * p) as usize;
    if map.degree() != np {
        return Err(Error::FamilyAudit(format!(
            "degree {} but expected np = {np}",
            map.degree()
        )));
    }
    // (iv) series normalization at infinity.
    let num = map.num();
    let den = map.den();
    if num.degree() != den.degree() + 1 {
        return Err(Error::FamilyAudit(
            "infinity is not a simple fixed point (degree mismatch)".into(),
        ));
    }
    let lead = num.coeffs[num.degree()] / den.coeffs[den.degree()];
    if (lead - ONE).norm() > 1e-9 {
        return Err(Error::FamilyAudit(format!(
            "derivative at infinity is {lead}, expected 1"
        )));
    }
    // (ii) pole order np-1 at the origin, i.e. den = z^{np-1} exactly.
    if den.degree() != np - 1 {
        return Err(Error::FamilyAudit("pole order at origin is wrong".into()));
    }
    for c in &den.coeffs[..np - 1] {
        if c.norm() > 1e-10 {
            return Err(Error::FamilyAudit(
                "denominator is not a pure power of z".into(),
            ));
        }
    }

    let crits = map.critical_points()?;
    let mut pole_multiplicity = 0usize;
    let mut tiling: Vec<Complex64> = Vec::new();
    let mut tiling_mults: Vec<usize> = Vec::new();
    let mut boundary: Vec<Complex64> = Vec::new();
    for (z, m) in &crits {
        let z = match z {
            SpherePoint::Infinity => {
                return Err(Error::FamilyAudit(
                    "unexpected critical point at infinity".into(),
                ))
            }
            SpherePoint::Finite(z) => *z,
        };
        if z.norm() < 1e-6 {
            pole_multiplicity += m;
        } else if n >= 2 && *m == (n - 1) as usize && value_is_zero(map, z) {
            tiling.push(z);
            tiling_mults.push(*m);
        } else {
            for _ in 0..*m {
                boundary.push(z);
            }
        }
    }
    if pole_multiplicity != np - 2 {
        return Err(Error::FamilyAudit(format!(
            "pole cluster multiplicity {pole_multiplicity}, expected {}",
            np - 2
        )));
    }
    if boundary.len() != p as usize {
        return Err(Error::FamilyAudit(format!(
            "{} boundary critical points, expected p = {p}",
            boundary.len()
        )));
    }
    // (i) inversion symmetry of the boundary set.
    let tol = 1e-7;
    let mut eta_fixed = 0usize;
    for c in &boundary {
        let inv = c.inv();
        if (c - inv).norm() < tol {
            eta_fixed += 1;
        } else if !boundary.iter().any(|d| (d - inv).norm() < tol) {
            return Err(Error::FamilyAudit(format!(
                "boundary critical set not inversion-invariant at {c}"
            )));
        }
    }
    let expected_fixed = if p % 2 == 0 { 2 } else { 1 };
    if eta_fixed != expected_fixed {
        return Err(Error::FamilyAudit(format!(
            "{eta_fixed} inversion-fixed boundary critical points, expected {expected_fixed}"
        )));
    }
    // (iii) the higher-order critical points share one value.
    let mut tiling_value = None;
    if n >= 2 {
        if tiling.len() != p as usize {
            return Err(Error::FamilyAudit(format!(
                "{} critical points of multiplicity {}, expected p = {p}",
                tiling.len(),
                n - 1
            )));
        }
        let v0 = map.eval(SpherePoint::Finite(tiling[0]));
        for t in &tiling[1..] {
            let v = map.eval(SpherePoint::Finite(*t));
            if v.chordal_dist(&v0) > 1e-7 {
                return Err(Error::FamilyAudit(
                    "higher-order critical points do not share a value".into(),
                ));
            }
        }
        tiling_value = v0.finite();
    }
    Ok(FamilyAudit {
        boundary,
        eta_fixed,
        pole_multiplicity,
        tiling,
        tiling_value,
    })
}

fn value_is_zero(map: &RationalMap, z: Complex64) -> bool {
    map.eval(SpherePoint::Finite(z))
        .approx_eq(&SpherePoint::ZERO, 1e-7)
}

/// Free-parameter count sanity: the family attached to `(n, p)` has exactly
/// `dim Teich` free complex parameters.
pub fn dimension_check(n: u32, p: u32) -> Result<(), Error> {
    let fam = free_parameter_count(n, p)? as i64;
    let dim = teich_dimension(n, p)?;
    if fam != dim {
        return Err(Error::FamilyAudit(format!(
            "family has {fam} free parameters but Teichmueller dimension is {dim}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn family_a_q2_is_the_quartic() {
        let r = build_family_a(&FamilyAParams { q: 2, free: vec![] }).unwrap();
        // z + 1/(3 z^3)
        assert_eq!(r.degree(), 4);
        let v = r.eval(SpherePoint::new(2.0, 0.0)).finite().unwrap();
        assert!((v - c(2.0 + 1.0 / 24.0, 0.0)).norm() < 1e-12);
        let q = critical_polynomial(&r, 1, 4).unwrap();
        // Q = z^4 - 1: roots are the fourth roots of unity.
        assert_eq!(q.degree(), 4);
        assert!((q.coeffs[0] + ONE).norm() < 1e-12);
        for k in 1..4 {
            assert!(q.coeffs[k].norm() < 1e-12);
        }
    }

    #[test]
    fn family_a_q3_dependent_coefficients() {
        // a1 = 0 gives z + 1/(5 z^5).
        let r = build_family_a(&FamilyAParams {
            q: 3,
            free: vec![c(0.0, 0.0)],
        })
        .unwrap();
        let v = r.eval(SpherePoint::new(1.0, 0.0)).finite().unwrap();
        assert!((v - c(1.2, 0.0)).norm() < 1e-12);

        // a1 = 1: R = z + 1/z - 1/(3 z^3) + 1/(5 z^5), Q = z^6 - z^4 + z^2 - 1.
        let r = build_family_a(&FamilyAParams {
            q: 3,
            free: vec![ONE],
        })
        .unwrap();
        let q = critical_polynomial(&r, 1, 6).unwrap();
        let want = [-1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0];
        for (k, w) in want.iter().enumerate() {
            assert!((q.coeffs[k] - c(*w, 0.0)).norm() < 1e-12, "k = {k}");
        }
        assert!(q.eval(ONE).norm() < 1e-12);
        assert!(q.eval(-ONE).norm() < 1e-12);
        assert!(inversion_symmetry_residual(&q) < 1e-12);
    }

    #[test]
    fn family_b_q2_cases() {
        let r = build_family_b(&FamilyBParams { q: 2, free: vec![c(0.0, 0.0)] }).unwrap();
        // z + 1/(4 z^4): Q = z^5 - 1.
        let q = critical_polynomial(&r, 1, 5).unwrap();
        assert!((q.coeffs[0] + ONE).norm() < 1e-12);
        assert_eq!(q.degree(), 5);

        // a1 = 1 forces a2 = -1/2.
        let r = build_family_b(&FamilyBParams { q: 2, free: vec![ONE] }).unwrap();
        // num = z^5 + a1 z^3 + a2 z^2 + a4: check coefficient of z^2.
        assert!((r.num().coeffs[2] - c(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn family_b_degree_by_fiber_count() {
        let r = build_family_b(&FamilyBParams { q: 2, free: vec![c(0.1, 0.05)] }).unwrap();
        assert_eq!(r.degree(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..3 {
            let w = SpherePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let total: usize = r.solve_preimages(w).unwrap().iter().map(|(_, m)| m).sum();
            assert_eq!(total, 5);
        }
    }

    #[test]
    fn family_c_examples() {
        // (3,1) with critical datum {1}: (z + 1/2)^3 / z^2.
        let r = build_family_c(&FamilyCParams {
            n: 3,
            p: 1,
            critical_data: vec![ONE],
        })
        .unwrap();
        assert_eq!(r.degree(), 3);
        let v = r.eval(SpherePoint::ONE).finite().unwrap();
        assert!((v - c(27.0 / 8.0, 0.0)).norm() < 1e-10);

        // (3,2) with {1,-1}: (z^2 + 1/5)^3 / z^5.
        let r = build_family_c(&FamilyCParams {
            n: 3,
            p: 2,
            critical_data: vec![ONE, -ONE],
        })
        .unwrap();
        let v = r.eval(SpherePoint::ONE).finite().unwrap();
        assert!((v - c((1.2f64).powi(3), 0.0)).norm() < 1e-10);

        // General (n, 1): the zero sits at -1/(n-1).
        for n in [3u32, 4, 5] {
            let r = build_family_c(&FamilyCParams {
                n,
                p: 1,
                critical_data: vec![ONE],
            })
            .unwrap();
            let zero = -1.0 / (n as f64 - 1.0);
            let v = r.eval(SpherePoint::new(zero, 0.0));
            assert!(v.approx_eq(&SpherePoint::ZERO, 1e-9), "n = {n}");
        }
    }

    #[test]
    fn family_c_round_trips_critical_data() {
        let free = [c(0.4, 0.3)];
        let params = FamilyCParams::from_free(3, 3, &free).unwrap();
        let r = build_family_c(&params).unwrap();
        let q = critical_polynomial(&r, 3, 3).unwrap();
        let roots = poly::all_roots(&q).unwrap();
        assert_eq!(roots.len(), 3);
        for want in &params.critical_data {
            assert!(
                roots.iter().any(|g| (g - want).norm() < 1e-8),
                "missing root {want}"
            );
        }
    }

    #[test]
    fn validate_family_a_q2() {
        let r = build_family_a(&FamilyAParams { q: 2, free: vec![] }).unwrap();
        let audit = validate_family(&r, 1, 4).unwrap();
        assert_eq!(audit.boundary.len(), 4);
        assert_eq!(audit.eta_fixed, 2);
        assert_eq!(audit.pole_multiplicity, 2);
        assert!(audit.tiling.is_empty());
        for b in &audit.boundary {
            assert!((b.norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn validate_family_c() {
        let r = build_family_c(&FamilyCParams {
            n: 3,
            p: 1,
            critical_data: vec![ONE],
        })
        .unwrap();
        let audit = validate_family(&r, 3, 1).unwrap();
        assert_eq!(audit.boundary.len(), 1);
        assert!((audit.boundary[0] - ONE).norm() < 1e-8);
        assert_eq!(audit.pole_multiplicity, 1);
        assert_eq!(audit.tiling.len(), 1);
        assert!((audit.tiling[0] - c(-0.5, 0.0)).norm() < 1e-8);
        assert!(audit.tiling_value.unwrap().norm() < 1e-8);

        // (3,2): two boundary points, two tiling points sharing a value.
        let r = build_family_c(&FamilyCParams {
            n: 3,
            p: 2,
            critical_data: vec![ONE, -ONE],
        })
        .unwrap();
        let audit = validate_family(&r, 3, 2).unwrap();
        assert_eq!(audit.boundary.len(), 2);
        assert_eq!(audit.tiling.len(), 2);
        let s5 = (5.0f64).sqrt();
        for t in &audit.tiling {
            assert!((t.im.abs() - 1.0 / s5).abs() < 1e-8 && t.re.abs() < 1e-8);
        }
    }

    #[test]
    fn q_symmetry_for_generic_parameters() {
        let r = build_family_a(&FamilyAParams {
            q: 4,
            free: vec![c(0.1, 0.2), c(-0.05, 0.07)],
        })
        .unwrap();
        let q = critical_polynomial(&r, 1, 8).unwrap();
        assert!(inversion_symmetry_residual(&q) < 1e-10);
        assert!(q.eval(ONE).norm() < 1e-10);
        assert!(q.eval(-ONE).norm() < 1e-10);

        let r = build_family_b(&FamilyBParams {
            q: 3,
            free: vec![c(0.2, -0.1), c(0.0, 0.15)],
        })
        .unwrap();
        let q = critical_polynomial(&r, 1, 7).unwrap();
        assert!(inversion_symmetry_residual(&q) < 1e-10);
        assert!(q.eval(ONE).norm() < 1e-10);
    }

    #[test]
    fn free_parameters_match_teich_dimension() {
        for (n, p) in [(1u32, 4u32), (1, 6), (1, 8), (1, 5), (1, 7), (3, 1), (3, 2), (4, 1), (3, 3)] {
            dimension_check(n, p).unwrap();
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_family_a(&FamilyAParams { q: 1, free: vec![] }).is_err());
        assert!(build_family_a(&FamilyAParams { q: 3, free: vec![] }).is_err());
        assert!(build_family_c(&FamilyCParams {
            n: 2,
            p: 1,
            critical_data: vec![ONE],
        })
        .is_err());
        // Critical data missing the mandatory root at 1.
        assert!(build_family_c(&FamilyCParams {
            n: 3,
            p: 1,
            critical_data: vec![c(2.0, 0.0)],
        })
        .is_err());
    }
}
