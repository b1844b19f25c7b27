//! Reduction of a fully ramified (p = 1) correspondence map to the classical
//! normal form: Möbius changes of variable take the degree-n map `R` to a
//! degree-n polynomial, and the involution `z -> 1/z` to `z -> -z`. For
//! n = 3 the polynomial is exactly `u^3 - 3u` and the correspondence becomes
//! the familiar 2:2 family whose defining symmetric form equals 3.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Config;
use crate::error::Error;
use crate::rational::RationalMap;
use crate::sphere::{MobiusMap, SpherePoint};

/// Output of the normalization pipeline.
#[derive(Debug, Clone, Serialize)]
pub struct NormalFormResult {
    /// Sends the critical points `c1, c2, c3` to `1, -1, infinity`.
    pub m1: MobiusMap,
    /// Sends the critical values `R(c1), R(c2), R(c3)` to `-2, 2, infinity`.
    pub m2: MobiusMap,
    /// Sends the fixed points `1, a` of the transported involution to
    /// `0, infinity`.
    pub m3: MobiusMap,
    /// The polynomial `m2 . R . m1^{-1}`; equals `u^3 - 3u` for n = 3.
    pub r1: RationalMap,
    /// `r1 . m3^{-1}`: the model whose correspondence pairs solve
    /// `r2(Y) = r2(-X)`.
    pub r2: RationalMap,
    /// The image `m1(-1)`, the second fixed point of the transported
    /// involution.
    pub a: Complex64,
    /// Sampled defect of the defining identity of the normal-form
    /// correspondence (the symmetric quadratic form for n = 3).
    pub final_identity_residual: f64,
}

/// The three distinguished critical points of a fully ramified family map:
/// the inversion-fixed boundary point, the pole cluster at the origin, and
/// the interior point of multiplicity n-1.
fn audit_critical_points(
    map: &RationalMap,
    n: u32,
) -> Result<(Complex64, Complex64, Complex64), Error> {
    let n = n as usize;
    if map.degree() != n {
        return Err(Error::NormalFormAudit(format!(
            "map degree {} but expected n = {n}",
            map.degree()
        )));
    }
    let crits = map.critical_points()?;
    let mut c1 = None;
    let mut pole_mult = 0usize;
    let mut c3 = None;
    for (z, m) in &crits {
        let z = match z {
            SpherePoint::Infinity => {
                return Err(Error::NormalFormAudit(
                    "unexpected critical point at infinity".into(),
                ))
            }
            SpherePoint::Finite(z) => *z,
        };
        if z.norm() < 1e-7 {
            pole_mult += m;
        } else if *m == n - 1 {
            c3 = Some(z);
        } else if *m == 1 && (z - z.inv()).norm() < 1e-6 {
            c1 = Some(z);
        } else {
            return Err(Error::NormalFormAudit(format!(
                "unexpected critical point {z} of multiplicity {m}"
            )));
        }
    }
    if pole_mult != n - 2 {
        return Err(Error::NormalFormAudit(format!(
            "pole cluster multiplicity {pole_mult}, expected {}",
            n - 2
        )));
    }
    let c1 = c1.ok_or_else(|| {
        Error::NormalFormAudit("no inversion-fixed simple critical point".into())
    })?;
    let c3 = c3.ok_or_else(|| {
        Error::NormalFormAudit(format!("no critical point of multiplicity {}", n - 1))
    })?;
    Ok((c1, Complex64::new(0.0, 0.0), c3))
}

/// Runs the normalization pipeline on a fully ramified family map.
pub fn bp_normalize(map: &RationalMap, n: u32, config: &Config) -> Result<NormalFormResult, Error> {
    let (c1, c2, c3) = audit_critical_points(map, n)?;
    let p1 = SpherePoint::Finite(c1);
    let p2 = SpherePoint::Finite(c2);
    let p3 = SpherePoint::Finite(c3);
    let m1 = MobiusMap::from_three_points(
        [p1, p2, p3],
        [
            SpherePoint::ONE,
            SpherePoint::new(-1.0, 0.0),
            SpherePoint::Infinity,
        ],
    )?;
    let m2 = MobiusMap::from_three_points(
        [map.eval(p1), map.eval(p2), map.eval(p3)],
        [
            SpherePoint::new(-2.0, 0.0),
            SpherePoint::new(2.0, 0.0),
            SpherePoint::Infinity,
        ],
    )?;
    let r1 = map.conjugate(&m2, &m1.inverse())?;
    if !r1.is_polynomial() {
        return Err(Error::NormalFormAudit(format!(
            "conjugated map has denominator of degree {}",
            r1.den().degree()
        )));
    }
    let a = m1
        .apply(SpherePoint::new(-1.0, 0.0))
        .expect_finite()
        .map_err(|_| Error::NormalFormAudit("m1(-1) is infinite".into()))?;
    // m3(u) = (u - 1)/(a - u).
    let m3 = MobiusMap::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        a,
    )?;
    let r2 = r1.conjugate(&MobiusMap::IDENTITY, &m3.inverse())?;

    let mut result = NormalFormResult {
        m1,
        m2,
        m3,
        r1,
        r2,
        a,
        final_identity_residual: 0.0,
    };
    result.final_identity_residual = identity_residual(&result, n, config)?;
    Ok(result)
}

/// The branches of the normal-form correspondence at `x`: the solutions `Y`
/// of `r2(Y) = r2(-x)` with the diagonal root `Y = -x` removed once.
pub fn bp_branches(res: &NormalFormResult, x: SpherePoint) -> Result<Vec<SpherePoint>, Error> {
    let neg = negate(x);
    let v = res.r2.eval(neg);
    let d = res.r2.degree() - 1;
    let num = res.r2.num();
    let den = res.r2.den();
    let mut p = match v {
        SpherePoint::Infinity => den.clone(),
        SpherePoint::Finite(v) => num.sub(&den.scale(v)),
    };
    if let SpherePoint::Finite(nf) = neg {
        p = p.deflate(nf);
    }
    let mut out = Vec::with_capacity(d);
    for (z, m) in crate::poly::roots_with_multiplicity(&p, crate::rational::CLUSTER_RADIUS)? {
        for _ in 0..m {
            out.push(SpherePoint::Finite(z));
        }
    }
    while out.len() < d {
        out.push(SpherePoint::Infinity);
    }
    Ok(out)
}

fn negate(z: SpherePoint) -> SpherePoint {
    match z {
        SpherePoint::Infinity => SpherePoint::Infinity,
        SpherePoint::Finite(z) => SpherePoint::Finite(-z),
    }
}

/// Sampled defect of the defining identity on 64 correspondence pairs. For
/// n = 3 this is the symmetric quadratic form
/// `u^2 + u v + v^2 = 3` with `u = (aY+1)/(Y+1)`, `v = (aX-1)/(X-1)`;
/// for other degrees the tautological branch identity `r2(Y) = r2(-X)` is
/// measured instead.
fn identity_residual(res: &NormalFormResult, n: u32, config: &Config) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xb9);
    let mut worst: f64 = 0.0;
    let mut pairs = 0usize;
    while pairs < 64 {
        let x = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let xs = SpherePoint::Finite(x);
        let ys = bp_branches(res, xs)?;
        for y in ys {
            let Some(y) = y.finite() else { continue };
            if n == 3 {
                let u = (res.a * y + 1.0) / (y + 1.0);
                let v = (res.a * x - 1.0) / (x - 1.0);
                let form = u * u + u * v + v * v;
                worst = worst.max((form - Complex64::new(3.0, 0.0)).norm());
            } else {
                let lhs = res.r2.eval(SpherePoint::Finite(y));
                let rhs = res.r2.eval(negate(xs));
                worst = worst.max(lhs.chordal_dist(&rhs));
            }
            pairs += 1;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bers::{build_family_c, FamilyCParams};
    use crate::corr::Correspondence;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cubic() -> RationalMap {
        build_family_c(&FamilyCParams {
            n: 3,
            p: 1,
            critical_data: vec![c(1.0, 0.0)],
        })
        .unwrap()
    }

    #[test]
    fn worked_cubic_normalization() {
        let res = bp_normalize(&cubic(), 3, &Config::default()).unwrap();
        // m1 = (4z - 1)/(2z + 1).
        let expect =
            MobiusMap::new(c(4.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(res.m1.dist_up_to_sign(&expect) < 1e-9);
        // a = m1(-1) = 5.
        assert!((res.a - c(5.0, 0.0)).norm() < 1e-9);
        // r1 = u^3 - 3u.
        assert!(res.r1.is_polynomial());
        let want = [0.0, -3.0, 0.0, 1.0];
        for (k, w) in want.iter().enumerate() {
            assert!(
                (res.r1.num().coeffs[k] - c(*w, 0.0)).norm() < 1e-9,
                "coefficient {k}: {} vs {w}",
                res.r1.num().coeffs[k]
            );
        }
        assert!(res.final_identity_residual < 1e-8);
    }

    #[test]
    fn m2_is_the_expected_quadratic_transform() {
        // m2(w) = 2 - 27/(2w): check on three anchor values.
        let res = bp_normalize(&cubic(), 3, &Config::default()).unwrap();
        let checks = [
            (SpherePoint::new(27.0 / 8.0, 0.0), SpherePoint::new(-2.0, 0.0)),
            (SpherePoint::Infinity, SpherePoint::new(2.0, 0.0)),
            (SpherePoint::new(1.0, 0.0), SpherePoint::new(2.0 - 13.5, 0.0)),
        ];
        for (from, to) in checks {
            assert!(res.m2.apply(from).chordal_dist(&to) < 1e-9);
        }
        assert!(res.m2.apply(SpherePoint::ZERO).is_infinity());
    }

    #[test]
    fn normal_form_critical_structure() {
        // r1'(x) = 0 at x = 1 and x = -1 with r1(1) = -2, r1(-1) = 2.
        let res = bp_normalize(&cubic(), 3, &Config::default()).unwrap();
        for (x, v) in [(1.0, -2.0), (-1.0, 2.0)] {
            let z = SpherePoint::new(x, 0.0);
            let dv = res.r1.eval_derivative(z).finite().unwrap();
            assert!(dv.norm() < 1e-9);
            assert!(res.r1.eval(z).approx_eq(&SpherePoint::new(v, 0.0), 1e-9));
        }
    }

    #[test]
    fn branches_have_bidegree_two() {
        let res = bp_normalize(&cubic(), 3, &Config::default()).unwrap();
        let ys = bp_branches(&res, SpherePoint::new(0.3, 0.4)).unwrap();
        assert_eq!(ys.len(), 2);
    }

    #[test]
    fn branch_chain_matches_original_correspondence() {
        // Transporting the normal-form branches back through m3 . m1 must
        // reproduce the branches of the original correspondence.
        let map = cubic();
        let res = bp_normalize(&map, 3, &Config::default()).unwrap();
        let corr = Correspondence::new(map, Config::default()).unwrap();
        let chain = res.m3.compose(&res.m1);
        let chain_inv = chain.inverse();
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..100 {
            let z = SpherePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let expect = corr.forward(z).unwrap();
            let x = chain.apply(z);
            let ys = bp_branches(&res, x).unwrap();
            let back: Vec<SpherePoint> = ys.iter().map(|y| chain_inv.apply(*y)).collect();
            for b in &back {
                assert!(
                    expect.iter().any(|e| e.chordal_dist(b) < 1e-7),
                    "unmatched transported branch {b}"
                );
            }
        }
    }

    #[test]
    fn deflation_edge_at_critical_point() {
        // -X a critical point of r2: the diagonal deflation removes one copy
        // and the remaining root keeps its multiplicity.
        let res = bp_normalize(&cubic(), 3, &Config::default()).unwrap();
        // Critical points of r2 are at m3(±1) = {0, m3(-1)}.
        let xcrit = res.m3.apply(SpherePoint::new(-1.0, 0.0));
        let x = negate(xcrit);
        let ys = bp_branches(&res, x).unwrap();
        assert_eq!(ys.len(), 2);
    }

    #[test]
    fn quartic_pipeline_emits_polynomial() {
        let map = build_family_c(&FamilyCParams {
            n: 4,
            p: 1,
            critical_data: vec![c(1.0, 0.0)],
        })
        .unwrap();
        let res = bp_normalize(&map, 4, &Config::default()).unwrap();
        assert!(res.r1.is_polynomial());
        assert_eq!(res.r1.degree(), 4);
        assert!(res.final_identity_residual < 1e-7);
        let ys = bp_branches(&res, SpherePoint::new(0.2, -0.7)).unwrap();
        assert_eq!(ys.len(), 3);
    }

    #[test]
    fn rejects_wrong_degree() {
        assert!(bp_normalize(&cubic(), 4, &Config::default()).is_err());
    }
}
