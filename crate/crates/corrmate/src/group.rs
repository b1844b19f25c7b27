//! The Fuchsian groups Γ(n,p): side-paired ideal np-gons in the unit disk
//! with an order-n rotational symmetry, plus the orbifold arithmetic of the
//! group and of its extension by the rotation.
//!
//! Geodesic `C(r,s)` runs between the circle points at angles
//! `2π(r-1)/n + 2π(s-1)/(np)` and `2π(r-1)/n + 2πs/(np)`; the boundary arc it
//! cuts off is `J(r,s)`. The generator `g(1,s)` is the reflection in
//! `C(1,s)` followed by the reflection in the diameter through `±e^{iπ/n}`,
//! and `g(r,s)` is its conjugate by the rotation power `r-1`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::Error;
use crate::sphere::{Geodesic, MobiusMap};

/// One-based side index (r, s) with `r` in `1..=n`, `s` in `1..=p`.
pub type SideIndex = (u32, u32);

/// The group data for Γ(n,p): geodesics, arcs, generators, and the symmetry.
#[derive(Debug, Clone)]
pub struct GroupData {
    pub n: u32,
    pub p: u32,
    /// `e^{2πi/n}`.
    pub omega: Complex64,
    /// The rotation `z -> omega z`.
    pub rotation: MobiusMap,
    /// The diameter with endpoints `±e^{iπ/n}`.
    pub ell: Geodesic,
    geodesics: Vec<Geodesic>,
    generators: Vec<MobiusMap>,
    pub config: Config,
}

/// Counts of punctures and orbifold points of a quotient surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldSignature {
    pub punctures: u32,
    pub order2_points: u32,
    pub order_n_points: u32,
    /// The order of the higher-torsion points; meaningful only when
    /// `order_n_points > 0`.
    pub order_value: u32,
}

impl GroupData {
    /// Builds Γ(n,p). Requires `n, p >= 1` and `np >= 3`.
    pub fn build(n: u32, p: u32, config: Config) -> Result<Self, Error> {
        if n < 1 || p < 1 || n * p < 3 {
            return Err(Error::BadGroupParameters { n, p });
        }
        let eps = config.epsilon;
        let omega = Complex64::cis(TAU / n as f64);
        let ell_dir = Complex64::cis(std::f64::consts::PI / n as f64);
        let ell = Geodesic::new(ell_dir, -ell_dir, eps)?;
        let refl_ell = ell.reflection(eps);

        let np = (n * p) as f64;
        let mut geodesics = Vec::with_capacity((n * p) as usize);
        for r in 1..=n {
            for s in 1..=p {
                let base = TAU * (r - 1) as f64 / n as f64;
                let a = base + TAU * (s - 1) as f64 / np;
                let b = base + TAU * s as f64 / np;
                geodesics.push(Geodesic::from_angles(a, b, eps)?);
            }
        }

        // g(1,s) = reflection in ell after reflection in C(1,s); the other
        // generators are rotation conjugates.
        let rotation = MobiusMap::rotation(omega);
        let mut generators = Vec::with_capacity((n * p) as usize);
        for s in 1..=p {
            let c1s = &geodesics[(s - 1) as usize];
            let g = refl_ell.compose_into_mobius(&c1s.reflection(eps)).normalize();
            generators.push(g);
        }
        for r in 2..=n {
            let rot = rotation.pow(r as i32 - 1);
            let rot_inv = rotation.pow(-(r as i32 - 1));
            for s in 1..=p {
                let g = rot
                    .compose(&generators[(s - 1) as usize])
                    .compose(&rot_inv)
                    .normalize();
                generators.push(g);
            }
        }

        Ok(GroupData {
            n,
            p,
            omega,
            rotation,
            ell,
            geodesics,
            generators,
            config,
        })
    }

    fn flat_index(&self, r: u32, s: u32) -> usize {
        debug_assert!(1 <= r && r <= self.n && 1 <= s && s <= self.p);
        ((r - 1) * self.p + (s - 1)) as usize
    }

    /// The geodesic `C(r,s)`, oriented so its preferred arc is `J(r,s)`.
    pub fn geodesic(&self, r: u32, s: u32) -> &Geodesic {
        &self.geodesics[self.flat_index(r, s)]
    }

    /// The side pairing `g(r,s)`, normalized to determinant one.
    pub fn generator(&self, r: u32, s: u32) -> &MobiusMap {
        &self.generators[self.flat_index(r, s)]
    }

    /// Endpoint pair of the arc `J(r,s)` (equal to the geodesic endpoints).
    pub fn arc_endpoints(&self, r: u32, s: u32) -> (Complex64, Complex64) {
        let g = self.geodesic(r, s);
        (g.u, g.v)
    }

    pub fn sides(&self) -> impl Iterator<Item = SideIndex> + '_ {
        (1..=self.n).flat_map(move |r| (1..=self.p).map(move |s| (r, s)))
    }

    /// Serializable form matching the `group.json` schema.
    pub fn to_schema(&self) -> GroupSchema {
        let mut generators = BTreeMap::new();
        let mut geodesics = BTreeMap::new();
        for (r, s) in self.sides() {
            let key = format!("{r},{s}");
            generators.insert(key.clone(), *self.generator(r, s));
            let g = self.geodesic(r, s);
            geodesics.insert(key, [[g.u.re, g.u.im], [g.v.re, g.v.im]]);
        }
        GroupSchema {
            n: self.n,
            p: self.p,
            generators,
            geodesics,
        }
    }

    pub fn from_schema(schema: &GroupSchema, config: Config) -> Result<Self, Error> {
        // The schema is generative: rebuild from (n, p) and verify the stored
        // generators agree, so a corrupted file cannot smuggle in a
        // non-group.
        let built = GroupData::build(schema.n, schema.p, config)?;
        for (r, s) in built.sides() {
            let key = format!("{r},{s}");
            if let Some(m) = schema.generators.get(&key) {
                if m.dist_up_to_sign(built.generator(r, s)) > 1e-6 {
                    return Err(Error::BadGroupParameters {
                        n: schema.n,
                        p: schema.p,
                    });
                }
            }
        }
        Ok(built)
    }
}

/// JSON schema for a built group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSchema {
    pub n: u32,
    pub p: u32,
    pub generators: BTreeMap<String, MobiusMap>,
    pub geodesics: BTreeMap<String, [[f64; 2]; 2]>,
}

/// Signature of the quotient orbifold of Γ(n,p), or of its extension by the
/// rotation when `extended` is set. Higher-order entries appear only for
/// `n >= 2`.
pub fn quotient_signature(n: u32, p: u32, extended: bool) -> Result<OrbifoldSignature, Error> {
    if n < 1 || p < 1 || n * p < 3 {
        return Err(Error::BadGroupParameters { n, p });
    }
    let sig = if !extended {
        if p % 2 == 0 {
            OrbifoldSignature {
                punctures: n * p / 2 + 1,
                order2_points: 0,
                order_n_points: 0,
                order_value: 0,
            }
        } else {
            OrbifoldSignature {
                punctures: n * (p - 1) / 2 + 1,
                order2_points: n,
                order_n_points: 0,
                order_value: 0,
            }
        }
    } else if p % 2 == 0 {
        OrbifoldSignature {
            punctures: p / 2 + 1,
            order2_points: 0,
            order_n_points: u32::from(n >= 2),
            order_value: if n >= 2 { n } else { 0 },
        }
    } else {
        OrbifoldSignature {
            punctures: (p + 1) / 2,
            order2_points: 1,
            order_n_points: u32::from(n >= 2),
            order_value: if n >= 2 { n } else { 0 },
        }
    };
    Ok(sig)
}

/// Inverts the orbifold arithmetic: from the signature
/// `(punctures, order-2 count, higher-order count, order)` back to `(n, p)`
/// and the boundary covering degree `d = np - 1`.
///
/// The degree also satisfies the Euler-characteristic identities
/// `d = 1 - 2 χ_orb` (no higher-order point) and `d = 1 - 2 ν χ_orb`
/// (one order-ν point), checked here in exact integer arithmetic.
pub fn orbifold_to_np(
    delta1: u32,
    delta2: u32,
    delta3: u32,
    nu: u32,
) -> Result<(u32, u32, u32), Error> {
    if delta1 < 1 {
        return Err(Error::NonHyperbolicSignature(
            "need at least one puncture".into(),
        ));
    }
    if delta2 > 1 || delta3 > 1 {
        return Err(Error::NonHyperbolicSignature(
            "at most one order-two and one higher-order point".into(),
        ));
    }
    if delta3 == 1 && nu < 3 {
        return Err(Error::NonHyperbolicSignature(format!(
            "higher-order point must have order >= 3, got {nu}"
        )));
    }
    let n = if delta3 == 1 { nu } else { 1 };
    let p_signed = 2 * delta1 as i64 - 2 + delta2 as i64;
    if p_signed < 1 || (n as i64) * p_signed < 3 {
        return Err(Error::NonHyperbolicSignature(format!(
            "signature ({delta1},{delta2},{delta3}) gives np = {} < 3",
            (n as i64) * p_signed
        )));
    }
    let p = p_signed as u32;
    let d = n * p - 1;

    // chi_orb scaled by 2 nu is integral: 2 nu chi = nu(4 - 2 d1 - d2) - 2 d3 (nu - 1).
    let nu_i = if delta3 == 1 { nu as i64 } else { 1 };
    let two_nu_chi = nu_i * (4 - 2 * delta1 as i64 - delta2 as i64) - 2 * delta3 as i64 * (nu_i - 1);
    if two_nu_chi >= 0 {
        return Err(Error::NonHyperbolicSignature(format!(
            "orbifold Euler characteristic is nonnegative (2ν·χ = {two_nu_chi})"
        )));
    }
    debug_assert_eq!(d as i64, 1 - two_nu_chi, "degree identity must hold exactly");

    Ok((n, p, d))
}

/// Complex dimension of the Teichmüller space of the extended group: the
/// number of marked points of its quotient orbifold minus three.
pub fn teich_dimension(n: u32, p: u32) -> Result<i64, Error> {
    let sig = quotient_signature(n, p, true)?;
    Ok((sig.punctures + sig.order2_points + sig.order_n_points) as i64 - 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SpherePoint;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn rejects_small_polygons() {
        assert!(GroupData::build(1, 2, cfg()).is_err());
        assert!(GroupData::build(2, 1, cfg()).is_err());
        assert!(GroupData::build(1, 3, cfg()).is_ok());
    }

    #[test]
    fn hexagon_generator_pairs_sides() {
        let g = GroupData::build(1, 6, cfg()).unwrap();
        // g(1,s) carries the endpoints of C(1,s) onto those of C(1,7-s).
        for s in 1..=6u32 {
            let from = g.geodesic(1, s);
            let to = g.geodesic(1, 7 - s);
            let gen = g.generator(1, s);
            let img_u = gen.apply(SpherePoint::Finite(from.u));
            let img_v = gen.apply(SpherePoint::Finite(from.v));
            // Orientation-reversed pairing: u -> v and v -> u.
            assert!(img_u.approx_eq(&SpherePoint::Finite(to.v), 1e-10));
            assert!(img_v.approx_eq(&SpherePoint::Finite(to.u), 1e-10));
        }
    }

    #[test]
    fn square_case_generator_action() {
        // For (n, p) = (1, 4): g(1,1) fixes 1 and sends i to -i.
        let g = GroupData::build(1, 4, cfg()).unwrap();
        let gen = g.generator(1, 1);
        assert!(gen
            .apply(SpherePoint::ONE)
            .approx_eq(&SpherePoint::ONE, 1e-12));
        assert!(gen
            .apply(SpherePoint::new(0.0, 1.0))
            .approx_eq(&SpherePoint::new(0.0, -1.0), 1e-12));
    }

    #[test]
    fn inverse_pairing_identity() {
        for (n, p) in [(1u32, 4u32), (1, 5), (3, 1), (4, 3), (2, 3)] {
            let g = GroupData::build(n, p, cfg()).unwrap();
            for s in 1..=p {
                let prod = g.generator(1, s).compose(g.generator(1, p + 1 - s));
                assert!(
                    prod.dist_to_identity() < 1e-12,
                    "({n},{p}) s={s}: residual {}",
                    prod.dist_to_identity()
                );
            }
        }
    }

    #[test]
    fn odd_p_middle_generator_is_involution() {
        for (n, p) in [(1u32, 5u32), (3, 1), (1, 7), (2, 3)] {
            let g = GroupData::build(n, p, cfg()).unwrap();
            let mid = g.generator(1, (p + 1) / 2);
            assert!(mid.compose(mid).dist_to_identity() < 1e-12);
        }
    }

    #[test]
    fn rotation_conjugation_matches_direct_reflections() {
        // g(r,s) defined by conjugation agrees with the geometric
        // description: reflect in C(r,s), then in the rotated diameter.
        let cfgv = cfg();
        let g = GroupData::build(4, 3, cfgv).unwrap();
        let eps = cfgv.epsilon;
        for (r, s) in g.sides() {
            let rot = g.rotation.pow(r as i32 - 1);
            let ell_r = Geodesic::new(
                rot.apply_complex(g.ell.u),
                rot.apply_complex(g.ell.v),
                eps,
            )
            .unwrap();
            let direct = ell_r
                .reflection(eps)
                .compose_into_mobius(&g.geodesic(r, s).reflection(eps));
            assert!(
                direct.dist_up_to_sign(g.generator(r, s)) < 1e-11,
                "({r},{s})"
            );
        }
    }

    #[test]
    fn signatures_match_known_cases() {
        // Hexagon group: four-times punctured sphere.
        assert_eq!(
            quotient_signature(1, 6, false).unwrap(),
            OrbifoldSignature {
                punctures: 4,
                order2_points: 0,
                order_n_points: 0,
                order_value: 0
            }
        );
        // Pentagon group: three punctures and an order-two point.
        assert_eq!(
            quotient_signature(1, 5, false).unwrap(),
            OrbifoldSignature {
                punctures: 3,
                order2_points: 1,
                order_n_points: 0,
                order_value: 0
            }
        );
        // Extended (3,1): the modular orbifold.
        assert_eq!(
            quotient_signature(3, 1, true).unwrap(),
            OrbifoldSignature {
                punctures: 1,
                order2_points: 1,
                order_n_points: 1,
                order_value: 3
            }
        );
    }

    #[test]
    fn orbifold_round_trip() {
        for n in [1u32, 3, 4, 5] {
            for p in 1..=8u32 {
                if n * p < 3 {
                    continue;
                }
                let sig = quotient_signature(n, p, true).unwrap();
                let delta3 = sig.order_n_points;
                let nu = if delta3 == 1 { sig.order_value } else { 0 };
                let (n2, p2, d) =
                    orbifold_to_np(sig.punctures, sig.order2_points, delta3, nu).unwrap();
                assert_eq!((n2, p2), (n, p));
                assert_eq!(d, n * p - 1);
            }
        }
    }

    #[test]
    fn orbifold_examples() {
        assert_eq!(orbifold_to_np(1, 1, 1, 3).unwrap(), (3, 1, 2));
        assert_eq!(orbifold_to_np(4, 0, 0, 0).unwrap(), (1, 6, 5));
        assert_eq!(orbifold_to_np(2, 1, 1, 4).unwrap(), (4, 3, 11));
        assert!(orbifold_to_np(1, 0, 1, 3).is_err()); // np = 1
        assert!(orbifold_to_np(1, 1, 1, 2).is_err()); // order must be >= 3
    }

    #[test]
    fn teich_dimensions() {
        assert_eq!(teich_dimension(1, 6).unwrap(), 1); // p = 2q, q = 3
        assert_eq!(teich_dimension(3, 1).unwrap(), 0); // rigid Hecke case
        assert_eq!(teich_dimension(1, 5).unwrap(), 1); // p = 2q+1, q = 2
        assert_eq!(teich_dimension(1, 4).unwrap(), 0);
        assert_eq!(teich_dimension(4, 3).unwrap(), 1);
        assert_eq!(teich_dimension(3, 4).unwrap(), 1);
    }

    #[test]
    fn schema_round_trip() {
        let g = GroupData::build(3, 2, cfg()).unwrap();
        let schema = g.to_schema();
        let json = serde_json::to_string(&schema).unwrap();
        let back: GroupSchema = serde_json::from_str(&json).unwrap();
        let rebuilt = GroupData::from_schema(&back, cfg()).unwrap();
        assert_eq!(rebuilt.n, 3);
        assert_eq!(rebuilt.p, 2);
        for (r, s) in rebuilt.sides() {
            assert!(rebuilt.generator(r, s).dist_up_to_sign(g.generator(r, s)) < 1e-12);
        }
    }
}
