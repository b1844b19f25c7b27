//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities. Run with `--nocapture` to see the report:
//!
//! ```text
//! cargo test -p corrmate --test acceptance -- --nocapture
//! ```
//!
//! The tests share a lock so that the timed criteria are not distorted by
//! parallel execution.

use std::sync::Mutex;
use std::time::Instant;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use corrmate::bers::{
    build_family_a, build_family_b, build_family_c, critical_polynomial, dimension_check,
    inversion_symmetry_residual, validate_family, FamilyAParams, FamilyBParams, FamilyCParams,
};
use corrmate::circle::FactorCircleMap;
use corrmate::corr::{pingpong_check, Correspondence, DeckTransform, DomainSpec, Label};
use corrmate::group::{orbifold_to_np, quotient_signature, teich_dimension, GroupData};
use corrmate::normal::bp_normalize;
use corrmate::rational::RationalMap;
use corrmate::render::{render_classification, RasterJob};
use corrmate::sphere::SpherePoint;
use corrmate::Config;

static GATE: Mutex<()> = Mutex::new(());

fn locked() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn cfg() -> Config {
    Config::default()
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fbs(n: u32, p: u32) -> FactorCircleMap {
    FactorCircleMap::new(GroupData::build(n, p, cfg()).unwrap()).unwrap()
}

#[test]
fn acceptance_01_normal_form_recovery() {
    let _g = locked();
    let start = Instant::now();
    let map = build_family_c(&FamilyCParams {
        n: 3,
        p: 1,
        critical_data: vec![c64(1.0, 0.0)],
    })
    .unwrap();
    // The family build must hit (z + 1/2)^3 / z^2 on the nose.
    let probe = map.eval(SpherePoint::ONE).finite().unwrap();
    assert!((probe - c64(27.0 / 8.0, 0.0)).norm() < 1e-12);

    let res = bp_normalize(&map, 3, &cfg()).unwrap();
    let want = [0.0, -3.0, 0.0, 1.0];
    let mut coeff_err: f64 = 0.0;
    for (k, w) in want.iter().enumerate() {
        coeff_err = coeff_err.max((res.r1.num().coeffs[k] - c64(*w, 0.0)).norm());
    }
    let a_err = (res.a - c64(5.0, 0.0)).norm();
    let elapsed = start.elapsed();
    assert!(coeff_err < 1e-9, "normal-form coefficient error {coeff_err:.3e}");
    assert!(a_err < 1e-9, "fixed-point image error {a_err:.3e}");
    assert!(
        res.final_identity_residual < 1e-8,
        "identity residual {:.3e}",
        res.final_identity_residual
    );
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 01 PASS normal-form recovery: coefficients within {coeff_err:.2e} of u^3-3u, a within {a_err:.2e} of 5, identity residual {:.2e}, {:?}",
        res.final_identity_residual, elapsed
    );
}

#[test]
fn acceptance_02_side_pairing_algebra() {
    let _g = locked();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0u32;
    for n in 1..=5u32 {
        for p in 1..=8u32 {
            if n * p < 3 {
                continue;
            }
            let g = GroupData::build(n, p, cfg()).unwrap();
            for s in 1..=p {
                let prod = g.generator(1, s).compose(g.generator(1, p + 1 - s));
                worst = worst.max(prod.dist_to_identity());
            }
            for (r, s) in g.sides() {
                let conj = g
                    .rotation
                    .pow(r as i32 - 1)
                    .compose(g.generator(1, s))
                    .compose(&g.rotation.pow(-(r as i32 - 1)));
                worst = worst.max(conj.dist_up_to_sign(g.generator(r, s)));
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-12, "matrix residual {worst:.3e}");
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 02 PASS side-pairing algebra: {cases} groups, matrix residual {worst:.2e}, {elapsed:?}"
    );
}

const CIRCLE_GRID: [(u32, u32); 7] = [(1, 4), (1, 5), (1, 6), (3, 1), (4, 1), (4, 3), (2, 3)];

#[test]
fn acceptance_03_covering_degree() {
    let _g = locked();
    let start = Instant::now();
    for (n, p) in CIRCLE_GRID {
        let f = fbs(n, p);
        let d = f.lift().winding_degree();
        assert_eq!(d, n * p - 1, "({n},{p}): winding degree {d}");
    }
    // The headline case: degree 11 for (4,3).
    assert_eq!(fbs(4, 3).lift().winding_degree(), 11);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 03 PASS covering degree: lift degree equals np-1 on {:?} (11 for (4,3)), {elapsed:?}",
        CIRCLE_GRID
    );
}

#[test]
fn acceptance_04_factor_map_critical_audit() {
    let _g = locked();
    for (n, p) in CIRCLE_GRID {
        let f = fbs(n, p);
        let crits = f.critical_points().unwrap();
        if n == 1 {
            assert!(crits.is_empty(), "({n},{p}): expected no critical points");
        } else {
            assert_eq!(crits.len(), p as usize, "({n},{p}): count");
            for c in &crits {
                assert_eq!(c.multiplicity, n - 1, "({n},{p}): multiplicity");
                assert!(
                    c.value.approx_eq(&SpherePoint::ZERO, 1e-9),
                    "({n},{p}): common critical value {}",
                    c.value
                );
            }
        }
    }
    println!(
        "ACCEPTANCE 04 PASS factor-map critical audit: p points of multiplicity n-1 with value 0 (none for n = 1) on {:?}",
        CIRCLE_GRID
    );
}

#[test]
fn acceptance_05_conjugacy_defect() {
    let _g = locked();
    let start = Instant::now();
    let mut reported = Vec::new();
    for (n, p) in [(1u32, 4u32), (3, 1)] {
        let f = fbs(n, p);
        let table = f.conjugacy_table(4096, 40).unwrap();
        let worst = table.iter().map(|r| r.2).fold(0.0f64, f64::max);
        assert!(worst < 1e-6, "({n},{p}): max defect {worst:.3e}");
        // Cyclic monotonicity: h is increasing over one period anchored at
        // h(0) = 0, which forces preservation of cyclic order.
        for w in table.windows(2) {
            assert!(
                w[0].1 < w[1].1,
                "({n},{p}): monotonicity fails near theta = {}",
                w[0].0
            );
        }
        reported.push(format!("({n},{p}): {worst:.2e}"));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "ACCEPTANCE 05 PASS conjugacy defect at 4096 angles, depth 40: {}, monotone, {elapsed:?}",
        reported.join(", ")
    );
}

#[test]
fn acceptance_06_family_structure() {
    let _g = locked();
    let mut checked = Vec::new();
    let mut run = |map: RationalMap, n: u32, p: u32, tag: &str| {
        let audit = validate_family(&map, n, p).unwrap();
        assert_eq!(audit.boundary.len(), p as usize, "{tag}: boundary count");
        let q = critical_polynomial(&map, n, p).unwrap();
        let sym = inversion_symmetry_residual(&q);
        assert!(sym < 1e-10, "{tag}: symmetry residual {sym:.3e}");
        let q1 = q.eval(c64(1.0, 0.0)).norm();
        assert!(q1 < 1e-10, "{tag}: Q(1) = {q1:.3e}");
        if p % 2 == 0 {
            let qm1 = q.eval(c64(-1.0, 0.0)).norm();
            assert!(qm1 < 1e-10, "{tag}: Q(-1) = {qm1:.3e}");
        }
        // Pole of exact order np-1 at the origin: denominator is the pure
        // monomial.
        assert_eq!(map.den().degree(), (n * p) as usize - 1, "{tag}: pole order");
        for coeff in &map.den().coeffs[..map.den().degree()] {
            assert!(coeff.norm() == 0.0, "{tag}: impure denominator");
        }
        dimension_check(n, p).unwrap();
        assert_eq!(
            corrmate::bers::free_parameter_count(n, p).unwrap() as i64,
            teich_dimension(n, p).unwrap(),
            "{tag}: free parameters"
        );
        checked.push(tag.to_string());
    };

    run(
        build_family_a(&FamilyAParams { q: 2, free: vec![] }).unwrap(),
        1,
        4,
        "a(q=2)",
    );
    run(
        build_family_a(&FamilyAParams {
            q: 3,
            free: vec![c64(0.11, 0.07)],
        })
        .unwrap(),
        1,
        6,
        "a(q=3)",
    );
    run(
        build_family_a(&FamilyAParams {
            q: 4,
            free: vec![c64(0.1, -0.05), c64(-0.04, 0.09)],
        })
        .unwrap(),
        1,
        8,
        "a(q=4)",
    );
    run(
        build_family_b(&FamilyBParams {
            q: 2,
            free: vec![c64(0.12, 0.04)],
        })
        .unwrap(),
        1,
        5,
        "b(q=2)",
    );
    run(
        build_family_b(&FamilyBParams {
            q: 3,
            free: vec![c64(0.06, -0.09), c64(0.02, 0.05)],
        })
        .unwrap(),
        1,
        7,
        "b(q=3)",
    );
    run(
        build_family_c(&FamilyCParams {
            n: 3,
            p: 1,
            critical_data: vec![c64(1.0, 0.0)],
        })
        .unwrap(),
        3,
        1,
        "c(3,1)",
    );
    run(
        build_family_c(&FamilyCParams {
            n: 3,
            p: 2,
            critical_data: vec![c64(1.0, 0.0), c64(-1.0, 0.0)],
        })
        .unwrap(),
        3,
        2,
        "c(3,2)",
    );
    run(
        build_family_c(&FamilyCParams {
            n: 4,
            p: 1,
            critical_data: vec![c64(1.0, 0.0)],
        })
        .unwrap(),
        4,
        1,
        "c(4,1)",
    );
    println!(
        "ACCEPTANCE 06 PASS family structure: {} (Q symmetry < 1e-10, Q(1) = 0, exact pole order, parameter counts match dimensions)",
        checked.join(", ")
    );
}

#[test]
fn acceptance_07_branch_contracts() {
    let _g = locked();
    let maps: Vec<(String, RationalMap)> = vec![
        (
            "a(q=2)".into(),
            build_family_a(&FamilyAParams { q: 2, free: vec![] }).unwrap(),
        ),
        (
            "b(q=2)".into(),
            build_family_b(&FamilyBParams {
                q: 2,
                free: vec![c64(0.1, 0.02)],
            })
            .unwrap(),
        ),
        (
            "c(3,1)".into(),
            build_family_c(&FamilyCParams {
                n: 3,
                p: 1,
                critical_data: vec![c64(1.0, 0.0)],
            })
            .unwrap(),
        ),
        (
            "c(3,2)".into(),
            build_family_c(&FamilyCParams {
                n: 3,
                p: 2,
                critical_data: vec![c64(1.0, 0.0), c64(-1.0, 0.0)],
            })
            .unwrap(),
        ),
    ];
    for (tag, map) in maps {
        let corr = Correspondence::new(map, cfg()).unwrap();
        let d = corr.bidegree();
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
        for _ in 0..100 {
            let z = SpherePoint::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let fwd = corr.forward(z).unwrap();
            assert_eq!(fwd.len(), d, "{tag}: bidegree at {z}");
            for w in &fwd {
                let back = corr.backward(*w).unwrap();
                assert!(
                    back.iter().any(|b| b.chordal_dist(&z) < 1e-7),
                    "{tag}: round trip at {z} -> {w}"
                );
            }
            let lhs = corr.backward(z).unwrap();
            let rhs: Vec<SpherePoint> =
                corr.forward(z.eta()).unwrap().iter().map(|x| x.eta()).collect();
            for a in &lhs {
                assert!(
                    rhs.iter().any(|b| b.chordal_dist(a) < 1e-8),
                    "{tag}: duality at {z}"
                );
            }
        }
    }
    println!(
        "ACCEPTANCE 07 PASS branch contracts: bidegree, round trip (1e-7) and involution duality (1e-8) on 100 points for a(q=2), b(q=2), c(3,1), c(3,2)"
    );
}

#[test]
fn acceptance_08_deck_free_product() {
    let _g = locked();
    let map = build_family_c(&FamilyCParams {
        n: 3,
        p: 1,
        critical_data: vec![c64(1.0, 0.0)],
    })
    .unwrap();
    let corr = Correspondence::new(map, cfg()).unwrap();
    let deck = DeckTransform::new(&corr, 3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xDECC);
    // tau^3 = id within 1e-6 on 100 trust-region points.
    let mut tau3_worst: f64 = 0.0;
    for _ in 0..100 {
        let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let rad: f64 = rng.gen_range(0.004..0.045);
        let z = SpherePoint::Finite(deck.x0 + rad * Complex64::cis(ang));
        let mut t = z;
        for _ in 0..3 {
            t = deck.apply(t).unwrap();
        }
        tau3_worst = tau3_worst.max(t.chordal_dist(&z));
    }
    assert!(tau3_worst < 1e-6, "tau^3 residual {tau3_worst:.3e}");

    // Relations at 1e-8 and word displacements > 1e-4 for reduced words of
    // letter length at most 6.
    let samples: Vec<Complex64> = (0..100)
        .map(|_| {
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rad: f64 = rng.gen_range(0.004..0.045);
            deck.x0 + rad * Complex64::cis(ang)
        })
        .collect();
    let report = pingpong_check(&deck, &samples, 6, 1e-4).unwrap();
    assert!(
        report.involution_residual < 1e-8,
        "involution residual {:.3e}",
        report.involution_residual
    );
    assert!(
        report.deck_order_residual < 1e-8,
        "deck order residual {:.3e}",
        report.deck_order_residual
    );
    assert!(
        report.violations.is_empty(),
        "displacement violations: {:?}",
        report.violations
    );
    println!(
        "ACCEPTANCE 08 PASS deck/free product for (3,1): tau^3 residual {tau3_worst:.2e} on 100 points, relations at {:.2e}/{:.2e}, {} reduced words all displace > 1e-4 (min {:.2e})",
        report.involution_residual,
        report.deck_order_residual,
        report.words_checked,
        report.min_word_displacement
    );
}

#[test]
fn acceptance_09_partition_symmetry() {
    let _g = locked();
    let map = build_family_a(&FamilyAParams { q: 2, free: vec![] }).unwrap();
    let corr = Correspondence::new(map, cfg()).unwrap();
    let dom = DomainSpec::unit_circle();
    let job = RasterJob {
        x0: -2.0,
        x1: 2.0,
        y0: -2.0,
        y1: 2.0,
        width: 512,
        height: 512,
        max_iter: 48,
        palette: 0,
        reciprocal_chart: false,
    };
    let (_, grid) = render_classification(&corr, &dom, &job).unwrap();

    // Pixel-level involution symmetry: the label at z must match the label
    // at 1/z with the two polynomial halves swapped.
    let swap = |l: Label| match l {
        Label::K1 => Label::K2,
        Label::K2 => Label::K1,
        other => other,
    };
    let mut compared = 0usize;
    let mut agree = 0usize;
    for j in 0..job.height {
        for i in 0..job.width {
            let z = job.pixel_center(i, j);
            if z.norm() < 1e-3 {
                continue;
            }
            let y = z.inv();
            let Some((iy, jy)) = job.pixel_of(y) else {
                continue;
            };
            let a = grid.get(i, j);
            let b = grid.get(iy, jy);
            if a.label == Label::Undecided || b.label == Label::Undecided {
                continue;
            }
            compared += 1;
            if swap(a.label) == b.label {
                agree += 1;
            }
        }
    }
    let rate = agree as f64 / compared as f64;
    assert!(
        rate >= 0.98,
        "raster symmetry rate {rate:.4} over {compared} pixels"
    );

    // Grand-orbit cloud symmetry at the same pixel resolution.
    let cloud = corr.grand_orbit_cloud(20_000, cfg().seed).unwrap();
    let pts: Vec<Complex64> = cloud.iter().filter_map(|z| z.finite()).collect();
    let pixel = (job.x1 - job.x0) / job.width as f64;
    // Hash the cloud to a grid for neighborhood lookup.
    use std::collections::HashSet;
    let key = |z: Complex64| -> (i64, i64) {
        (
            (z.re / pixel).floor() as i64,
            (z.im / pixel).floor() as i64,
        )
    };
    let occupied: HashSet<(i64, i64)> = pts.iter().map(|z| key(*z)).collect();
    let mut sym = 0usize;
    for z in &pts {
        let e = z.inv();
        let (ki, kj) = key(e);
        let mut found = false;
        'probe: for di in -1..=1 {
            for dj in -1..=1 {
                if occupied.contains(&(ki + di, kj + dj)) {
                    found = true;
                    break 'probe;
                }
            }
        }
        if found {
            sym += 1;
        }
    }
    let cloud_rate = sym as f64 / pts.len() as f64;
    assert!(
        cloud_rate >= 0.98,
        "cloud symmetry rate {cloud_rate:.4} over {} points",
        pts.len()
    );
    println!(
        "ACCEPTANCE 09 PASS partition symmetry: raster inversion agreement {:.2}% of {compared} decided pixels, cloud symmetry {:.2}% of {} points",
        100.0 * rate,
        100.0 * cloud_rate,
        pts.len()
    );
}

#[test]
fn acceptance_10_orbifold_arithmetic() {
    let _g = locked();
    let mut cases = 0u32;
    for delta1 in 1..=6u32 {
        for delta2 in 0..=1u32 {
            for delta3 in 0..=1u32 {
                let nus: Vec<u32> = if delta3 == 1 { (3..=6).collect() } else { vec![0] };
                for nu in nus {
                    match orbifold_to_np(delta1, delta2, delta3, nu) {
                        Ok((n, p, d)) => {
                            assert_eq!(d, n * p - 1);
                            // Exact integer Euler-characteristic identity:
                            // 2 nu chi = nu (4 - 2 d1 - d2) - 2 d3 (nu - 1).
                            let nu_i = if delta3 == 1 { nu as i64 } else { 1 };
                            let two_nu_chi = nu_i * (4 - 2 * delta1 as i64 - delta2 as i64)
                                - 2 * delta3 as i64 * (nu_i - 1);
                            assert_eq!(d as i64, 1 - two_nu_chi, "degree identity");
                            // Consistency with the forward signature map.
                            let sig = quotient_signature(n, p, true).unwrap();
                            assert_eq!(sig.punctures, delta1);
                            assert_eq!(sig.order2_points, delta2);
                            assert_eq!(sig.order_n_points, delta3);
                            cases += 1;
                        }
                        Err(_) => {
                            // Only non-hyperbolic or too-small signatures may
                            // be rejected.
                            let p = 2 * delta1 as i64 - 2 + delta2 as i64;
                            let n = if delta3 == 1 { nu as i64 } else { 1 };
                            assert!(n * p < 3, "({delta1},{delta2},{delta3},{nu}) wrongly rejected");
                        }
                    }
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 10 PASS orbifold arithmetic: degree identities d = np-1 = 1-2(nu)chi exact on {cases} hyperbolic signatures"
    );
}
