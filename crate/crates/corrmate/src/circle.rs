//! The Bowen-Series map of Γ(n,p) and its continuous degree-(np-1) factor on
//! the circle, with the factor map's Markov partition, expansivity estimate,
//! and the topological conjugacy to `theta -> d theta`.
//!
//! Angles are measured in turns (fractions of a full revolution) throughout:
//! the point `e^{2 pi i t}` is written as the angle `t` in `[0, 1)`.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::Error;
use crate::group::GroupData;
use crate::sphere::{ArcSide, SpherePoint};

/// The piecewise-Möbius boundary map of a side-paired ideal polygon: it acts
/// as `g(r,s)` on the closed half-plane cut off by the geodesic `C(r,s)`.
#[derive(Debug, Clone)]
pub struct BowenSeriesMap {
    pub group: GroupData,
}

impl BowenSeriesMap {
    pub fn new(group: GroupData) -> Self {
        BowenSeriesMap { group }
    }

    fn np(&self) -> u32 {
        self.group.n * self.group.p
    }

    /// Piece lookup for a circle angle in turns. Arcs are closed on the
    /// endpoint where the arc begins in the counter-clockwise direction, so
    /// the map is the one-sided limit from above at every breakpoint.
    pub fn piece_of_angle(&self, t: f64) -> (u32, u32) {
        let np = self.np() as f64;
        let t = t.rem_euclid(1.0);
        let k = ((t * np).floor() as u32).min(self.np() - 1);
        (k / self.group.p + 1, k % self.group.p + 1)
    }

    /// Piece lookup for a point of the closed disk outside the open
    /// fundamental polygon.
    pub fn piece_of(&self, z: Complex64) -> Result<(u32, u32), Error> {
        let eps = self.group.config.epsilon;
        if z.norm() > 1.0 + eps {
            return Err(Error::OutsideDisk(format!("{z}")));
        }
        if z.norm() >= 1.0 - eps {
            return Ok(self.piece_of_angle(z.arg() / TAU));
        }
        let mut hit = None;
        let mut count = 0;
        for (r, s) in self.group.sides() {
            if self
                .group
                .geodesic(r, s)
                .halfplane_contains(ArcSide::CcwFromU, SpherePoint::Finite(z), eps)
            {
                count += 1;
                if hit.is_none() {
                    hit = Some((r, s));
                }
            }
        }
        match (hit, count) {
            (Some(rs), 1) => Ok(rs),
            (Some(_), _) => Ok(self.piece_of_angle(z.arg() / TAU)),
            (None, _) => Err(Error::InsideFundamentalPolygon(format!("{z}"))),
        }
    }

    /// Whether `z` lies strictly inside the fundamental polygon.
    pub fn inside_polygon(&self, z: Complex64) -> bool {
        z.norm() < 1.0 && self.piece_of(z).is_err()
    }

    /// Applies the map: `g(r,s)` on the piece containing `z`.
    pub fn eval(&self, z: SpherePoint) -> Result<SpherePoint, Error> {
        let z = z.expect_finite()?;
        let (r, s) = self.piece_of(z)?;
        Ok(self.group.generator(r, s).apply(SpherePoint::Finite(z)))
    }
}

/// The factor of the Bowen-Series map under the order-n rotation symmetry,
/// transported to the disk by `w -> w^n`; restricted to the circle it is a
/// continuous orientation-preserving covering of degree `np - 1`.
#[derive(Debug, Clone)]
pub struct FactorCircleMap {
    pub base: BowenSeriesMap,
    lift: CircleLift,
    natural_bp: Vec<f64>,
}

/// One critical point of the factor map.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub point: SpherePoint,
    pub multiplicity: u32,
    pub value: SpherePoint,
}

/// Markov partition data for the circle restriction.
#[derive(Debug, Clone)]
pub struct MarkovPartition {
    /// Breakpoints of the natural piecewise-analytic partition, in turns.
    pub base_breakpoints: Vec<f64>,
    /// Breakpoints after one pullback refinement, in turns.
    pub breakpoints: Vec<f64>,
    /// Largest distance from a breakpoint image to the breakpoint set.
    pub endpoint_defect: f64,
}

/// Sampled expansivity estimate for the circle restriction.
#[derive(Debug, Clone, Copy)]
pub struct ExpansivityReport {
    /// Minimum sampled absolute derivative over all partition pieces.
    pub lambda: f64,
    /// Interior sample count per piece; the estimate is not a certified
    /// bound.
    pub grid_per_piece: usize,
}

impl FactorCircleMap {
    pub fn new(group: GroupData) -> Result<Self, Error> {
        let base = BowenSeriesMap::new(group);
        let lift = CircleLift::build(&base)?;
        let natural_bp = natural_breakpoints(&base)?;
        Ok(FactorCircleMap {
            base,
            lift,
            natural_bp,
        })
    }

    pub fn group(&self) -> &GroupData {
        &self.base.group
    }

    /// Covering degree of the circle restriction, `np - 1`.
    pub fn degree(&self) -> u32 {
        self.base.np() - 1
    }

    pub fn lift(&self) -> &CircleLift {
        &self.lift
    }

    /// Image angle (in turns) of a circle point given by its angle. This is
    /// the fast path used by the lift and the conjugacy.
    pub fn eval_angle(&self, t: f64) -> f64 {
        let g = &self.base.group;
        let n = g.n as f64;
        let wt = t.rem_euclid(1.0) / n;
        let np = self.base.np() as f64;
        let s = ((wt * np).floor() as u32).min(g.p - 1) + 1;
        let w = Complex64::cis(TAU * wt);
        let out = g.generator(1, s).apply_complex(w);
        (n * out.arg() / TAU).rem_euclid(1.0)
    }

    /// Absolute circle derivative at angle `t`: incident Möbius piece
    /// derivative modulus at the principal n-th root.
    pub fn circle_derivative_abs(&self, t: f64) -> f64 {
        let g = &self.base.group;
        let n = g.n as f64;
        let wt = t.rem_euclid(1.0) / n;
        let np = self.base.np() as f64;
        let s = ((wt * np).floor() as u32).min(g.p - 1) + 1;
        let w = Complex64::cis(TAU * wt);
        g.generator(1, s).derivative(w).norm()
    }

    /// Evaluates the factor map at a point of the closed disk: take the
    /// principal n-th root (argument in `[0, 2 pi / n)`), apply the base
    /// map, and raise to the n-th power. Any n-th root gives the same value.
    pub fn eval(&self, z: SpherePoint) -> Result<SpherePoint, Error> {
        let z = z.expect_finite()?;
        let eps = self.base.group.config.epsilon;
        if z.norm() > 1.0 + eps {
            return Err(Error::OutsideDisk(format!("{z}")));
        }
        let n = self.base.group.n;
        let w = principal_root(z, n);
        let out = self.base.eval(SpherePoint::Finite(w))?;
        let out = out.expect_finite()?;
        Ok(SpherePoint::Finite(power(out, n)))
    }

    /// The p critical points (for n >= 2): the n-th powers of the points
    /// `g(1,s)^{-1}(0)`, each of multiplicity `n - 1`, all mapped to the
    /// critical value 0. Empty for n = 1.
    pub fn critical_points(&self) -> Result<Vec<CriticalPoint>, Error> {
        let g = &self.base.group;
        if g.n < 2 {
            return Ok(vec![]);
        }
        let mut out = Vec::with_capacity(g.p as usize);
        for s in 1..=g.p {
            let w = g
                .generator(1, s)
                .inverse()
                .apply(SpherePoint::ZERO)
                .expect_finite()?;
            let point = SpherePoint::Finite(power(w, g.n));
            let value = self.eval(point)?;
            out.push(CriticalPoint {
                point,
                multiplicity: g.n - 1,
                value,
            });
        }
        Ok(out)
    }

    /// Breakpoint angles (turns) of the natural piecewise-analytic
    /// partition: the first-sector arc endpoints together with the
    /// generator preimages of the n-th roots of unity, pushed through the
    /// quotient power map.
    pub fn natural_breakpoint_angles(&self) -> &[f64] {
        &self.natural_bp
    }

    /// Builds the Markov partition: natural breakpoints refined by one
    /// pullback, then verified (every breakpoint image must itself land on a
    /// breakpoint).
    pub fn markov_partition(&self) -> Result<MarkovPartition, Error> {
        let base = self.natural_bp.clone();
        let d = self.degree() as usize;
        let mut refined = base.clone();
        for &b in &base {
            for k in 0..d {
                refined.push(self.invert_lift(k as f64 + b));
            }
        }
        for b in refined.iter_mut() {
            *b = b.rem_euclid(1.0);
        }
        refined.sort_by(|a, b| a.partial_cmp(b).unwrap());
        refined.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
        if let Some(&last) = refined.last() {
            if (1.0 - last).abs() < 1e-10 && !refined.is_empty() {
                refined.pop();
            }
        }

        let dist_to_set = |x: f64| -> f64 {
            refined
                .iter()
                .map(|b| circle_dist_turns(x, *b))
                .fold(f64::INFINITY, f64::min)
        };
        let mut defect: f64 = 0.0;
        for &b in &refined {
            let img = self.eval_angle(b);
            defect = defect.max(dist_to_set(img));
        }
        if defect > 1e-8 {
            return Err(Error::MarkovRefinement(format!(
                "endpoint defect {defect:.3e} after one pullback"
            )));
        }
        Ok(MarkovPartition {
            base_breakpoints: base,
            breakpoints: refined,
            endpoint_defect: defect,
        })
    }

    /// Sampled minimum of the absolute circle derivative over the partition
    /// pieces (interior grid of `grid_per_piece` points each).
    pub fn expansivity_report(&self, grid_per_piece: usize) -> Result<ExpansivityReport, Error> {
        let base = &self.natural_bp;
        let mut lambda = f64::INFINITY;
        let m = base.len();
        for i in 0..m {
            let lo = base[i];
            let hi = if i + 1 < m { base[i + 1] } else { base[0] + 1.0 };
            for k in 0..grid_per_piece {
                let t = lo + (hi - lo) * (k as f64 + 0.5) / grid_per_piece as f64;
                lambda = lambda.min(self.circle_derivative_abs(t));
            }
        }
        Ok(ExpansivityReport {
            lambda,
            grid_per_piece,
        })
    }

    /// Angles (turns) of the `d` preimages of the fixed point 1, in
    /// increasing order starting at 0. These delimit the branch arcs that
    /// correspond in cyclic order to the arcs `[j/d, (j+1)/d)`.
    pub fn branch_points(&self) -> Vec<f64> {
        (0..self.degree())
            .map(|j| if j == 0 { 0.0 } else { self.invert_lift(j as f64) })
            .collect()
    }

    /// The conjugacy `h` between `theta -> d theta` and this map, evaluated
    /// at `theta` (turns) by `depth` nested-interval refinements; returns
    /// the angle of `h(theta)` in turns.
    ///
    /// The itinerary of `theta` is computed in exact rational arithmetic, so
    /// depth is limited only by the expansion of the map, not by floating
    /// point.
    pub fn conjugacy_angle(&self, theta: f64, depth: usize) -> Result<f64, Error> {
        let report = self.expansivity_report(64)?;
        if report.lambda <= 1.0 {
            return Err(Error::NotExpansive(report.lambda));
        }
        Ok(self.conjugacy_angle_unchecked(theta, depth))
    }

    /// As [`conjugacy_angle`](Self::conjugacy_angle) without the expansivity
    /// precheck; used internally for batch evaluation.
    ///
    /// The angle is reconstructed as an exact rational, so its itinerary
    /// under `theta -> d theta` never degrades and eventual periodicity is
    /// detected. Periodic tails are seeded with the exact periodic point of
    /// the branch word (found by bisection); this keeps the result at full
    /// precision even on parabolic cycles, where plain nested intervals
    /// contract only polynomially.
    pub fn conjugacy_angle_unchecked(&self, theta: f64, depth: usize) -> f64 {
        let (a, b) = rational_reconstruct(theta.rem_euclid(1.0));
        self.conjugacy_angle_rational(a, b, depth)
    }

    /// The conjugacy at the exact rational angle `num/den` (turns).
    pub fn conjugacy_angle_rational(&self, num: u128, den: u128, depth: usize) -> f64 {
        let d = self.degree() as u128;
        let q = den.max(1);
        let mut m = num % q;
        let mut symbols: Vec<usize> = Vec::with_capacity(depth + 1);
        let mut seen: Vec<u128> = Vec::with_capacity(depth + 1);
        let mut cycle: Option<(usize, usize)> = None; // (start, period)
        for k in 0..=depth {
            if let Some(pos) = seen.iter().position(|&v| v == m) {
                cycle = Some((pos, k - pos));
                break;
            }
            seen.push(m);
            let scaled = m * d;
            symbols.push((scaled / q) as usize);
            m = scaled % q;
        }

        let t = self.branch_points();
        let arc = |j: usize| -> (f64, f64) {
            let lo = t[j];
            let hi = if j + 1 < t.len() { t[j + 1] } else { 1.0 };
            (lo, hi)
        };

        match cycle {
            Some((start, period)) => {
                // h(theta_start) is the unique fixed point of the pullback
                // along the cycle word.
                let word = &symbols[start..start + period];
                let pullback = |x: f64| -> f64 {
                    let mut y = x;
                    for &j in word.iter().rev() {
                        y = self.invert_lift(j as f64 + y);
                    }
                    y
                };
                let (alo, ahi) = arc(word[0]);
                let mut lo = alo;
                let mut hi = ahi;
                for _ in 0..64 {
                    let mid = 0.5 * (lo + hi);
                    if pullback(mid) > mid {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let mut x = 0.5 * (lo + hi);
                // Parabolic cycle points are cusps of the piecewise-analytic
                // structure, i.e. natural breakpoints known in closed form;
                // bisection stalls at them, so snap when consistent.
                let mut candidates: Vec<f64> = self.natural_bp.clone();
                candidates.push(1.0);
                for &b in &candidates {
                    if (x - b).abs() < 1e-6 && circle_dist_turns(pullback(b.rem_euclid(1.0)), b.rem_euclid(1.0)) < 1e-10 {
                        x = b.rem_euclid(1.0);
                        break;
                    }
                }
                for k in (0..start).rev() {
                    x = self.invert_lift(symbols[k] as f64 + x);
                }
                x
            }
            None => {
                // Aperiodic within the budget: classic nested intervals.
                let (mut lo, mut hi) = arc(symbols[depth]);
                for k in (0..depth).rev() {
                    let j = symbols[k] as f64;
                    lo = self.invert_lift(j + lo);
                    hi = self.invert_lift(j + hi);
                }
                0.5 * (lo + hi)
            }
        }
    }

    /// The conjugacy as a circle point.
    pub fn conjugacy(&self, theta: f64, depth: usize) -> Result<SpherePoint, Error> {
        let a = self.conjugacy_angle(theta, depth)?;
        Ok(SpherePoint::Finite(Complex64::cis(TAU * a)))
    }

    /// Batch conjugacy table over `samples` uniform angles: rows of
    /// `(theta, h(theta) angle, defect)` where the defect is the chordal
    /// distance between the image of `h(theta)` under this map and
    /// `h(d theta)`. The exact index arithmetic keeps the two sides of the
    /// semiconjugacy sampled on the same grid.
    pub fn conjugacy_table(
        &self,
        samples: usize,
        depth: usize,
    ) -> Result<Vec<(f64, f64, f64)>, Error> {
        let report = self.expansivity_report(64)?;
        if report.lambda <= 1.0 {
            return Err(Error::NotExpansive(report.lambda));
        }
        let d = self.degree() as usize;
        let h: Vec<f64> = (0..samples)
            .map(|j| self.conjugacy_angle_rational(j as u128, samples as u128, depth))
            .collect();
        let mut out = Vec::with_capacity(samples);
        for j in 0..samples {
            let theta = j as f64 / samples as f64;
            let img = (j * d) % samples;
            let lhs = self.psi(h[j]).rem_euclid(1.0);
            let defect = chordal_dist_turns(lhs, h[img]);
            out.push((theta, h[j], defect));
        }
        Ok(out)
    }
}


/// Breakpoint angles (turns) of the natural piecewise-analytic partition of
/// the factor map: the first-sector arc endpoints together with the
/// generator preimages of the n-th roots of unity, pushed to the quotient
/// coordinate by `w -> w^n`.
fn natural_breakpoints(base: &BowenSeriesMap) -> Result<Vec<f64>, Error> {
    let g = &base.group;
    let n = g.n;
    let p = g.p;
    let mut pts: Vec<f64> = (0..p).map(|s| s as f64 / p as f64).collect();
    if n >= 2 {
        for s in 1..=p {
            let gen_inv = g.generator(1, s).inverse();
            for r in 0..n {
                let root = Complex64::cis(TAU * r as f64 / n as f64);
                let w = gen_inv.apply(SpherePoint::Finite(root)).expect_finite()?;
                if (w.norm() - 1.0).abs() > 1e-8 {
                    continue;
                }
                let wt = (w.arg() / TAU).rem_euclid(1.0);
                // Keep only preimages interior to the arc J(1,s).
                let lo = (s - 1) as f64 / (n * p) as f64;
                let hi = s as f64 / (n * p) as f64;
                if wt > lo + 1e-12 && wt < hi - 1e-12 {
                    pts.push((wt * n as f64).rem_euclid(1.0));
                }
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(pts)
}

/// Reconstructs a small-denominator rational close to `x` in `[0, 1)` by
/// continued fractions; falls back to the dyadic value when none fits.
fn rational_reconstruct(x: f64) -> (u128, u128) {
    const QMAX: u128 = 1 << 32;
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a < 0.0 || a >= QMAX as f64 {
            break;
        }
        let ai = a as u128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > QMAX {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
            return (p1 % q1, q1);
        }
        let frac = v - a;
        if frac <= f64::EPSILON {
            break;
        }
        v = 1.0 / frac;
    }
    const Q: u128 = 1 << 53;
    (((x * Q as f64).round() as u128).min(Q - 1), Q)
}

/// Principal n-th root: argument in `[0, 2 pi / n)`.
fn principal_root(z: Complex64, n: u32) -> Complex64 {
    if n == 1 {
        return z;
    }
    let r = z.norm().powf(1.0 / n as f64);
    let t = (z.arg() / TAU).rem_euclid(1.0) / n as f64;
    r * Complex64::cis(TAU * t)
}

fn power(z: Complex64, n: u32) -> Complex64 {
    z.powu(n)
}

/// Circular distance in turns.
pub fn circle_dist_turns(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Chordal distance between the circle points at angles `a` and `b` (turns).
pub fn chordal_dist_turns(a: f64, b: f64) -> f64 {
    2.0 * (std::f64::consts::PI * (a - b)).sin().abs()
}

/// A sampled monotone lift of the circle restriction: a continuous
/// increasing `psi: [0, 1] -> [0, d]` with `psi(0) = 0` and
/// `e^{2 pi i psi(t)} = f(e^{2 pi i t})`, invertible by bisection.
#[derive(Debug, Clone)]
pub struct CircleLift {
    grid_psi: Vec<f64>,
    degree: u32,
    samples: usize,
}

impl CircleLift {
    fn build(base: &BowenSeriesMap) -> Result<Self, Error> {
        let np = base.np();
        let samples = (8192usize).max(1024 * np as usize);
        // Temporary evaluator equivalent to FactorCircleMap::eval_angle.
        let g = &base.group;
        let n = g.n as f64;
        let eval_angle = |t: f64| -> f64 {
            let wt = t.rem_euclid(1.0) / n;
            let s = ((wt * np as f64).floor() as u32).min(g.p - 1) + 1;
            let w = Complex64::cis(TAU * wt);
            let out = g.generator(1, s).apply_complex(w);
            (n * out.arg() / TAU).rem_euclid(1.0)
        };
        let mut grid_psi = Vec::with_capacity(samples + 1);
        let phi0 = eval_angle(0.0);
        // The fixed point at angle zero anchors the lift.
        let mut acc = if phi0 < 0.5 { phi0 } else { phi0 - 1.0 };
        grid_psi.push(acc);
        let mut prev = phi0;
        for j in 1..=samples {
            let t = j as f64 / samples as f64;
            let phi = if j == samples { phi0 } else { eval_angle(t) };
            let mut delta = (phi - prev).rem_euclid(1.0);
            if delta > 0.9 {
                delta -= 1.0;
            }
            acc += delta;
            grid_psi.push(acc);
            prev = phi;
        }
        let winding = grid_psi[samples] - grid_psi[0];
        let degree = winding.round();
        if (winding - degree).abs() > 1e-6 || degree < 2.0 {
            return Err(Error::MarkovRefinement(format!(
                "monotone lift winding {winding} is not an integer covering degree"
            )));
        }
        Ok(CircleLift {
            grid_psi,
            degree: degree as u32,
            samples,
        })
    }

    /// The covering degree read off the lift: `psi(1) - psi(0)`.
    pub fn winding_degree(&self) -> u32 {
        self.degree
    }

    /// Maximum deviation of `psi(x + 1) - psi(x) - degree` over the sample
    /// grid; zero by construction up to accumulated rounding.
    pub fn periodicity_defect(&self) -> f64 {
        // psi is stored on [0, 1]; the lift extends by psi(x+1) = psi(x) + d,
        // so the defect reduces to the endpoint consistency.
        (self.grid_psi[self.samples] - self.grid_psi[0] - self.degree as f64).abs()
    }

    fn grid_value(&self, i: usize) -> f64 {
        self.grid_psi[i]
    }

    /// Continuous lift value at `t` in turns (any real; extended by the
    /// covering degree).
    pub fn psi_with<F: Fn(f64) -> f64>(&self, eval_angle: &F, t: f64) -> f64 {
        let base = t.floor();
        let frac = t - base;
        let x = frac * self.samples as f64;
        let i = (x.floor() as usize).min(self.samples - 1);
        let phi = eval_angle(frac);
        let lo = self.grid_value(i);
        let hi = self.grid_value(i + 1);
        let mid = 0.5 * (lo + hi);
        let k = (mid - phi).round();
        phi + k + base * self.degree as f64
    }

    /// Inverse of the lift by grid-bracketed bisection: the unique `t` with
    /// `psi(t) = y`, reduced into `[0, 1)` up to full turns.
    pub fn invert_with<F: Fn(f64) -> f64>(&self, eval_angle: &F, y: f64) -> f64 {
        let d = self.degree as f64;
        let span = self.grid_psi[self.samples] - self.grid_psi[0];
        let _ = span;
        let y0 = self.grid_psi[0];
        let turns = ((y - y0) / d).floor();
        let target = y - turns * d;
        // Binary search the sample grid for a bracket.
        let mut lo_i = 0usize;
        let mut hi_i = self.samples;
        while hi_i - lo_i > 1 {
            let mid = (lo_i + hi_i) / 2;
            if self.grid_value(mid) <= target {
                lo_i = mid;
            } else {
                hi_i = mid;
            }
        }
        let mut lo = lo_i as f64 / self.samples as f64;
        let mut hi = hi_i as f64 / self.samples as f64;
        let mut flo = self.grid_value(lo_i);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if hi - lo < 1e-16 {
                break;
            }
            let fmid = {
                let phi = eval_angle(mid);
                let k = (0.5 * (flo + self.grid_value(hi_i)) - phi).round();
                phi + k
            };
            if fmid <= target {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).rem_euclid(1.0)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }
}

// The lift needs its owner's piece evaluator, so the bound versions live on
// the map.
impl FactorCircleMap {
    /// Continuous monotone lift value at `t` (turns); satisfies
    /// `psi(t + 1) = psi(t) + degree`.
    pub fn psi(&self, t: f64) -> f64 {
        self.lift.psi_with(&|x| self.eval_angle(x), t)
    }

    /// The unique `t` in `[0, 1)` with `psi(t) = y` modulo full turns.
    pub fn invert_lift(&self, y: f64) -> f64 {
        self.lift.invert_with(&|x| self.eval_angle(x), y)
    }
}
