//! The bi-degree d:d algebraic correspondence attached to a degree d+1
//! rational map `R`:
//!
//! ```text
//! (z, w) related  <=>  (R(w) - R(1/z)) / (w - 1/z) = 0.
//! ```
//!
//! Forward branches solve for `w` given `z` (the diagonal root `w = 1/z`
//! deflated once), backward branches are their inverses. The sphere splits
//! into the tiling set (group-like dynamics, with a deck transformation of
//! order np permuting fibers of `R`), the two halves of the non-escaping set
//! (polynomial-like dynamics), and their common limit-set boundary.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::Error;
use crate::rational::RationalMap;
use crate::sphere::{MobiusMap, SpherePoint};

/// A correspondence with its marked point (the boundary fixed point 1).
#[derive(Debug, Clone)]
pub struct Correspondence {
    map: RationalMap,
    config: Config,
}

/// Which curve plays the role of the common boundary of the two Jordan
/// domains swapped by `z -> 1/z`; the domain itself is the side containing
/// infinity.
#[derive(Debug, Clone)]
pub enum CurveKind {
    UnitCircle,
    /// A sampled closed curve (positively oriented polygon).
    Parametric(Vec<Complex64>),
}

#[derive(Debug, Clone)]
pub struct DomainSpec {
    pub curve: CurveKind,
}

/// Orbit classification labels for the invariant partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    /// Group-like side: the orbit left the range of the restricted map.
    Tiling,
    /// Non-escaping, on the closed infinity side of the curve.
    K1,
    /// Non-escaping, on the other side.
    K2,
    /// Fiber-selection margin exhausted near the boundary.
    Undecided,
}

#[derive(Debug, Clone, Copy)]
pub struct Classification {
    pub label: Label,
    /// Escape iteration for tiling points; the full budget otherwise.
    pub rank: u32,
    /// Smallest uniqueness margin of the fiber selection along the orbit:
    /// the gap between the best and second-best side margins. Infinite when
    /// no selection was ever contested.
    pub margin: f64,
}

/// Result of the once-per-session domain audit for classification.
#[derive(Debug, Clone)]
pub struct DomainAudit {
    /// Smallest image separation over well-separated curve sample pairs.
    pub min_image_separation: f64,
    /// Critical points of the map lying on the curve (within tolerance).
    pub boundary_critical_points: Vec<Complex64>,
}

impl DomainSpec {
    pub fn unit_circle() -> Self {
        DomainSpec {
            curve: CurveKind::UnitCircle,
        }
    }

    /// Sampled points of the curve, counter-clockwise.
    pub fn sample(&self, m: usize) -> Vec<Complex64> {
        match &self.curve {
            CurveKind::UnitCircle => (0..m)
                .map(|k| Complex64::cis(std::f64::consts::TAU * k as f64 / m as f64))
                .collect(),
            CurveKind::Parametric(pts) => pts.clone(),
        }
    }

    /// Sampled Hausdorff defect of the inversion invariance of the curve.
    pub fn eta_invariance_defect(&self, m: usize) -> f64 {
        let pts = self.sample(m);
        let mut worst: f64 = 0.0;
        for p in &pts {
            let q = p.inv();
            let d = pts.iter().map(|r| (r - q).norm()).fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
        worst
    }

    /// Whether a point lies strictly on the infinity side of the curve.
    pub fn infinity_side(&self, z: &SpherePoint, eps: f64) -> bool {
        match z {
            SpherePoint::Infinity => true,
            SpherePoint::Finite(z) => match &self.curve {
                CurveKind::UnitCircle => z.norm() > 1.0 + eps,
                CurveKind::Parametric(pts) => winding_number(pts, *z) == 0,
            },
        }
    }

    /// Signed margin by which a point sits on the infinity side: positive
    /// outside, negative inside (unit-circle case: `|z| - 1`).
    fn side_margin(&self, z: &SpherePoint) -> f64 {
        match z {
            SpherePoint::Infinity => f64::INFINITY,
            SpherePoint::Finite(z) => match &self.curve {
                CurveKind::UnitCircle => z.norm() - 1.0,
                CurveKind::Parametric(pts) => {
                    let dist = pts.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
                    if winding_number(pts, *z) == 0 {
                        dist
                    } else {
                        -dist
                    }
                }
            },
        }
    }
}

fn winding_number(polygon: &[Complex64], z: Complex64) -> i32 {
    let mut w = 0i32;
    let n = polygon.len();
    for i in 0..n {
        let a = polygon[i] - z;
        let b = polygon[(i + 1) % n] - z;
        if a.im <= 0.0 && b.im > 0.0 {
            if (a * b.conj()).im < 0.0 {
                w += 1;
            }
        } else if a.im > 0.0 && b.im <= 0.0 && (a * b.conj()).im > 0.0 {
            w -= 1;
        }
    }
    w
}

impl Correspondence {
    pub fn new(map: RationalMap, config: Config) -> Result<Self, Error> {
        if map.degree() < 2 {
            return Err(Error::DegenerateRationalMap(
                "correspondence needs a map of degree at least 2".into(),
            ));
        }
        Ok(Correspondence { map, config })
    }

    pub fn map(&self) -> &RationalMap {
        &self.map
    }

    /// The bidegree `d = deg R - 1`.
    pub fn bidegree(&self) -> usize {
        self.map.degree() - 1
    }

    pub fn marked_point(&self) -> SpherePoint {
        SpherePoint::ONE
    }

    /// The fiber `R^{-1}(v)` with the point `e` deflated once; returns
    /// exactly `d` points counted with multiplicity.
    fn deflated_fiber(
        &self,
        e: SpherePoint,
        v: SpherePoint,
    ) -> Result<Vec<SpherePoint>, Error> {
        let d = self.bidegree();
        let num = self.map.num();
        let den = self.map.den();
        let mut p = match v {
            SpherePoint::Infinity => den.clone(),
            SpherePoint::Finite(v) => num.sub(&den.scale(v)),
        };
        if let SpherePoint::Finite(ef) = e {
            p = p.deflate(ef);
        }
        let mut out = Vec::with_capacity(d);
        if !p.is_zero() && p.degree() >= 1 || p.coeffs[0].norm() == 0.0 {
            for (z, m) in crate::poly::roots_with_multiplicity(&p, crate::rational::CLUSTER_RADIUS)? {
                for _ in 0..m {
                    out.push(SpherePoint::Finite(z));
                }
            }
        }
        while out.len() < d {
            out.push(SpherePoint::Infinity);
        }
        if out.len() != d {
            return Err(Error::DegenerateRationalMap(format!(
                "fiber has {} points, expected {d}",
                out.len()
            )));
        }
        Ok(out)
    }

    /// The full fiber `R^{-1}(w)` flattened to `deg R` points.
    fn full_fiber(&self, w: SpherePoint) -> Result<Vec<SpherePoint>, Error> {
        let mut out = Vec::with_capacity(self.map.degree());
        for (u, m) in self.map.solve_preimages(w)? {
            for _ in 0..m {
                out.push(u);
            }
        }
        Ok(out)
    }

    /// Forward branches at `z`: all `w` with `R(w) = R(1/z)`, the diagonal
    /// root `w = 1/z` removed once (multiplicities kept).
    pub fn forward(&self, z: SpherePoint) -> Result<Vec<SpherePoint>, Error> {
        let e = z.eta();
        let v = self.map.eval(e);
        self.deflated_fiber(e, v)
    }

    /// Backward branches at `w`: the inversions `z = 1/zeta` of the fiber
    /// points of `R(w)`, the root `zeta = w` removed once.
    pub fn backward(&self, w: SpherePoint) -> Result<Vec<SpherePoint>, Error> {
        let v = self.map.eval(w);
        Ok(self
            .deflated_fiber(w, v)?
            .into_iter()
            .map(|z| z.eta())
            .collect())
    }

    /// Random forward/backward grand orbit of the marked point, plus a full
    /// backward tree of fixed depth; deterministic for a fixed seed.
    pub fn grand_orbit_cloud(&self, budget: usize, seed: u64) -> Result<Vec<SpherePoint>, Error> {
        Ok(self
            .grand_orbit_cloud_ranked(budget, seed)?
            .into_iter()
            .map(|(z, _)| z)
            .collect())
    }

    /// As [`grand_orbit_cloud`](Self::grand_orbit_cloud), with each point
    /// tagged by its generation: backward-tree depth for the seeding layer,
    /// then the chaos-game step index.
    pub fn grand_orbit_cloud_ranked(
        &self,
        budget: usize,
        seed: u64,
    ) -> Result<Vec<(SpherePoint, u32)>, Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.bidegree();
        let mut cloud = vec![(self.marked_point(), 0u32)];

        // Breadth-first backward fibers anchor the sampling; full backward
        // trees equidistribute better than the chaos game near parabolic
        // points, so expand while the layer stays small.
        let mut layer = vec![self.marked_point()];
        let mut depth = 0u32;
        while layer.len() * d <= 6000 && depth < 16 {
            depth += 1;
            let mut next = Vec::with_capacity(layer.len() * d);
            for z in &layer {
                for w in self.backward(*z)? {
                    next.push(w);
                }
            }
            cloud.extend(next.iter().map(|z| (*z, depth)));
            layer = next;
        }

        // Chaos game over the 2d branches; every computed branch value is
        // recorded, the walk continues through a uniformly chosen one.
        let mut current = self.marked_point();
        for step in 0..budget {
            let fwd = self.forward(current)?;
            let bwd = self.backward(current)?;
            let rank = depth + 1 + step as u32;
            cloud.extend(fwd.iter().map(|z| (*z, rank)));
            cloud.extend(bwd.iter().map(|z| (*z, rank)));
            let k = rng.gen_range(0..2 * d);
            current = if k < d { fwd[k] } else { bwd[k - d] };
            if current.is_infinity() {
                current = self.marked_point();
            }
        }
        Ok(cloud)
    }

    /// Once-per-session audit for classification: the map must be injective
    /// on the curve within tolerance.
    pub fn audit_domain(&self, dom: &DomainSpec) -> Result<DomainAudit, Error> {
        let defect = dom.eta_invariance_defect(256);
        let curve_tol = match dom.curve {
            CurveKind::UnitCircle => 1e-12,
            CurveKind::Parametric(_) => 5e-2,
        };
        if defect > curve_tol {
            return Err(Error::DomainAudit(format!(
                "curve is not inversion-invariant (sampled defect {defect:.3e})"
            )));
        }
        let m = 512usize;
        let pts = dom.sample(m);
        let images: Vec<SpherePoint> = pts
            .iter()
            .map(|z| self.map.eval(SpherePoint::Finite(*z)))
            .collect();
        let mut min_sep = f64::INFINITY;
        // Cusps at boundary critical points flatten the curve image locally,
        // so adjacent samples legitimately bunch; test separation only for
        // pairs at least 16 samples apart along the curve.
        let gap = 16usize;
        for i in 0..m {
            for j in i + gap..m {
                if m + i < j + gap {
                    continue;
                }
                let dij = images[i].chordal_dist(&images[j]);
                min_sep = min_sep.min(dij);
            }
        }
        if min_sep < 1e-6 {
            return Err(Error::DomainAudit(format!(
                "map is not injective on the curve (separation {min_sep:.3e})"
            )));
        }
        let mut boundary_critical_points = Vec::new();
        for (c, _) in self.map.critical_points()? {
            if let SpherePoint::Finite(c) = c {
                let on_curve = match &dom.curve {
                    CurveKind::UnitCircle => (c.norm() - 1.0).abs() < 1e-6,
                    CurveKind::Parametric(pts) => {
                        pts.iter().map(|p| (p - c).norm()).fold(f64::INFINITY, f64::min) < 1e-3
                    }
                };
                if on_curve {
                    boundary_critical_points.push(c);
                }
            }
        }
        Ok(DomainAudit {
            min_image_separation: min_sep,
            boundary_critical_points,
        })
    }

    /// Classifies a point by iterating the forward map of the mating: at
    /// each step the image is pulled back to the unique fiber point on the
    /// closed infinity side of the curve. Escape (no such fiber point) means
    /// the orbit left the range of the restricted map: the tiling side.
    pub fn classify_point(
        &self,
        z: SpherePoint,
        dom: &DomainSpec,
        max_iter: u32,
    ) -> Result<Classification, Error> {
        let margin = self.config.epsilon;
        let mut w = self.map.eval(z);
        let mut min_gap = f64::INFINITY;
        for iter in 0..max_iter {
            let candidates = self.full_fiber(w)?;
            let mut best: Option<(f64, SpherePoint)> = None;
            let mut second: f64 = f64::NEG_INFINITY;
            for u in candidates {
                let s = dom.side_margin(&u);
                match best {
                    None => best = Some((s, u)),
                    Some((bs, _)) if s > bs => {
                        second = best.unwrap().0;
                        best = Some((s, u));
                    }
                    Some((bs, _)) => {
                        let _ = bs;
                        second = second.max(s);
                    }
                }
            }
            let (best_margin, u) = best.expect("fiber is never empty");
            if second.is_finite() {
                min_gap = min_gap.min(best_margin - second);
            }
            if best_margin < -margin {
                return Ok(Classification {
                    label: Label::Tiling,
                    rank: iter,
                    margin: min_gap,
                });
            }
            if best_margin <= margin || second >= -margin {
                return Ok(Classification {
                    label: Label::Undecided,
                    rank: iter,
                    margin: min_gap,
                });
            }
            w = self.map.eval(u.eta());
        }
        let label = if dom.side_margin(&z) >= 0.0 {
            Label::K1
        } else {
            Label::K2
        };
        Ok(Classification {
            label,
            rank: max_iter,
            margin: min_gap,
        })
    }
}

/// The deck transformation of `R` restricted to the tiling component around
/// its higher-order critical point: locally `z -> x0 + omega (z - x0)`,
/// extended by nearest-point continuation of the fiber along paths from the
/// trust region. Only the single-component case `p = 1` is supported; the
/// transformation then has order `n = np`.
#[derive(Debug, Clone)]
pub struct DeckTransform {
    corr: Correspondence,
    pub x0: Complex64,
    pub omega: Complex64,
    pub trust_radius: f64,
    order: u32,
}

impl DeckTransform {
    pub fn new(corr: &Correspondence, n: u32, p: u32) -> Result<Self, Error> {
        if p != 1 {
            return Err(Error::DeckUnsupported(p));
        }
        let d = corr.bidegree() as u32;
        if d + 1 != n * p {
            return Err(Error::DegenerateRationalMap(format!(
                "map degree {} does not match np = {}",
                d + 1,
                n * p
            )));
        }
        // The tiling critical point: multiplicity n-1 with critical value
        // away from the boundary curve image; for normalized families it is
        // the unique multiplicity n-1 point off the origin.
        let mut x0 = None;
        for (c, m) in corr.map.critical_points()? {
            if let SpherePoint::Finite(c) = c {
                if m == (n - 1) as usize && c.norm() > 1e-6 && (c.norm() - 1.0).abs() > 1e-6 {
                    x0 = Some(c);
                }
            }
        }
        let x0 = x0.ok_or_else(|| {
            Error::DegenerateRationalMap("no interior critical point of multiplicity n-1".into())
        })?;
        Ok(DeckTransform {
            corr: corr.clone(),
            x0,
            omega: Complex64::cis(std::f64::consts::TAU / n as f64),
            trust_radius: 0.05,
            order: n,
        })
    }

    /// The order of the transformation (`np`, with `p = 1`).
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Full fiber of `R(z)` (no deflation), finite points only.
    fn fiber_of(&self, z: Complex64) -> Result<Vec<Complex64>, Error> {
        let v = self.corr.map.eval(SpherePoint::Finite(z));
        let mut pts = Vec::new();
        for (u, m) in self.corr.map.solve_preimages(v)? {
            if let SpherePoint::Finite(u) = u {
                for _ in 0..m {
                    pts.push(u);
                }
            }
        }
        Ok(pts)
    }

    fn nearest_with_gap(pts: &[Complex64], target: Complex64) -> (Complex64, f64, f64) {
        let mut best = (f64::INFINITY, target);
        let mut second = f64::INFINITY;
        for p in pts {
            let d = (p - target).norm();
            if d < best.0 {
                second = best.0;
                best = (d, *p);
            } else if d < second {
                second = d;
            }
        }
        (best.1, best.0, second)
    }

    /// Applies the transformation inside the trust region: the local
    /// rotation model snapped to the exact fiber.
    fn apply_local(&self, z: Complex64) -> Result<Complex64, Error> {
        if (z - self.x0).norm() < 1e-9 {
            return Ok(self.x0);
        }
        let target = self.x0 + self.omega * (z - self.x0);
        let fiber = self.fiber_of(z)?;
        let (pick, dist, _) = Self::nearest_with_gap(&fiber, target);
        if dist > 0.5 * (z - self.x0).norm() {
            return Err(Error::ContinuationLost(format!(
                "local model miss at {z} (snap distance {dist:.3e})"
            )));
        }
        Ok(pick)
    }

    /// Applies the transformation at `z`, reaching out of the trust region
    /// by continuation along the straight path from the trust boundary
    /// toward `z` (the path must stay in the tiling component).
    pub fn apply(&self, z: SpherePoint) -> Result<SpherePoint, Error> {
        let z = z.expect_finite()?;
        if (z - self.x0).norm() <= self.trust_radius {
            return Ok(SpherePoint::Finite(self.apply_local(z)?));
        }
        let dir = (z - self.x0) / (z - self.x0).norm();
        let start = self.x0 + dir * (0.5 * self.trust_radius);
        self.apply_along(&[start, z]).map(SpherePoint::Finite)
    }

    /// Continuation along an explicit polyline whose first vertex must lie
    /// in the trust region.
    pub fn apply_along(&self, path: &[Complex64]) -> Result<Complex64, Error> {
        let start = *path
            .first()
            .ok_or_else(|| Error::ContinuationLost("empty path".into()))?;
        if (start - self.x0).norm() > self.trust_radius {
            return Err(Error::ContinuationLost(
                "path must start in the trust region".into(),
            ));
        }
        let mut cur = start;
        let mut img = self.apply_local(start)?;
        for leg in path.windows(2) {
            let (a, b) = (leg[0], leg[1]);
            debug_assert!((a - cur).norm() < 1e-9 || (a - start).norm() < 1e-12);
            img = self.continue_segment(cur, img, b, 0)?;
            cur = b;
        }
        Ok(img)
    }

    fn continue_segment(
        &self,
        from: Complex64,
        img: Complex64,
        to: Complex64,
        depth: u32,
    ) -> Result<Complex64, Error> {
        if depth > 48 {
            return Err(Error::ContinuationLost(format!(
                "fiber points too close near {from}"
            )));
        }
        let fiber = self.fiber_of(to)?;
        let (pick, dist, second) = Self::nearest_with_gap(&fiber, img);
        // Accept the step only when the tracked point is unambiguous.
        if dist < 0.4 * second {
            return Ok(pick);
        }
        let mid = 0.5 * (from + to);
        let half = self.continue_segment(from, img, mid, depth + 1)?;
        self.continue_segment(mid, half, to, depth + 1)
    }
}

/// A reduced word in the involution `e` (`z -> 1/z`) and the deck
/// transformation `t`, stored as alternating syllables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    /// Syllables: `None` is the involution, `Some(k)` is the k-th power of
    /// the deck transformation, `1 <= k < order`.
    pub syllables: Vec<Option<u32>>,
}

impl Word {
    pub fn letter_length(&self) -> u32 {
        self.syllables
            .iter()
            .map(|s| s.map(|k| k).unwrap_or(1))
            .sum()
    }

    pub fn name(&self) -> String {
        if self.syllables.is_empty() {
            return "id".into();
        }
        self.syllables
            .iter()
            .map(|s| match s {
                None => "e".to_string(),
                Some(1) => "t".to_string(),
                Some(k) => format!("t^{k}"),
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// All nonempty reduced words of letter length at most `max_len` in the free
/// product of the cyclic groups of order 2 and `order`.
pub fn reduced_words(order: u32, max_len: u32) -> Vec<Word> {
    let mut out = Vec::new();
    // Build alternating syllable sequences; each syllable is e (one letter)
    // or t^k (k letters, 1 <= k <= order-1 after reduction).
    fn extend(
        out: &mut Vec<Word>,
        current: &mut Vec<Option<u32>>,
        used: u32,
        max_len: u32,
        order: u32,
    ) {
        if !current.is_empty() {
            out.push(Word {
                syllables: current.clone(),
            });
        }
        let last_is_e = matches!(current.last(), Some(None));
        // Append the involution (never after itself).
        if used < max_len && !last_is_e {
            current.push(None);
            extend(out, current, used + 1, max_len, order);
            current.pop();
        }
        // Append a deck power (only after the involution or at the start).
        if current.is_empty() || last_is_e {
            for k in 1..order {
                if used + k <= max_len {
                    current.push(Some(k));
                    extend(out, current, used + k, max_len, order);
                    current.pop();
                }
            }
        }
    }
    let mut current = Vec::new();
    extend(&mut out, &mut current, 0, max_len, order);
    out
}

/// Result of the free-product evidence check.
#[derive(Debug, Clone)]
pub struct PingPongReport {
    /// Residual of the relation `e^2 = id` over the samples.
    pub involution_residual: f64,
    /// Residual of the relation `t^order = id` over the samples.
    pub deck_order_residual: f64,
    /// Minimum displacement of any nontrivial reduced word over the samples.
    pub min_word_displacement: f64,
    /// Words that failed to displace every sample by the threshold.
    pub violations: Vec<String>,
    pub words_checked: usize,
}

/// Checks numerically that the involution and the deck transformation
/// generate a free product: the relations hold, and every nontrivial reduced
/// word up to the length bound displaces every sample point.
pub fn pingpong_check(
    deck: &DeckTransform,
    samples: &[Complex64],
    max_word_len: u32,
    displacement_threshold: f64,
) -> Result<PingPongReport, Error> {
    let order = deck.order();
    let mut involution_residual: f64 = 0.0;
    let mut deck_order_residual: f64 = 0.0;
    for &z in samples {
        let zz = SpherePoint::Finite(z);
        let e2 = zz.eta().eta();
        involution_residual = involution_residual.max(e2.chordal_dist(&zz));
        let mut t = zz;
        for _ in 0..order {
            t = deck.apply(t)?;
        }
        deck_order_residual = deck_order_residual.max(t.chordal_dist(&zz));
    }

    let words = reduced_words(order, max_word_len);
    let mut min_word_displacement = f64::INFINITY;
    let mut violations = Vec::new();
    for word in &words {
        let mut word_min = f64::INFINITY;
        for &z in samples {
            let mut x = SpherePoint::Finite(z);
            for syl in word.syllables.iter().rev() {
                match syl {
                    None => x = x.eta(),
                    Some(k) => {
                        for _ in 0..*k {
                            x = deck.apply(x)?;
                        }
                    }
                }
            }
            word_min = word_min.min(x.chordal_dist(&SpherePoint::Finite(z)));
        }
        if word_min <= displacement_threshold {
            violations.push(format!("{} (displacement {word_min:.3e})", word.name()));
        }
        min_word_displacement = min_word_displacement.min(word_min);
    }
    Ok(PingPongReport {
        involution_residual,
        deck_order_residual,
        min_word_displacement,
        violations,
        words_checked: words.len(),
    })
}

/// A witness that two correspondences are equivalent: `R1 = post . R2 . pre`
/// with `pre` in the centralizer of the involution.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    pub pre: MobiusMap,
    pub post: MobiusMap,
}

/// Searches for equivalences by matching critical-point constellations.
/// Returns all witnesses found (empty when the correspondences are not
/// equivalent; several for maps with symmetries).
pub fn are_equivalent(
    c1: &Correspondence,
    c2: &Correspondence,
) -> Result<Vec<EquivalenceWitness>, Error> {
    if c1.bidegree() != c2.bidegree() {
        return Ok(vec![]);
    }
    let r1 = c1.map();
    let r2 = c2.map();
    let crit1 = finite_crits(r1)?;
    let crit2 = finite_crits(r2)?;
    let mut mults1: Vec<usize> = crit1.iter().map(|(_, m)| *m).collect();
    let mut mults2: Vec<usize> = crit2.iter().map(|(_, m)| *m).collect();
    mults1.sort_unstable();
    mults2.sort_unstable();
    if mults1 != mults2 {
        return Ok(vec![]);
    }

    // Candidate pre-maps: members of the centralizer of z -> 1/z carrying
    // some critical point of R1 to one of R2 with equal multiplicity. Each
    // component of the centralizer is one-parameter, so a single point
    // correspondence pins the candidate.
    let mut candidates: Vec<MobiusMap> = vec![MobiusMap::IDENTITY];
    let one = Complex64::new(1.0, 0.0);
    for (c, m) in &crit1 {
        for (cp, mp) in &crit2 {
            if m != mp {
                continue;
            }
            // (az + b)/(bz + a) with a(c - c') + b(1 - c c') = 0.
            let a1 = one - c * cp;
            let b1 = cp - c;
            if a1.norm() + b1.norm() > 1e-12 {
                if let Ok(m) = MobiusMap::new(a1, b1, b1, a1) {
                    candidates.push(m);
                }
            }
            // (az + b)/(-bz - a) with a(c + c') + b(1 + c c') = 0.
            let a2 = one + c * cp;
            let b2 = -(c + cp);
            if a2.norm() + b2.norm() > 1e-12 {
                if let Ok(m) = MobiusMap::new(a2, b2, -b2, -a2) {
                    candidates.push(m);
                }
            }
        }
    }
    candidates.dedup_by(|a, b| a.dist_up_to_sign(b) < 1e-9);

    let probes = [
        Complex64::new(0.37, 0.21),
        Complex64::new(-0.53, 0.78),
        Complex64::new(1.41, -0.33),
    ];
    let samples: Vec<Complex64> = (0..20)
        .map(|k| Complex64::new(0.1 + 0.17 * k as f64, -0.4 + 0.13 * k as f64))
        .collect();

    let mut witnesses: Vec<EquivalenceWitness> = Vec::new();
    'next: for pre in candidates {
        // The critical sets must correspond under the candidate.
        for (c, m) in &crit1 {
            let img = pre.apply(SpherePoint::Finite(*c));
            let ok = crit2
                .iter()
                .any(|(cp, mp)| m == mp && img.chordal_dist(&SpherePoint::Finite(*cp)) < 1e-6);
            if !ok {
                continue 'next;
            }
        }
        // Interpolate the post-map through three probes and verify.
        let mut src = Vec::new();
        let mut dst = Vec::new();
        for z in probes {
            let zz = SpherePoint::Finite(z);
            let from = r2.eval(pre.apply(zz));
            let to = r1.eval(zz);
            src.push(from);
            dst.push(to);
        }
        let distinct = |v: &Vec<SpherePoint>| {
            v[0].chordal_dist(&v[1]) > 1e-6
                && v[0].chordal_dist(&v[2]) > 1e-6
                && v[1].chordal_dist(&v[2]) > 1e-6
        };
        if !distinct(&src) || !distinct(&dst) {
            continue;
        }
        let post = match MobiusMap::from_three_points(
            [src[0], src[1], src[2]],
            [dst[0], dst[1], dst[2]],
        ) {
            Ok(m) => m,
            Err(_) => continue,
        };
        for z in &samples {
            let zz = SpherePoint::Finite(*z);
            let lhs = r1.eval(zz);
            let rhs = post.apply(r2.eval(pre.apply(zz)));
            if lhs.chordal_dist(&rhs) > 1e-8 {
                continue 'next;
            }
        }
        if !witnesses
            .iter()
            .any(|w| w.pre.dist_up_to_sign(&pre) < 1e-8)
        {
            witnesses.push(EquivalenceWitness { pre, post });
        }
    }
    Ok(witnesses)
}

fn finite_crits(r: &RationalMap) -> Result<Vec<(Complex64, usize)>, Error> {
    Ok(r.critical_points()?
        .into_iter()
        .filter_map(|(z, m)| z.finite().map(|z| (z, m)))
        .collect())
}

/// Builds the correspondence defined by conjugating `R` inside the
/// centralizer of the involution: the correspondence of `R . pre^{-1}`.
pub fn conjugate_correspondence(
    c: &Correspondence,
    pre: &MobiusMap,
) -> Result<Correspondence, Error> {
    let map = c.map().conjugate(&MobiusMap::IDENTITY, &pre.inverse())?;
    Correspondence::new(map, c.config)
}
