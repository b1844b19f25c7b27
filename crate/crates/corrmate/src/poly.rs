//! Dense complex polynomials and a simultaneous (Aberth-Ehrlich) root finder
//! with Newton polish, cluster-based multiplicity inference, and a Taylor
//! certification pass for roots of multiplicity three and higher.
//!
//! Coefficients are stored in ascending degree order. Everything here is
//! tuned for the degrees that occur in this crate (at most a few dozen).

use num_complex::Complex64;

use crate::error::Error;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative magnitude below which a trailing coefficient is treated as zero.
const TRIM_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    /// Ascending coefficients; invariant: trimmed (no trailing zeros) unless
    /// the polynomial is identically zero, represented by `[0]`.
    pub coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![ZERO] }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Poly { coeffs }
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Poly::one();
        for r in roots {
            p = p.mul(&Poly::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn trim(&mut self) {
        let scale = self.max_coeff_norm();
        let tol = TRIM_REL * scale;
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().norm() <= tol {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(ZERO);
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation of the polynomial and its derivative.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Magnitude bound `sum |c_k| |z|^k`, the backward-error scale at `z`.
    pub fn eval_abs(&self, z_norm: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * z_norm + c.norm();
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * (k as f64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![ZERO; n];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        Poly::new(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-Complex64::new(1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Synthetic division by `(z - r)`; returns the quotient and discards the
    /// remainder (intended for `r` known to be a root).
    ///
    /// Runs top-down for `|r| <= 1` and bottom-up otherwise; the wrong
    /// direction amplifies rounding by powers of `|r|`.
    pub fn deflate(&self, r: Complex64) -> Poly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::zero();
        }
        let mut q = vec![ZERO; n - 1];
        if r.norm() <= 1.0 {
            let mut carry = ZERO;
            for k in (0..n - 1).rev() {
                carry = self.coeffs[k + 1] + carry * r;
                q[k] = carry;
            }
        } else {
            q[0] = -self.coeffs[0] / r;
            for k in 1..n - 1 {
                q[k] = (q[k - 1] - self.coeffs[k]) / r;
            }
        }
        Poly::new(q)
    }

    /// Taylor coefficients of the polynomial recentered at `c`, i.e. the
    /// coefficients of `p(z + c)`, by repeated synthetic division.
    pub fn recenter(&self, c: Complex64) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = vec![ZERO; n];
        for t in out.iter_mut() {
            // One Horner pass leaves the remainder p(c) and the quotient.
            let mut carry = ZERO;
            for k in (0..work.len()).rev() {
                let tmp = work[k] + carry * c;
                work[k] = carry;
                carry = tmp;
            }
            *t = carry;
            work.pop();
            if work.is_empty() {
                break;
            }
        }
        let _ = n;
        out
    }

    /// Coefficient-wise `n`-th root of a monic polynomial of degree `n*p`:
    /// the monic polynomial `s` of degree `p` with `s^n = self`, recovered by
    /// the triangular system matching coefficients from the top.
    ///
    /// Fails if the input is not a perfect `n`-th power within `tol`
    /// (relative, coefficient-wise).
    pub fn nth_root(&self, n: usize, tol: f64) -> Result<Poly, Error> {
        if n == 0 {
            return Err(Error::DegenerateRationalMap("0th root of polynomial".into()));
        }
        let total = self.degree();
        if total % n != 0 {
            return Err(Error::DegenerateRationalMap(format!(
                "degree {total} is not a multiple of {n}"
            )));
        }
        let p = total / n;
        let lead = self.coeffs[total];
        if (lead - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::DegenerateRationalMap("nth_root expects monic input".into()));
        }
        let mut s = vec![ZERO; p + 1];
        s[p] = Complex64::new(1.0, 0.0);
        // Determine s_{p-1}, s_{p-2}, ... by matching the coefficient of
        // z^{np-k} in s^n, which is linear in s_{p-k} given higher ones.
        for k in 1..=p {
            let mut partial = Poly::new(s.clone()).pow(n);
            if partial.coeffs.len() < total + 1 {
                partial.coeffs.resize(total + 1, ZERO);
            }
            let want = self.coeffs[total - k];
            let have = partial.coeffs[total - k];
            // d(s^n)/d(s_{p-k}) at z^{np-k} is n * (coefficient of z^{n p - k
            // - (p-k)} = z^{(n-1)p} in s^{n-1}) = n (leading term), i.e. n.
            s[p - k] = (want - have) / (n as f64);
        }
        let root = Poly::new(s);
        let check = root.pow(n).sub(self);
        let scale = self.max_coeff_norm().max(1.0);
        if check.max_coeff_norm() > tol * scale {
            return Err(Error::DegenerateRationalMap(format!(
                "polynomial is not an exact {n}th power (residual {:.3e})",
                check.max_coeff_norm() / scale
            )));
        }
        Ok(root)
    }
}

/// All roots of `p`, each simple root listed once and each multiple root
/// listed with its multiplicity, in no particular order.
pub fn all_roots(p: &Poly) -> Result<Vec<Complex64>, Error> {
    let mut p = p.clone();
    let scale = p.max_coeff_norm();
    if p.degree() == 0 || scale == 0.0 {
        return Ok(vec![]);
    }
    let mut roots = Vec::with_capacity(p.degree());
    // Exact-ish zero roots come off first; this keeps nilpotent cases such
    // as z^k exact.
    let strip_tol = 1e-15 * scale;
    while p.degree() >= 1 && p.coeffs[0].norm() <= strip_tol {
        roots.push(ZERO);
        p.coeffs.remove(0);
    }
    match p.degree() {
        0 => return Ok(roots),
        1 => {
            roots.push(-p.coeffs[0] / p.coeffs[1]);
            return Ok(roots);
        }
        2 => {
            roots.extend_from_slice(&quadratic_roots(p.coeffs[0], p.coeffs[1], p.coeffs[2]));
            return Ok(roots);
        }
        _ => {}
    }
    let mut rs = aberth(&p)?;
    polish(&p, &mut rs);
    roots.extend(rs);
    Ok(roots)
}

fn quadratic_roots(c0: Complex64, c1: Complex64, c2: Complex64) -> [Complex64; 2] {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // Pick the sign that avoids cancellation.
    let q = if (c1 + disc).norm() >= (c1 - disc).norm() {
        -0.5 * (c1 + disc)
    } else {
        -0.5 * (c1 - disc)
    };
    if q.norm() == 0.0 {
        [ZERO, ZERO]
    } else {
        [q / c2, c0 / q]
    }
}

/// Initial root guesses from the Newton polygon of the coefficients: each
/// edge of the upper convex hull of `(k, log |c_k|)` accounts for a batch of
/// roots whose moduli are approximately the edge's slope exponential. This
/// places starting points on the right circles even when the root moduli
/// span many orders of magnitude (fibers over values near a pole routinely
/// mix radii `1e-1` and `1e14`).
fn newton_polygon_init(monic: &Poly) -> Vec<Complex64> {
    let n = monic.degree();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for (k, c) in monic.coeffs.iter().enumerate() {
        let norm = c.norm();
        if norm == 0.0 {
            continue;
        }
        let y = norm.ln();
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            // Drop the middle point when it lies on or below the chord.
            if (y2 - y1) * (k - k1) as f64 <= (y - y1) * (k2 - k1) as f64 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((k, y));
    }
    let mut init = Vec::with_capacity(n);
    for (seg, pair) in hull.windows(2).enumerate() {
        let (k1, y1) = pair[0];
        let (k2, y2) = pair[1];
        let count = k2 - k1;
        let radius = ((y1 - y2) / count as f64).exp().clamp(1e-150, 1e150);
        for j in 0..count {
            let t = std::f64::consts::TAU
                * ((j as f64 + 0.354) / count as f64 + 0.137 * seg as f64 + 0.11);
            init.push(radius * Complex64::cis(t));
        }
    }
    while init.len() < n {
        init.push(Complex64::new(1.0, 0.5));
    }
    init
}

/// Newton ratio `p/p'` and relative residual at `z`, evaluated through the
/// reversed polynomial for `|z| > 1` so that large roots neither overflow
/// nor lose accuracy. `rev` holds the reversed coefficients of `monic`.
fn newton_ratio(monic: &Poly, rev: &Poly, z: Complex64) -> (Complex64, f64) {
    let n = monic.degree() as f64;
    if z.norm() <= 1.0 {
        let (pv, dpv) = monic.eval_with_derivative(z);
        let rel = pv.norm() / monic.eval_abs(z.norm()).max(1e-300);
        let step = if dpv.norm() > 0.0 { pv / dpv } else { pv };
        (step, rel)
    } else {
        // p(z) = z^n q(1/z) gives p'/p = (n - u q'(u)/q(u)) u with u = 1/z.
        let u = z.inv();
        let (qv, dqv) = rev.eval_with_derivative(u);
        let rel = qv.norm() / rev.eval_abs(u.norm()).max(1e-300);
        let log_deriv = (Complex64::new(n, 0.0) - u * dqv / qv) * u;
        let step = if log_deriv.norm() > 0.0 {
            log_deriv.inv()
        } else {
            Complex64::new(0.0, 0.0)
        };
        (step, rel)
    }
}

fn reversed(monic: &Poly) -> Poly {
    let mut coeffs: Vec<Complex64> = monic.coeffs.iter().rev().copied().collect();
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        coeffs = vec![Complex64::new(1.0, 0.0)];
    }
    Poly { coeffs }
}

/// Aberth-Ehrlich simultaneous iteration on a trimmed polynomial of degree
/// at least three with a nonzero constant term.
fn aberth(p: &Poly) -> Result<Vec<Complex64>, Error> {
    let n = p.degree();
    let lead = p.coeffs[n];
    let monic = Poly::new(p.coeffs.iter().map(|c| c / lead).collect());
    let rev = reversed(&monic);
    let mut z = newton_polygon_init(&monic);

    let mut converged = vec![false; n];
    for _ in 0..400 {
        let mut all_done = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (newton, rel) = newton_ratio(&monic, &rev, z[i]);
            if rel <= 4.0 * f64::EPSILON {
                converged[i] = true;
                continue;
            }
            all_done = false;
            let mut sum = ZERO;
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 1e-300 {
                        sum += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * sum;
            let step = if denom.norm() > 1e-12 {
                newton / denom
            } else {
                newton
            };
            z[i] -= step;
            if step.norm() <= 1e-15 * (1.0 + z[i].norm()) {
                converged[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
    // Final residual sanity: accept if every approximation is a root of a
    // nearby polynomial (the relative test also rejects NaN contamination).
    for zi in &z {
        let (_, rel) = newton_ratio(&monic, &rev, *zi);
        let acceptable = rel <= 1e-8;
        if !acceptable {
            return Err(Error::RootsDiverged { degree: n });
        }
    }
    Ok(z)
}

fn polish(p: &Poly, roots: &mut [Complex64]) {
    let lead = p.coeffs[p.degree()];
    let monic = Poly::new(p.coeffs.iter().map(|c| c / lead).collect());
    let rev = reversed(&monic);
    for r in roots.iter_mut() {
        let mut z = *r;
        let (_, mut rel) = newton_ratio(&monic, &rev, z);
        for _ in 0..2 {
            let (step, _) = newton_ratio(&monic, &rev, z);
            let cand = z - step;
            let (_, cand_rel) = newton_ratio(&monic, &rev, cand);
            if cand_rel <= rel {
                z = cand;
                rel = cand_rel;
            } else {
                break;
            }
        }
        *r = z;
    }
}

/// Greedy clustering of a root list with a fixed radius; returns cluster
/// centroids with their cardinalities as multiplicities.
pub fn cluster_roots(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for r in roots {
        let mut placed = false;
        for (c, m) in clusters.iter_mut() {
            if (*c - r).norm() <= radius {
                // Running centroid.
                *c = (*c * (*m as f64) + r) / (*m as f64 + 1.0);
                *m += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            clusters.push((*r, 1));
        }
    }
    clusters
}

/// Roots with certified multiplicities.
///
/// Clusters at `radius` first; groups of clusters within a merge radius are
/// then tested for a genuine higher-order root by recentering the polynomial
/// at the group centroid and checking that the low Taylor coefficients vanish
/// at noise level. This recovers multiplicities (e.g. triple and quadruple
/// roots) whose floating-point scatter exceeds `radius`.
pub fn roots_with_multiplicity(p: &Poly, radius: f64) -> Result<Vec<(Complex64, usize)>, Error> {
    let roots = all_roots(p)?;
    let prelim = cluster_roots(&roots, radius);
    if prelim.len() <= 1 {
        return Ok(certify_group(p, &prelim));
    }
    // Group preliminary clusters that are suspiciously close.
    let mut used = vec![false; prelim.len()];
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for i in 0..prelim.len() {
        if used[i] {
            continue;
        }
        let merge_radius = 2e-3 * (1.0 + prelim[i].0.norm());
        let mut group = vec![prelim[i]];
        used[i] = true;
        for j in i + 1..prelim.len() {
            if !used[j] && (prelim[j].0 - prelim[i].0).norm() <= merge_radius {
                group.push(prelim[j]);
                used[j] = true;
            }
        }
        out.extend(certify_group(p, &group));
    }
    Ok(out)
}

/// Certifies whether a group of nearby clusters is one multiple root; if the
/// Taylor test fails the clusters are returned unchanged.
///
/// The candidate center is refined by Newton iteration on the (m-1)-th
/// Taylor coefficient: for a genuine m-fold root that coefficient has a
/// simple, well-conditioned zero exactly at the root, so the refined center
/// reaches machine precision and the lower coefficients drop to noise level.
fn certify_group(p: &Poly, group: &[(Complex64, usize)]) -> Vec<(Complex64, usize)> {
    let total: usize = group.iter().map(|(_, m)| m).sum();
    if total <= 1 || group.is_empty() || p.degree() < total {
        return group.to_vec();
    }
    let centroid = group
        .iter()
        .map(|(c, m)| c * (*m as f64))
        .fold(ZERO, |a, b| a + b)
        / total as f64;
    let m = total;
    let mut c = centroid;
    for _ in 0..12 {
        let t = p.recenter(c);
        if t[m].norm() <= 1e-300 {
            break;
        }
        let step = t[m - 1] / (t[m] * m as f64);
        c -= step;
        if step.norm() <= 1e-15 * (1.0 + c.norm()) {
            break;
        }
    }
    if (c - centroid).norm() > 4e-3 * (1.0 + centroid.norm()) {
        return group.to_vec();
    }
    let taylor = p.recenter(c);
    if taylor.len() <= m {
        return group.to_vec();
    }
    // Dominant-term test on a small circle: if |t_m| rho^m exceeds the sum
    // of all other terms at radius rho, the polynomial has exactly m roots
    // in that disk, which certifies the cluster. The radius must also cover
    // every member of the group.
    let spread = group
        .iter()
        .map(|(z, _)| (z - c).norm())
        .fold(0.0f64, f64::max);
    let scale = 1.0 + c.norm();
    let mut rho = 1e-6 * scale;
    while rho <= 4e-4 * scale {
        if rho > spread * 2.0 {
            let own = taylor[m].norm() * rho.powi(m as i32);
            let mut others = 0.0f64;
            for (k, t) in taylor.iter().enumerate() {
                if k != m {
                    others += t.norm() * rho.powi(k as i32);
                }
            }
            if own > 2.0 * others {
                return vec![(c, m)];
            }
        }
        rho *= 2.0;
    }
    group.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sort_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn evaluates_and_differentiates() {
        // p(z) = 1 + 2z + 3z^2
        let p = Poly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let (v, d) = p.eval_with_derivative(c(2.0, 0.0));
        assert_eq!(v, c(17.0, 0.0));
        assert_eq!(d, c(14.0, 0.0));
    }

    #[test]
    fn finds_simple_roots() {
        let roots = vec![c(1.0, 0.0), c(-2.0, 0.5), c(0.25, -3.0), c(4.0, 4.0), c(-1.0, -1.0)];
        let p = Poly::from_roots(&roots);
        let got = sort_by_re(all_roots(&p).unwrap());
        let want = sort_by_re(roots);
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-9, "{g} vs {w}");
        }
    }

    #[test]
    fn pure_power_has_exact_zero_root() {
        let p = Poly::monomial(7);
        let roots = all_roots(&p).unwrap();
        assert_eq!(roots.len(), 7);
        assert!(roots.iter().all(|r| r.norm() == 0.0));
    }

    #[test]
    fn double_root_clusters() {
        // (z-1)^2 (z + 1/8)
        let p = Poly::from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-0.125, 0.0)]);
        let clusters = roots_with_multiplicity(&p, 1e-6).unwrap();
        let mut clusters = clusters;
        clusters.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].1, 1);
        assert!((clusters[0].0 - c(-0.125, 0.0)).norm() < 1e-9);
        assert_eq!(clusters[1].1, 2);
        assert!((clusters[1].0 - c(1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn triple_root_certifies() {
        // (z + 1/2)^3, coefficients expanded in floating point.
        let p = Poly::from_roots(&[c(-0.5, 0.0); 3]);
        let clusters = roots_with_multiplicity(&p, 1e-6).unwrap();
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].1, 3);
        assert!((clusters[0].0 - c(-0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn mixed_triple_and_simple() {
        // (z + 1/3)^3 (z - 1), the critical polynomial shape of a fully
        // ramified degree-4 family member.
        let p = Poly::from_roots(&[c(-1.0 / 3.0, 0.0); 3]).mul(&Poly::from_roots(&[c(1.0, 0.0)]));
        let mut clusters = roots_with_multiplicity(&p, 1e-6).unwrap();
        clusters.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
        assert_eq!(clusters.len(), 2);
        assert_eq!(clusters[0].1, 3);
        assert!((clusters[0].0 - c(-1.0 / 3.0, 0.0)).norm() < 1e-9);
        assert_eq!(clusters[1].1, 1);
    }

    #[test]
    fn quadruple_root_certifies() {
        let p = Poly::from_roots(&[c(0.3, -0.7); 4]).mul(&Poly::from_roots(&[c(-2.0, 0.0)]));
        let mut clusters = roots_with_multiplicity(&p, 1e-6).unwrap();
        clusters.sort_by(|a, b| b.1.cmp(&a.1));
        assert_eq!(clusters[0].1, 4);
        assert!((clusters[0].0 - c(0.3, -0.7)).norm() < 1e-8);
    }

    #[test]
    fn deflation_divides_out_roots() {
        let p = Poly::from_roots(&[c(2.0, 0.0), c(-1.0, 1.0), c(0.5, 0.0)]);
        let q = p.deflate(c(2.0, 0.0));
        assert_eq!(q.degree(), 2);
        assert!(q.eval(c(-1.0, 1.0)).norm() < 1e-12);
        assert!(q.eval(c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn deflation_is_stable_for_large_roots() {
        // Forward synthetic division amplifies by |r|^degree; the quotient
        // must stay accurate when a distant root is divided out.
        let r = c(23.0, -32.0);
        let small: Vec<Complex64> = (0..11)
            .map(|k| Complex64::from_polar(0.6, 0.5 * k as f64))
            .collect();
        let mut roots = small.clone();
        roots.push(r);
        let p = Poly::from_roots(&roots);
        let q = p.deflate(r);
        for s in &small {
            assert!(
                q.eval(*s).norm() < 1e-9 * q.eval_abs(s.norm()),
                "lost root {s}"
            );
        }
    }

    #[test]
    fn recenter_matches_direct_evaluation() {
        let p = Poly::new(vec![c(1.0, 1.0), c(0.0, -2.0), c(3.0, 0.0), c(-1.0, 0.5)]);
        let s = c(0.7, -0.3);
        let t = p.recenter(s);
        // p(z + s) evaluated at z = 0.2 equals sum t_k 0.2^k.
        let z = c(0.2, 0.0);
        let direct = p.eval(z + s);
        let mut acc = ZERO;
        for tk in t.iter().rev() {
            acc = acc * z + tk;
        }
        assert!((acc - direct).norm() < 1e-12);
    }

    #[test]
    fn nth_root_recovers_factor() {
        let s = Poly::from_roots(&[c(0.4, 0.1), c(-1.2, 0.0)]);
        let p = s.pow(3);
        let got = p.nth_root(3, 1e-9).unwrap();
        for (a, b) in got.coeffs.iter().zip(s.coeffs.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
        // Not a perfect power: fails.
        let bad = p.add(&Poly::constant(c(0.001, 0.0)));
        assert!(bad.nth_root(3, 1e-9).is_err());
    }
}
