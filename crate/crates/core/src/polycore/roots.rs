//! Simultaneous (Aberth-Ehrlich) root finding and root-location classification.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITER_DOUBLE: usize = 500;
const MAX_ITER_EXTENDED: usize = 4000;

#[derive(Debug, Clone)]
struct Cx<S> {
    re: S,
    im: S,
}

impl<S: Scalar> Cx<S> {
    fn real(re: S) -> Self {
        let im = re.like(0.0);
        Cx { re, im }
    }
    fn add(&self, o: &Self) -> Self {
        Cx {
            re: self.re.clone() + o.re.clone(),
            im: self.im.clone() + o.im.clone(),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Cx {
            re: self.re.clone() - o.re.clone(),
            im: self.im.clone() - o.im.clone(),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Cx {
            re: self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            im: self.re.clone() * o.im.clone() + self.im.clone() * o.re.clone(),
        }
    }
    fn div(&self, o: &Self) -> Self {
        let d = o.re.clone() * o.re.clone() + o.im.clone() * o.im.clone();
        Cx {
            re: (self.re.clone() * o.re.clone() + self.im.clone() * o.im.clone()) / d.clone(),
            im: (self.im.clone() * o.re.clone() - self.re.clone() * o.im.clone()) / d,
        }
    }
    fn recip(&self) -> Self {
        Cx::real(self.re.like(1.0)).div(self)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn norm_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// `p(z)` and `p'(z)` by Horner.
fn horner2<S: Scalar>(coeffs: &[S], z: &Cx<S>) -> (Cx<S>, Cx<S>) {
    let n = coeffs.len() - 1;
    let mut p = Cx::real(coeffs[n].clone());
    let mut dp = Cx::real(coeffs[n].like(0.0));
    for c in coeffs[..n].iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(&Cx::real(c.clone()));
    }
    (p, dp)
}

/// Bini's initial guesses: circles whose radii come from the upper convex
/// hull of `(k, ln|a_k|)`.
fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(k, c)| (k, c.abs().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let sigma = 0.7;
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let count = j - i;
        let r = ((li - lj) / count as f64).exp();
        for m in 0..count {
            let theta = 2.0 * std::f64::consts::PI * (m as f64 / count as f64 + i as f64 / n as f64) + sigma;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

/// Aberth iteration in place. `coeffs` has nonzero constant and leading terms.
fn aberth<S: Scalar>(coeffs: &[S], z: &mut [Cx<S>], max_iter: usize) {
    let n = z.len();
    let ctx = coeffs[0].ctx();
    let u = S::unit_roundoff(ctx);
    let abs_coeffs: Vec<f64> = coeffs.iter().map(|c| c.to_f64().abs()).collect();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner2(coeffs, &z[i]);
            let r = z[i].norm_f64();
            let bound = abs_coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c);
            if p.norm_f64() <= 4.0 * (n as f64 + 1.0) * u * bound {
                done[i] = true;
                continue;
            }
            all_done = false;
            if dp.is_zero() {
                // Nudge off a critical point.
                let eps = S::lift(ctx, (u.sqrt()).max(1e-300) * (1.0 + r));
                z[i] = z[i].add(&Cx {
                    re: eps.clone(),
                    im: eps,
                });
                continue;
            }
            let ratio = p.div(&dp);
            let mut sum = Cx::real(S::zero(ctx));
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if !d.is_zero() {
                        sum = sum.add(&d.recip());
                    }
                }
            }
            let denom = Cx::real(S::one(ctx)).sub(&ratio.mul(&sum));
            let w = if denom.is_zero() { ratio } else { ratio.div(&denom) };
            z[i] = z[i].sub(&w);
            if w.norm_f64() <= u * z[i].norm_f64() {
                done[i] = true;
            }
        }
        if all_done {
            break;
        }
    }
}

/// All `deg p` complex roots of `p` (with multiplicity).
///
/// The polynomial is converted to the monomial basis. A double precision
/// Aberth pass provides starting points; for extended scalars the roots are
/// then refined with Aberth steps in the working precision.
pub fn poly_roots<S: Scalar>(p: &Poly<S>) -> Result<Vec<Complex64>> {
    let mono = p.to_monomial();
    let deg = mono.degree();
    if deg < 1 {
        return Err(Error::DegreeZero);
    }
    let coeffs = &mono.coeffs()[..=deg];
    let zeros_at_origin = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let reduced = &coeffs[zeros_at_origin..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    if reduced.len() == 1 {
        return Ok(roots);
    }

    let lead = reduced.last().unwrap().clone();
    let monic: Vec<S> = reduced.iter().map(|c| c.clone() / lead.clone()).collect();
    let monic_f64: Vec<f64> = monic.iter().map(Scalar::to_f64).collect();
    let mut z: Vec<Cx<f64>> = initial_guesses(&monic_f64)
        .into_iter()
        .map(|c| Cx { re: c.re, im: c.im })
        .collect();
    aberth(&monic_f64, &mut z, MAX_ITER_DOUBLE);

    let ctx = monic[0].ctx();
    if S::unit_roundoff(ctx) < f64::EPSILON / 4.0 {
        let mut ze: Vec<Cx<S>> = z
            .iter()
            .map(|c| Cx {
                re: S::lift(ctx, c.re),
                im: S::lift(ctx, c.im),
            })
            .collect();
        aberth(&monic, &mut ze, MAX_ITER_EXTENDED);
        roots.extend(ze.iter().map(Cx::to_c64));
    } else {
        roots.extend(z.iter().map(Cx::to_c64));
    }
    Ok(roots)
}

/// Relative backward error of `roots` for `p`: the monic polynomial rebuilt
/// from the roots compared coefficientwise with `p / lead(p)`, in the
/// 1-norm relative to the monic coefficients.
pub fn monic_backward_error(p: &Poly<f64>, roots: &[Complex64]) -> f64 {
    let mono = p.to_monomial();
    let deg = mono.degree();
    let lead = mono.coeffs()[deg];
    let mut rebuilt = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); rebuilt.len() + 1];
        for (k, c) in rebuilt.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        rebuilt = next;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..=deg {
        let want = mono.coeffs()[k] / lead;
        num += (rebuilt[k] - want).norm();
        den += want.abs();
    }
    num / den
}

/// Where a set of roots sits relative to an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    AllStrictlyInside,
    SomeOnBoundary,
    SomeOutside,
    SomeNonReal,
}

impl RootClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RootClass::AllStrictlyInside => "all_strictly_inside",
            RootClass::SomeOnBoundary => "some_on_boundary",
            RootClass::SomeOutside => "some_outside",
            RootClass::SomeNonReal => "some_non_real",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    pub roots: Vec<Complex64>,
    pub interval: (f64, f64),
    pub tol: f64,
    pub classification: RootClass,
}

impl RootReport {
    /// Smallest signed distance from a root's real part to the interval
    /// boundary (negative when outside). `+inf` when there are no roots.
    pub fn min_boundary_distance(&self) -> f64 {
        let (lo, hi) = self.interval;
        self.roots
            .iter()
            .map(|r| (r.re - lo).min(hi - r.re))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_imag(&self) -> f64 {
        self.roots.iter().map(|r| r.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real_rooted(&self) -> bool {
        self.roots.iter().all(|r| r.im.abs() <= self.tol)
    }

    /// Every root is real and inside `[lo - tol, hi + tol]`.
    pub fn all_in_closed(&self) -> bool {
        matches!(
            self.classification,
            RootClass::AllStrictlyInside | RootClass::SomeOnBoundary
        )
    }

    /// Roots within `tol` of an endpoint.
    pub fn boundary_count(&self) -> usize {
        let (lo, hi) = self.interval;
        self.roots
            .iter()
            .filter(|r| r.im.abs() <= self.tol && ((r.re - lo).abs() <= self.tol || (r.re - hi).abs() <= self.tol))
            .count()
    }

    /// Real roots strictly inside the shrunken interval `(lo + tol, hi - tol)`.
    pub fn interior_count(&self) -> usize {
        let (lo, hi) = self.interval;
        self.roots
            .iter()
            .filter(|r| r.im.abs() <= self.tol && r.re > lo + self.tol && r.re < hi - self.tol)
            .count()
    }

    /// Smallest pairwise distance between roots (`+inf` for fewer than two).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                best = best.min((a - b).norm());
            }
        }
        best
    }
}

/// Classifies roots against `(lo, hi)` with tolerance `tol`.
///
/// `SomeNonReal` takes precedence over `SomeOutside`, which takes precedence
/// over `SomeOnBoundary`.
pub fn classify_roots(roots: &[Complex64], interval: (f64, f64), tol: f64) -> Result<RootReport> {
    let (lo, hi) = interval;
    if !(lo < hi) {
        return Err(Error::BadInterval { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(Error::BadParameter(format!("tolerance must be positive, got {tol}")));
    }
    let classification = if roots.iter().any(|r| r.im.abs() > tol) {
        RootClass::SomeNonReal
    } else if roots.iter().any(|r| r.re < lo - tol || r.re > hi + tol) {
        RootClass::SomeOutside
    } else if roots.iter().any(|r| r.re <= lo + tol || r.re >= hi - tol) {
        RootClass::SomeOnBoundary
    } else {
        RootClass::AllStrictlyInside
    };
    Ok(RootReport {
        roots: roots.to_vec(),
        interval,
        tol,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ext;

    fn sorted_re(mut r: Vec<Complex64>) -> Vec<f64> {
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        r.iter().map(|c| c.re).collect()
    }

    #[test]
    fn simple_quadratics() {
        let r = sorted_re(poly_roots(&Poly::monomial(vec![-1.0, 0.0, 1.0])).unwrap());
        assert!((r[0] + 1.0).abs() < 1e-14 && (r[1] - 1.0).abs() < 1e-14);
        let r = sorted_re(poly_roots(&Poly::monomial(vec![-0.5, 0.0, 1.5])).unwrap());
        let s = 1.0 / 3f64.sqrt();
        assert!((r[0] + s).abs() < 1e-14 && (r[1] - s).abs() < 1e-14);
    }

    #[test]
    fn triple_root_at_origin() {
        let r = poly_roots(&Poly::monomial(vec![0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r, vec![Complex64::new(0.0, 0.0); 3]);
    }

    #[test]
    fn degree_zero_is_an_error() {
        assert!(matches!(poly_roots(&Poly::monomial(vec![3.0])), Err(Error::DegreeZero)));
        assert!(matches!(
            poly_roots(&Poly::monomial(vec![3.0, 0.0])),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn complex_pair() {
        let r = poly_roots(&Poly::monomial(vec![1.0, 0.0, 1.0])).unwrap();
        assert!(r.iter().all(|z| (z.im.abs() - 1.0).abs() < 1e-14 && z.re.abs() < 1e-14));
    }

    #[test]
    fn extended_resolves_multiple_root() {
        // (x-1)^7 (x+0.5): a 7-fold root in double precision spreads ~1e-2.
        let mut roots = vec![1.0; 7];
        roots.push(-0.5);
        let p = Poly::<f64>::from_roots((), &roots).lift(256);
        let r = poly_roots(&p).unwrap();
        for z in &r {
            let d = (z - Complex64::new(1.0, 0.0))
                .norm()
                .min((z - Complex64::new(-0.5, 0.0)).norm());
            assert!(d < 1e-9, "{z}");
        }
        let _ = Ext::new(64, 0.0);
    }

    #[test]
    fn classification_examples() {
        let c = |roots: &[Complex64]| classify_roots(roots, (-1.0, 1.0), 1e-9).unwrap().classification;
        assert_eq!(
            c(&[Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0)]),
            RootClass::AllStrictlyInside
        );
        assert_eq!(c(&[Complex64::new(1.0, 0.0)]), RootClass::SomeOnBoundary);
        assert_eq!(c(&[Complex64::new(0.3, 0.01)]), RootClass::SomeNonReal);
        assert_eq!(c(&[Complex64::new(1.5, 0.0)]), RootClass::SomeOutside);
        assert!(matches!(
            classify_roots(&[], (1.0, 1.0), 1e-9),
            Err(Error::BadInterval { .. })
        ));
    }

    #[test]
    fn report_helpers() {
        let rep = classify_roots(
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.25, 0.0),
                Complex64::new(-1.0, 1e-12),
            ],
            (-1.0, 1.0),
            1e-9,
        )
        .unwrap();
        assert_eq!(rep.boundary_count(), 2);
        assert_eq!(rep.interior_count(), 1);
        assert!(rep.all_in_closed());
        assert!(rep.is_real_rooted());
        assert!(rep.min_boundary_distance().abs() < 1e-15);
        assert!((rep.min_separation() - 0.75).abs() < 1e-15);
    }
}
