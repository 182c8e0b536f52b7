//! Linear maps `x^k -> c_k Q_k(x)` from the monomial basis to a Jacobi-family
//! basis. Every transform returns a monomial-basis polynomial so that root
//! finding downstream is uniform.
//!
//! The ultraspherical map `x^k -> k!/Gamma(k+1+a) P_k^(a,a)` sends real
//! polynomials with all zeros in `(-1, 1)` to polynomials with all zeros in
//! `(-1, 1)` whenever `a > -1`. The Jacobi variants are exploratory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::{ortho_constant, ultra_prefactor};
use crate::polycore::{check_jacobi_params, gamma, Basis, Poly};
use crate::scalar::Scalar;

/// Per-degree constants of a generic biorthogonal-kernel transform
/// `q_k -> q_k / (delta_k h_k) Q_k` with starting basis `R_k(t) = t^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IserlesSaffSpec {
    /// Target orthogonal family `Q_k`.
    pub family: Basis,
    /// Kernel expansion coefficients `delta_k`, nonzero.
    pub delta: Vec<f64>,
    /// Squared norms `h_k` of `Q_k` under the family's weight, positive.
    pub h: Vec<f64>,
}

impl IserlesSaffSpec {
    /// `delta_k = 2k + 2a + 1` with the weighted norms of `P_k^(a,a)`.
    pub fn ultraspherical_linear_delta(alpha: f64, max_degree: usize) -> Result<Self> {
        let delta = (0..=max_degree).map(|k| 2.0 * k as f64 + 2.0 * alpha + 1.0).collect();
        Self::ultraspherical_with(alpha, max_degree, delta)
    }

    /// `delta_k` equal to the full Taylor coefficient multiplier of the `G2`
    /// kernel, `(2k + 2a + 1) (1+2a)_k / (1+a)_k`.
    pub fn ultraspherical_g2_delta(alpha: f64, max_degree: usize) -> Result<Self> {
        let delta = (0..=max_degree)
            .map(|k| (2.0 * k as f64 + 2.0 * alpha + 1.0) * ultra_prefactor(alpha, k))
            .collect();
        Self::ultraspherical_with(alpha, max_degree, delta)
    }

    fn ultraspherical_with(alpha: f64, max_degree: usize, delta: Vec<f64>) -> Result<Self> {
        let h = (0..=max_degree)
            .map(|k| ortho_constant(k, alpha, alpha).map(|c| c.h))
            .collect::<Result<_>>()?;
        let spec = IserlesSaffSpec {
            family: Basis::Ultraspherical { alpha },
            delta,
            h,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if self.family == Basis::Monomial {
            return Err(Error::BadParameter("target family must be orthogonal".into()));
        }
        for (k, d) in self.delta.iter().enumerate() {
            if *d == 0.0 || !d.is_finite() {
                return Err(Error::BadParameter(format!(
                    "delta_{k} = {d} must be finite and nonzero"
                )));
            }
        }
        for (k, h) in self.h.iter().enumerate() {
            if !(*h > 0.0) || !h.is_finite() {
                return Err(Error::BadParameter(format!("h_{k} = {h} must be positive")));
            }
        }
        Ok(())
    }

    /// `1 / (delta_k h_k)` for `k = 0..=n`.
    pub fn factors(&self, n: usize) -> Result<Vec<f64>> {
        (0..=n)
            .map(|k| match (self.delta.get(k), self.h.get(k)) {
                (Some(d), Some(h)) => Ok(1.0 / (d * h)),
                _ => Err(Error::SpecIncomplete(k)),
            })
            .collect()
    }
}

/// Which transform to apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    /// `x^k -> k!/Gamma(k+1+a) P_k^(a,a)`
    Ultraspherical { alpha: f64 },
    /// `x^k -> P_k`
    Legendre,
    /// `x^k -> P_k^(a,b)`
    Jacobi { alpha: f64, beta: f64 },
    /// `x^k -> P_k^(a,b) / k!`
    JacobiFactorial { alpha: f64, beta: f64 },
    /// `x^k -> Q_k / (delta_k h_k)`
    IserlesSaff(IserlesSaffSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub kind: TransformKind,
    pub max_degree: usize,
}

impl TransformSpec {
    pub fn new(kind: TransformKind, max_degree: usize) -> Result<Self> {
        match &kind {
            TransformKind::Ultraspherical { alpha } => check_jacobi_params(*alpha, *alpha)?,
            TransformKind::Legendre => {}
            TransformKind::Jacobi { alpha, beta } | TransformKind::JacobiFactorial { alpha, beta } => {
                check_jacobi_params(*alpha, *beta)?
            }
            TransformKind::IserlesSaff(spec) => {
                spec.validate()?;
                spec.factors(max_degree)?;
            }
        }
        Ok(TransformSpec { kind, max_degree })
    }

    /// Per-degree multipliers `c_0..=c_n` of the target basis elements.
    pub fn degree_factors(&self, n: usize) -> Result<Vec<f64>> {
        if n > self.max_degree {
            return Err(Error::SpecIncomplete(n));
        }
        match &self.kind {
            TransformKind::Ultraspherical { alpha } => Ok(ultra_factors(*alpha, n)),
            TransformKind::Legendre => Ok(vec![1.0; n + 1]),
            TransformKind::Jacobi { .. } => Ok(vec![1.0; n + 1]),
            TransformKind::JacobiFactorial { .. } => Ok(inverse_factorials(n)),
            TransformKind::IserlesSaff(spec) => spec.factors(n),
        }
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        let n = f.to_monomial().degree();
        if n > self.max_degree {
            return Err(Error::SpecIncomplete(n));
        }
        match &self.kind {
            TransformKind::Ultraspherical { alpha } => ultra_transform(f, *alpha),
            TransformKind::Legendre => legendre_transform(f),
            TransformKind::Jacobi { alpha, beta } => jacobi_transform(f, *alpha, *beta),
            TransformKind::JacobiFactorial { alpha, beta } => jacobi_factorial_transform(f, *alpha, *beta),
            TransformKind::IserlesSaff(spec) => {
                let mono = f.to_monomial();
                iserles_saff_transform(&mono.coeffs()[..=n], spec)
            }
        }
    }
}

/// `k!/Gamma(k+1+a)` for `k = 0..=n`, by the ratio `k/(k+a)`.
pub fn ultra_factors(alpha: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut s = 1.0 / gamma(1.0 + alpha);
    out.push(s);
    for k in 1..=n {
        s *= k as f64 / (k as f64 + alpha);
        out.push(s);
    }
    out
}

fn inverse_factorials(n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for k in 1..=n {
        let last = out[k - 1];
        out.push(last / k as f64);
    }
    out
}

fn expand<S: Scalar>(f: &Poly<S>, basis: Basis, factors: impl Fn(usize, &S) -> S) -> Result<Poly<S>> {
    let mono = f.to_monomial();
    let coeffs = mono.coeffs().iter().enumerate().map(|(k, a)| factors(k, a)).collect();
    Ok(Poly::new(basis, coeffs)?.to_monomial())
}

/// `sum a_k k!/Gamma(k+1+a) P_k^(a,a)(x)` in the monomial basis.
pub fn ultra_transform<S: Scalar>(f: &Poly<S>, alpha: f64) -> Result<Poly<S>> {
    check_jacobi_params(alpha, alpha)?;
    let ctx = f.ctx();
    // Accumulate k!/Gamma(k+1+a) in the working precision; only the
    // degree-independent 1/Gamma(1+a) comes from double precision.
    let n = f.coeffs().len();
    let mut scale = Vec::with_capacity(n);
    let mut s = S::lift(ctx, 1.0 / gamma(1.0 + alpha));
    for k in 0..n {
        if k > 0 {
            let kf = S::from_usize(ctx, k);
            s = s * kf.clone() / (kf + S::lift(ctx, alpha));
        }
        scale.push(s.clone());
    }
    expand(f, Basis::Ultraspherical { alpha }, |k, a| a.clone() * scale[k].clone())
}

/// `sum a_k P_k(x)`; the `a = 0` case of [`ultra_transform`].
pub fn legendre_transform<S: Scalar>(f: &Poly<S>) -> Result<Poly<S>> {
    ultra_transform(f, 0.0)
}

/// `sum a_k P_k^(a,b)(x)`.
pub fn jacobi_transform<S: Scalar>(f: &Poly<S>, alpha: f64, beta: f64) -> Result<Poly<S>> {
    check_jacobi_params(alpha, beta)?;
    expand(f, Basis::Jacobi { alpha, beta }, |_, a| a.clone())
}

/// `sum a_k P_k^(a,b)(x) / k!`.
pub fn jacobi_factorial_transform<S: Scalar>(f: &Poly<S>, alpha: f64, beta: f64) -> Result<Poly<S>> {
    check_jacobi_params(alpha, beta)?;
    let ctx = f.ctx();
    let n = f.coeffs().len();
    let mut inv = Vec::with_capacity(n);
    let mut s = S::one(ctx);
    for k in 0..n {
        if k > 0 {
            s = s / S::from_usize(ctx, k);
        }
        inv.push(s.clone());
    }
    expand(f, Basis::Jacobi { alpha, beta }, |k, a| a.clone() * inv[k].clone())
}

/// `sum q_k / (delta_k h_k) Q_k(x)` for monomial coefficients `q`.
///
/// Zeros of the input are taken in the source interval `(c, d)` where the
/// kernel `sum delta_k R_k(t) Q_k(x)` is sign regular in `t`; the image then
/// has its zeros in the target interval `(a, b)` of the family `Q_k`. The
/// `h_k` are norms under the family's weight, not the unweighted integral.
pub fn iserles_saff_transform(q: &[f64], spec: &IserlesSaffSpec) -> Result<Poly> {
    if q.is_empty() {
        return Err(Error::BadParameter("coefficient list is empty".into()));
    }
    let factors = spec.factors(q.len() - 1)?;
    let coeffs = q.iter().zip(&factors).map(|(a, s)| a * s).collect();
    Ok(Poly::new(spec.family, coeffs)?.to_monomial())
}

/// Per-degree ratio of a generic transform's factors to the ultraspherical
/// `k!/Gamma(k+1+a)` factors. A degree-independent positive ratio means the
/// two transforms differ only by an overall positive constant.
pub fn scaling_ratios(spec: &IserlesSaffSpec, alpha: f64, n: usize) -> Result<Vec<f64>> {
    let generic = spec.factors(n)?;
    Ok(generic
        .iter()
        .zip(ultra_factors(alpha, n))
        .map(|(g, u)| g / u)
        .collect())
}

/// Whether all ratios are equal to the first within relative `tol`.
pub fn is_degree_independent(ratios: &[f64], tol: f64) -> bool {
    let Some(&r0) = ratios.first() else {
        return true;
    };
    ratios.iter().all(|r| (r - r0).abs() <= tol * r0.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(p: &Poly, want: &[f64], tol: f64) -> bool {
        p.coeffs().len() == want.len() && p.coeffs().iter().zip(want).all(|(a, b)| (a - b).abs() <= tol)
    }

    #[test]
    fn ultra_examples() {
        let t = ultra_transform(&Poly::monomial(vec![0.0, 0.0, 1.0]), 0.0).unwrap();
        assert!(close(&t, &[-0.5, 0.0, 1.5], 1e-15));
        for &a in &[-0.5, 0.0, 0.7, 3.0] {
            let t = ultra_transform(&Poly::monomial(vec![2.5]), a).unwrap();
            assert!((t.coeffs()[0] - 2.5 / gamma(1.0 + a)).abs() < 1e-14);
        }
        // x^2 - x -> P_2 - P_1
        let t = ultra_transform(&Poly::monomial(vec![0.0, -1.0, 1.0]), 0.0).unwrap();
        assert!(close(&t, &[-0.5, -1.0, 1.5], 1e-15));
        assert!(ultra_transform(&Poly::monomial(vec![1.0]), -1.0).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert!(close(
            &legendre_transform(&Poly::monomial(vec![0.0, 1.0])).unwrap(),
            &[0.0, 1.0],
            0.0
        ));
        assert!(close(
            &legendre_transform(&Poly::monomial(vec![1.0])).unwrap(),
            &[1.0],
            0.0
        ));
        let t = legendre_transform(&Poly::monomial(vec![-0.25, 0.0, 1.0])).unwrap();
        assert!(close(&t, &[-0.75, 0.0, 1.5], 1e-15));
    }

    #[test]
    fn jacobi_examples() {
        for &(a, b) in &[(0.0, 0.0), (2.0, 3.0), (-0.5, 0.5)] {
            assert!(close(
                &jacobi_transform(&Poly::monomial(vec![1.0]), a, b).unwrap(),
                &[1.0],
                0.0
            ));
        }
        assert!(close(
            &jacobi_transform(&Poly::monomial(vec![0.0, 1.0]), 0.0, 0.0).unwrap(),
            &[0.0, 1.0],
            0.0
        ));
        let t = jacobi_transform(&Poly::monomial(vec![0.0, 0.0, 1.0]), 0.0, 0.0).unwrap();
        assert!(close(&t, &[-0.5, 0.0, 1.5], 1e-15));
        assert!(jacobi_transform(&Poly::monomial(vec![1.0]), 0.0, -1.0).is_err());
    }

    #[test]
    fn jacobi_factorial_examples() {
        let f = |c: Vec<f64>| jacobi_factorial_transform(&Poly::monomial(c), 0.0, 0.0).unwrap();
        assert!(close(&f(vec![1.0]), &[1.0], 0.0));
        assert!(close(&f(vec![0.0, 0.0, 1.0]), &[-0.25, 0.0, 0.75], 1e-15));
        assert!(close(&f(vec![0.0, 1.0, 1.0]), &[-0.25, 1.0, 0.75], 1e-15));
    }

    #[test]
    fn iserles_saff_examples() {
        let spec = IserlesSaffSpec {
            family: Basis::Ultraspherical { alpha: 0.0 },
            delta: vec![1.0, 3.0],
            h: vec![2.0, 2.0 / 3.0],
        };
        let t = iserles_saff_transform(&[1.0], &spec).unwrap();
        assert!(close(&t, &[0.5], 1e-15));
        let t = iserles_saff_transform(&[0.0, 1.0], &spec).unwrap();
        assert!(close(&t, &[0.0, 0.5], 1e-15));
        assert!(matches!(
            iserles_saff_transform(&[0.0, 1.0, 1.0], &spec),
            Err(Error::SpecIncomplete(2))
        ));
    }

    #[test]
    fn g2_delta_is_proportional_to_ultra_scaling() {
        for &a in &[-0.3, 0.0, 0.5, 1.0, 2.5] {
            let spec = IserlesSaffSpec::ultraspherical_g2_delta(a, 12).unwrap();
            let r = scaling_ratios(&spec, a, 12).unwrap();
            assert!(r[0] > 0.0);
            assert!(is_degree_independent(&r, 1e-12), "a={a}: {r:?}");
        }
    }

    #[test]
    fn linear_delta_is_proportional_only_for_legendre() {
        let spec = IserlesSaffSpec::ultraspherical_linear_delta(0.0, 10).unwrap();
        assert!(is_degree_independent(&scaling_ratios(&spec, 0.0, 10).unwrap(), 1e-12));
        let spec = IserlesSaffSpec::ultraspherical_linear_delta(1.0, 10).unwrap();
        let r = scaling_ratios(&spec, 1.0, 10).unwrap();
        assert!(r.iter().all(|x| *x > 0.0));
        assert!(!is_degree_independent(&r, 1e-6));
    }

    #[test]
    fn g2_delta_degenerates_at_minus_half() {
        assert!(IserlesSaffSpec::ultraspherical_g2_delta(-0.5, 3).is_err());
    }

    #[test]
    fn spec_dispatch_and_degree_cap() {
        let spec = TransformSpec::new(TransformKind::Legendre, 2).unwrap();
        assert!(spec.apply(&Poly::monomial(vec![0.0, 0.0, 0.0, 1.0])).is_err());
        let t = spec.apply(&Poly::monomial(vec![0.0, 0.0, 1.0])).unwrap();
        assert!(close(&t, &[-0.5, 0.0, 1.5], 1e-15));
        assert!(TransformSpec::new(TransformKind::Jacobi { alpha: -2.0, beta: 0.0 }, 3).is_err());
    }
}
