use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orthopoly::jacobi_step;
use crate::scalar::{Ext, Scalar};

/// Basis a coefficient vector refers to.
///
/// `Ultraspherical { alpha }` is the symmetric Jacobi family `P_k^(alpha, alpha)`
/// in Jacobi normalization, not the Gegenbauer `C_k^lambda` normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Monomial,
    Ultraspherical { alpha: f64 },
    Jacobi { alpha: f64, beta: f64 },
}

impl Basis {
    /// `(alpha, beta)` for the orthogonal families.
    pub fn jacobi_params(&self) -> Option<(f64, f64)> {
        match *self {
            Basis::Monomial => None,
            Basis::Ultraspherical { alpha } => Some((alpha, alpha)),
            Basis::Jacobi { alpha, beta } => Some((alpha, beta)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((a, b)) = self.jacobi_params() {
            check_jacobi_params(a, b)?;
        }
        Ok(())
    }
}

pub(crate) fn check_jacobi_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0) || !(beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::BadParameter(format!(
            "Jacobi parameters must exceed -1, got alpha={alpha}, beta={beta}"
        )));
    }
    Ok(())
}

/// Real polynomial as a coefficient vector over a tagged basis. Index `k`
/// holds the coefficient of the degree-`k` basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S: Scalar = f64> {
    basis: Basis,
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(basis: Basis, coeffs: Vec<S>) -> Result<Self> {
        basis.validate()?;
        if coeffs.is_empty() {
            return Err(Error::BadParameter("coefficient list is empty".into()));
        }
        Ok(Poly { basis, coeffs })
    }

    /// Monomial-basis polynomial `sum c_k x^k`.
    ///
    /// # Panics
    /// Panics if `coeffs` is empty.
    pub fn monomial(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "coefficient list is empty");
        Poly {
            basis: Basis::Monomial,
            coeffs,
        }
    }

    /// Monic `prod (x - r)`.
    pub fn from_roots(ctx: S::Ctx, roots: &[S]) -> Self {
        let mut c = vec![S::one(ctx)];
        for r in roots {
            let mut next = vec![S::zero(ctx); c.len() + 1];
            for (k, ck) in c.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + ck.clone();
                next[k] = next[k].clone() - r.clone() * ck.clone();
            }
            c = next;
        }
        Poly::monomial(c)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn ctx(&self) -> S::Ctx {
        self.coeffs[0].ctx()
    }

    /// Highest index with a nonzero coefficient; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn leading(&self) -> &S {
        &self.coeffs[self.degree()]
    }

    /// Drops trailing coefficients with `|c| <= tau * max |c|`.
    pub fn trim(&self, tau: f64) -> Self {
        let scale = self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        let keep = self
            .coeffs
            .iter()
            .rposition(|c| c.to_f64().abs() > tau * scale)
            .map_or(1, |k| k + 1);
        Poly {
            basis: self.basis,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Sum of two polynomials over the same basis.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::BadParameter(
                "cannot add polynomials over different bases".into(),
            ));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = S::zero(self.ctx());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(|| zero.clone());
                let b = other.coeffs.get(k).cloned().unwrap_or_else(|| zero.clone());
                a + b
            })
            .collect();
        Ok(Poly {
            basis: self.basis,
            coeffs,
        })
    }

    /// Product of two monomial-basis polynomials.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.basis != Basis::Monomial || other.basis != Basis::Monomial {
            return Err(Error::BadParameter("multiplication needs monomial basis".into()));
        }
        let mut out = vec![S::zero(self.ctx()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Poly::monomial(out))
    }

    /// Evaluates at `x`: Horner for monomials, Clenshaw over the Jacobi
    /// three-term recurrence otherwise.
    pub fn eval(&self, x: &S) -> S {
        match self.basis.jacobi_params() {
            None => horner(&self.coeffs, x),
            Some((a, b)) => clenshaw_jacobi(&self.coeffs, a, b, x),
        }
    }

    /// Same polynomial function re-expressed in the monomial basis.
    pub fn to_monomial(&self) -> Self {
        let Some((alpha, beta)) = self.basis.jacobi_params() else {
            return self.clone();
        };
        let ctx = self.ctx();
        let n = self.coeffs.len();
        let mut out = vec![S::zero(ctx); n];
        let mut prev: Vec<S> = Vec::new();
        let mut cur: Vec<S> = vec![S::one(ctx)];
        for k in 0..n {
            if k > 0 {
                let next = jacobi_next(&cur, &prev, k, alpha, beta, ctx);
                prev = std::mem::replace(&mut cur, next);
            }
            let ck = &self.coeffs[k];
            if ck.is_zero() {
                continue;
            }
            for (j, pj) in cur.iter().enumerate() {
                out[j] = out[j].clone() + ck.clone() * pj.clone();
            }
        }
        Poly::monomial(out)
    }

    pub fn to_f64(&self) -> Poly<f64> {
        Poly {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
        }
    }
}

impl Poly<f64> {
    pub fn lift(&self, bits: usize) -> Poly<Ext> {
        Poly {
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|&c| Ext::new(bits, c)).collect(),
        }
    }

    /// `(x - 1)^n (x + 1)^m`, exact in any precision.
    pub fn boundary_family(n: usize, m: usize) -> Self {
        boundary_family(n, m, ())
    }
}

/// `(x - 1)^n (x + 1)^m` in monomial basis at the given precision.
pub fn boundary_family<S: Scalar>(n: usize, m: usize, ctx: S::Ctx) -> Poly<S> {
    let mut roots = vec![S::one(ctx); n];
    roots.extend(std::iter::repeat_n(-S::one(ctx), m));
    Poly::from_roots(ctx, &roots)
}

/// Monomial coefficients of `P_k` from those of `P_{k-1}` and `P_{k-2}`.
pub(crate) fn jacobi_next<S: Scalar>(cur: &[S], prev: &[S], k: usize, alpha: f64, beta: f64, ctx: S::Ctx) -> Vec<S> {
    let (a, b, c) = jacobi_step::<S>(k, alpha, beta, ctx);
    let mut next = vec![S::zero(ctx); cur.len() + 1];
    for (j, pj) in cur.iter().enumerate() {
        next[j + 1] = next[j + 1].clone() + a.clone() * pj.clone();
        next[j] = next[j].clone() + b.clone() * pj.clone();
    }
    if !c.is_zero() {
        for (j, pj) in prev.iter().enumerate() {
            next[j] = next[j].clone() - c.clone() * pj.clone();
        }
    }
    next
}

pub(crate) fn horner<S: Scalar>(coeffs: &[S], x: &S) -> S {
    let mut acc = coeffs.last().cloned().expect("non-empty coefficients");
    for c in coeffs.iter().rev().skip(1) {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

fn clenshaw_jacobi<S: Scalar>(coeffs: &[S], alpha: f64, beta: f64, x: &S) -> S {
    let ctx = x.ctx();
    let n = coeffs.len();
    // b_k = c_k + (A_{k+1} x + B_{k+1}) b_{k+1} - C_{k+2} b_{k+2}; result b_0.
    let mut b1 = S::zero(ctx);
    let mut b2 = S::zero(ctx);
    for k in (0..n).rev() {
        let (a1, bb1, _) = jacobi_step::<S>(k + 1, alpha, beta, ctx);
        let (_, _, c2) = jacobi_step::<S>(k + 2, alpha, beta, ctx);
        let bk = coeffs[k].clone() + (a1 * x.clone() + bb1) * b1.clone() - c2 * b2;
        b2 = b1;
        b1 = bk;
    }
    b1
}

/// Free-function form of [`Poly::eval`].
pub fn poly_eval<S: Scalar>(p: &Poly<S>, x: &S) -> S {
    p.eval(x)
}

/// Free-function form of [`Poly::to_monomial`].
pub fn basis_to_monomial<S: Scalar>(p: &Poly<S>) -> Poly<S> {
    p.to_monomial()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn legendre(coeffs: Vec<f64>) -> Poly {
        Poly::new(Basis::Ultraspherical { alpha: 0.0 }, coeffs).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Poly::monomial(vec![-1.0, 0.0, 1.0]).eval(&2.0), 3.0);
        assert_eq!(Poly::monomial(vec![0.0]).eval(&0.3), 0.0);
        assert!((legendre(vec![0.0, 0.0, 1.0]).eval(&1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_to_monomial() {
        assert_eq!(legendre(vec![0.0, 1.0]).to_monomial().coeffs(), &[0.0, 1.0]);
        let p2 = legendre(vec![0.0, 0.0, 1.0]).to_monomial();
        let want = [-0.5, 0.0, 1.5];
        for (a, b) in p2.coeffs().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let m = Poly::monomial(vec![1.0, -2.0, 0.5]);
        assert_eq!(m.to_monomial(), m);
    }

    #[test]
    fn conversion_agrees_with_clenshaw() {
        for &(a, b) in &[(0.0, 0.0), (0.5, -0.5), (2.0, 1.0), (-0.7, 3.0)] {
            let p = Poly::new(
                Basis::Jacobi { alpha: a, beta: b },
                vec![0.3, -1.1, 0.7, 2.0, -0.4, 0.9, 0.05, -1.3],
            )
            .unwrap();
            let m = p.to_monomial();
            for i in 0..50 {
                let x = -1.0 + 2.0 * i as f64 / 49.0;
                let (u, v) = (p.eval(&x), m.eval(&x));
                assert!((u - v).abs() <= 1e-10 * (1.0 + u.abs()), "({a},{b}) x={x}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Poly::new(Basis::Ultraspherical { alpha: -1.0 }, vec![1.0]).is_err());
        assert!(Poly::new(Basis::Jacobi { alpha: 0.0, beta: -2.0 }, vec![1.0]).is_err());
        assert!(Poly::<f64>::new(Basis::Monomial, vec![]).is_err());
    }

    #[test]
    fn degree_and_trim() {
        let p = Poly::monomial(vec![1.0, 2.0, 1e-14, 0.0]);
        assert_eq!(p.degree(), 2);
        assert_eq!(p.trim(1e-12).coeffs().len(), 2);
        assert_eq!(Poly::monomial(vec![0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn boundary_family_coefficients() {
        // (x-1)^2 (x+1) = x^3 - x^2 - x + 1
        assert_eq!(Poly::boundary_family(2, 1).coeffs(), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn extended_matches_double() {
        let p = Poly::new(Basis::Jacobi { alpha: 1.0, beta: 2.0 }, vec![0.5, 1.0, -2.0, 0.25]).unwrap();
        let e = p.lift(200).to_monomial().to_f64();
        let d = p.to_monomial();
        for (a, b) in e.coeffs().iter().zip(d.coeffs()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
