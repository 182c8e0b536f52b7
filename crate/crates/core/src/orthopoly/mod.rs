//! Jacobi, ultraspherical and Legendre polynomials; their generating-function
//! Taylor oracles; orthogonality constants and their quadrature check.
//!
//! Polynomials are built from the three-term recurrence
//! `P_n = (A_n x + B_n) P_{n-1} - C_n P_{n-2}`; the generating functions are
//! expanded independently by power-series arithmetic and serve as the
//! reference the recurrence is tested against.

mod genfun;
mod quadrature;
mod series;

pub use genfun::{
    check_g2_form, g2_taylor, genfun_taylor, ultra_prefactor, G2Form, G2FormCheck, GenFunSpec, MAX_TAYLOR_ORDER,
};
pub use quadrature::{gauss_jacobi, jacobi_weight_mass, quad_inner_product, GaussRule};
pub use series::Series;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{check_jacobi_params, jacobi_next, ln_factorial, ln_gamma, Poly};
use crate::scalar::Scalar;

/// Largest degree `jacobi_poly` will build.
pub const MAX_DEGREE: usize = 64;

/// `(A_n, B_n, C_n)` with `P_n = (A_n x + B_n) P_{n-1} - C_n P_{n-2}`, `n >= 1`.
pub fn jacobi_step<S: Scalar>(n: usize, alpha: f64, beta: f64, ctx: S::Ctx) -> (S, S, S) {
    let a = S::lift(ctx, alpha);
    let b = S::lift(ctx, beta);
    let two = S::lift(ctx, 2.0);
    if n == 1 {
        let a1 = (a.clone() + b.clone() + two.clone()) / two.clone();
        let b1 = (a - b) / two;
        return (a1, b1, S::zero(ctx));
    }
    let nn = S::from_usize(ctx, n);
    let s = two.clone() * nn.clone() + a.clone() + b.clone();
    let s1 = s.clone() - S::one(ctx);
    let s2 = s.clone() - two.clone();
    let denom = two.clone() * nn.clone() * (nn.clone() + a.clone() + b.clone()) * s2.clone();
    let big_a = s1.clone() * s.clone() * s2 / denom.clone();
    let big_b = s1 * (a.clone() * a.clone() - b.clone() * b.clone()) / denom.clone();
    let one = S::one(ctx);
    let big_c = two * (nn.clone() + a - one.clone()) * (nn + b - one) * s / denom;
    (big_a, big_b, big_c)
}

/// Monomial coefficients of `P_n^(a,b)` in the given precision.
pub fn jacobi_poly_in<S: Scalar>(n: usize, alpha: f64, beta: f64, ctx: S::Ctx) -> Result<Poly<S>> {
    check_jacobi_params(alpha, beta)?;
    if n > MAX_DEGREE {
        return Err(Error::BadParameter(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    let mut prev: Vec<S> = Vec::new();
    let mut cur = vec![S::one(ctx)];
    for k in 1..=n {
        let next = jacobi_next(&cur, &prev, k, alpha, beta, ctx);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(Poly::monomial(cur))
}

/// All of `P_0^(a,b) .. P_n^(a,b)` as monomial polynomials.
pub fn jacobi_family_in<S: Scalar>(n: usize, alpha: f64, beta: f64, ctx: S::Ctx) -> Result<Vec<Poly<S>>> {
    check_jacobi_params(alpha, beta)?;
    if n > MAX_DEGREE {
        return Err(Error::BadParameter(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    let mut out = vec![Poly::monomial(vec![S::one(ctx)])];
    let mut prev: Vec<S> = Vec::new();
    let mut cur = vec![S::one(ctx)];
    for k in 1..=n {
        let next = jacobi_next(&cur, &prev, k, alpha, beta, ctx);
        prev = std::mem::replace(&mut cur, next);
        out.push(Poly::monomial(cur.clone()));
    }
    Ok(out)
}

/// `P_n^(a,b)` in the monomial basis.
pub fn jacobi_poly(n: usize, alpha: f64, beta: f64) -> Result<Poly> {
    jacobi_poly_in::<f64>(n, alpha, beta, ())
}

/// The squared norm `h_n` of `P_n^(a,b)` under the weight `(1-x)^a (1+x)^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrthoConstant {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
}

/// `h_n = 2^(1+a+b) G(1+a+n) G(1+b+n) / ((2n+1+a+b) n! G(1+a+b+n))`, in the
/// log domain.
pub fn ortho_constant(n: usize, alpha: f64, beta: f64) -> Result<OrthoConstant> {
    check_jacobi_params(alpha, beta)?;
    let (a, b, nf) = (alpha, beta, n as f64);
    let ln2 = std::f64::consts::LN_2;
    let ln_h = if n == 0 {
        // (1+a+b) G(1+a+b) = G(2+a+b) keeps a+b = -1 finite.
        (1.0 + a + b) * ln2 + ln_gamma(1.0 + a) + ln_gamma(1.0 + b) - ln_gamma(2.0 + a + b)
    } else {
        (1.0 + a + b) * ln2 + ln_gamma(1.0 + a + nf) + ln_gamma(1.0 + b + nf)
            - (2.0 * nf + 1.0 + a + b).ln()
            - ln_factorial(n)
            - ln_gamma(1.0 + a + b + nf)
    };
    Ok(OrthoConstant {
        n,
        alpha,
        beta,
        h: ln_h.exp(),
    })
}

/// The symmetric-case constant as displayed in the ultraspherical proof,
/// `2^(1+a) G(1+a+k)^2 / (k! (2k+2a+1) G(1+2a+2k))`. Kept only so the
/// harness can compare it with quadrature.
pub fn displayed_symmetric_constant(k: usize, alpha: f64) -> f64 {
    let kf = k as f64;
    ((1.0 + alpha) * std::f64::consts::LN_2 + 2.0 * ln_gamma(1.0 + alpha + kf)
        - ln_factorial(k)
        - (2.0 * kf + 2.0 * alpha + 1.0).ln()
        - ln_gamma(1.0 + 2.0 * alpha + 2.0 * kf))
    .exp()
}
