//! Taylor coefficients (in `t`, at `t = 0`) of the Jacobi and ultraspherical
//! generating functions and of the operator-derived kernel `G2`.

use serde::{Deserialize, Serialize};

use super::series::Series;
use crate::error::{Error, Result};
use crate::polycore::{check_jacobi_params, pochhammer};

pub const MAX_TAYLOR_ORDER: usize = 64;

/// Which generating function to expand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenFunSpec {
    /// `2^(a+b) / (rho (1 + t + rho)^b (1 - t + rho)^a)`, `rho = sqrt(1 - 2xt + t^2)`;
    /// coefficient `n` is `P_n^(a,b)(x)`.
    JacobiF { alpha: f64, beta: f64 },
    /// `(1 - 2xt + t^2)^(-a - 1/2)`; coefficient `n` is
    /// `(1+2a)_n / (1+a)_n * P_n^(a,a)(x)`.
    UltraG { alpha: f64 },
    /// `(2t d/dt + 2a + 1)` applied to `UltraG`, which is
    /// `(2a+1)(1 - t^2) / (1 - 2xt + t^2)^(a + 3/2)`.
    G2 { alpha: f64 },
}

impl GenFunSpec {
    fn validate(&self) -> Result<()> {
        match *self {
            GenFunSpec::JacobiF { alpha, beta } => check_jacobi_params(alpha, beta),
            GenFunSpec::UltraG { alpha } | GenFunSpec::G2 { alpha } => check_jacobi_params(alpha, alpha),
        }
    }
}

fn check_args(x: f64, order: usize) -> Result<()> {
    if !(x.abs() <= 1.0) {
        return Err(Error::BadParameter(format!("need |x| <= 1, got {x}")));
    }
    if order > MAX_TAYLOR_ORDER {
        return Err(Error::BadParameter(format!(
            "Taylor order {order} exceeds {MAX_TAYLOR_ORDER}"
        )));
    }
    Ok(())
}

/// Coefficients `0..=order` of the generating function at fixed `x`.
pub fn genfun_taylor(spec: GenFunSpec, x: f64, order: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    check_args(x, order)?;
    let len = order + 1;
    let quad = Series::new(vec![1.0, -2.0 * x, 1.0], len);
    let out = match spec {
        GenFunSpec::UltraG { alpha } => quad.pow(-alpha - 0.5)?,
        GenFunSpec::G2 { alpha } => {
            let damp = Series::new(vec![2.0 * alpha + 1.0, 0.0, -(2.0 * alpha + 1.0)], len);
            damp.mul(&quad.pow(-alpha - 1.5)?)
        }
        GenFunSpec::JacobiF { alpha, beta } => {
            let rho = quad.sqrt()?;
            let one_plus = Series::new(vec![1.0, 1.0], len).add(&rho);
            let one_minus = Series::new(vec![1.0, -1.0], len).add(&rho);
            rho.recip()?
                .mul(&one_plus.pow(-beta)?)
                .mul(&one_minus.pow(-alpha)?)
                .scale(2f64.powf(alpha + beta))
        }
    };
    Ok(out.into_coeffs())
}

/// Taylor coefficients of `G2` in `t`.
pub fn g2_taylor(x: f64, alpha: f64, order: usize) -> Result<Vec<f64>> {
    genfun_taylor(GenFunSpec::G2 { alpha }, x, order)
}

/// `(1+2a)_k / (1+a)_k`, the ultraspherical generating-function prefactor.
pub fn ultra_prefactor(alpha: f64, k: usize) -> f64 {
    pochhammer(1.0 + 2.0 * alpha, k) / pochhammer(1.0 + alpha, k)
}

/// Candidate per-degree multipliers of `(1+2a)_k/(1+a)_k P_k^(a,a)(x)` in
/// the `G2` expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum G2Form {
    /// `2k + 2a + 1`
    TwoKPlusTwoAlphaPlusOne,
    /// `2k + a + 1`
    TwoKPlusAlphaPlusOne,
}

impl G2Form {
    pub fn multiplier(self, k: usize, alpha: f64) -> f64 {
        match self {
            G2Form::TwoKPlusTwoAlphaPlusOne => 2.0 * k as f64 + 2.0 * alpha + 1.0,
            G2Form::TwoKPlusAlphaPlusOne => 2.0 * k as f64 + alpha + 1.0,
        }
    }
}

/// Outcome of comparing `G2` Taylor coefficients against both multiplier forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct G2FormCheck {
    pub alpha: f64,
    /// Max relative deviation for the `2k + 2a + 1` form.
    pub deviation_two_alpha: f64,
    /// Max relative deviation for the `2k + a + 1` form.
    pub deviation_one_alpha: f64,
    /// Form(s) matching within the tolerance used.
    pub supported: Vec<G2Form>,
}

/// Compares `g2_taylor` against both multiplier forms on the given sample
/// points, using `jacobi_poly` for `P_k^(a,a)`.
pub fn check_g2_form(alpha: f64, xs: &[f64], order: usize, tol: f64) -> Result<G2FormCheck> {
    let polys: Vec<_> = (0..=order)
        .map(|k| super::jacobi_poly(k, alpha, alpha))
        .collect::<Result<_>>()?;
    let mut dev = [0.0f64; 2];
    let forms = [G2Form::TwoKPlusTwoAlphaPlusOne, G2Form::TwoKPlusAlphaPlusOne];
    for &x in xs {
        let g2 = g2_taylor(x, alpha, order)?;
        for k in 0..=order {
            let base = ultra_prefactor(alpha, k) * polys[k].eval(&x);
            for (d, form) in dev.iter_mut().zip(forms) {
                let want = form.multiplier(k, alpha) * base;
                let scale = want.abs().max(g2[k].abs()).max(1e-300);
                let rel = if want == g2[k] {
                    0.0
                } else {
                    (g2[k] - want).abs() / scale
                };
                *d = d.max(rel);
            }
        }
    }
    let supported = forms
        .iter()
        .zip(dev)
        .filter(|(_, d)| *d <= tol)
        .map(|(f, _)| *f)
        .collect();
    Ok(G2FormCheck {
        alpha,
        deviation_two_alpha: dev[0],
        deviation_one_alpha: dev[1],
        supported,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ultra_g_examples() {
        let c = genfun_taylor(GenFunSpec::UltraG { alpha: 0.0 }, 0.0, 2).unwrap();
        assert_eq!(c, vec![1.0, 0.0, -0.5]);
        let c = genfun_taylor(GenFunSpec::UltraG { alpha: 0.0 }, 1.0, 3).unwrap();
        for v in c {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn jacobi_f_constant_term_is_one() {
        for &(a, b, x) in &[(0.0, 0.0, 0.3), (1.5, -0.5, -0.9), (3.0, 2.0, 0.0)] {
            let c = genfun_taylor(GenFunSpec::JacobiF { alpha: a, beta: b }, x, 4).unwrap();
            assert!((c[0] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn g2_examples() {
        assert_eq!(g2_taylor(0.0, 0.0, 0).unwrap(), vec![1.0]);
        for &x in &[-0.7, 0.1, 0.55] {
            let c = g2_taylor(x, 0.0, 1).unwrap();
            assert!((c[1] - 3.0 * x).abs() < 1e-15);
        }
        let c = g2_taylor(1.0, 0.0, 2).unwrap();
        assert!(c.iter().zip([1.0, 3.0, 5.0]).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn parameter_checks() {
        assert!(genfun_taylor(GenFunSpec::UltraG { alpha: -1.0 }, 0.0, 2).is_err());
        assert!(genfun_taylor(GenFunSpec::UltraG { alpha: 0.0 }, 1.5, 2).is_err());
        assert!(genfun_taylor(GenFunSpec::UltraG { alpha: 0.0 }, 0.0, 65).is_err());
    }
}
