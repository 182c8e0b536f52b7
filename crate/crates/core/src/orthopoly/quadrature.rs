//! Gauss-Jacobi rules by Golub-Welsch and the weighted inner product check.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::Result;
use crate::polycore::{check_jacobi_params, ln_gamma, Basis, Poly};

/// Nodes and weights of an `n`-point Gauss rule for `(1-x)^a (1+x)^b` on `(-1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, w)| w * f(x)).sum()
    }
}

/// Total mass `int (1-x)^a (1+x)^b dx`.
pub fn jacobi_weight_mass(alpha: f64, beta: f64) -> f64 {
    ((alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(alpha + beta + 2.0))
    .exp()
}

/// Golub-Welsch: eigen-decomposition of the symmetric tridiagonal Jacobi
/// matrix built from the monic recurrence coefficients of the weight.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    check_jacobi_params(alpha, beta)?;
    if n == 0 {
        return Ok(GaussRule {
            nodes: vec![],
            weights: vec![],
        });
    }
    let (a, b) = (alpha, beta);
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jm[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + a + b;
            let off2 = if j == 1.0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * j * (j + a) * (j + b) * (j + a + b) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = off2.sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jm);
    let mu0 = jacobi_weight_mass(alpha, beta);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// `int_{-1}^{1} P_n^(a,b) P_m^(a,b) (1-x)^a (1+x)^b dx` with an
/// `(n + m + 4)`-point Gauss-Jacobi rule, exact for the integrand degree.
pub fn quad_inner_product(n: usize, m: usize, alpha: f64, beta: f64) -> Result<f64> {
    let rule = gauss_jacobi(n + m + 4, alpha, beta)?;
    let basis = Basis::Jacobi { alpha, beta };
    let pn = Poly::new(basis, unit_vector(n))?;
    let pm = Poly::new(basis, unit_vector(m))?;
    Ok(rule.integrate(|x| pn.eval(&x) * pm.eval(&x)))
}

fn unit_vector(k: usize) -> Vec<f64> {
    let mut v = vec![0.0; k + 1];
    v[k] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_on_monomials() {
        let r = gauss_jacobi(5, 0.0, 0.0).unwrap();
        for k in 0..10 {
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((r.integrate(|x| x.powi(k)) - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn chebyshev_weight_mass() {
        // (1-x^2)^(-1/2) integrates to pi.
        let r = gauss_jacobi(8, -0.5, -0.5).unwrap();
        assert!((r.weights.iter().sum::<f64>() - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn inner_product_examples() {
        assert!((quad_inner_product(0, 0, 0.0, 0.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(quad_inner_product(1, 0, 0.0, 0.0).unwrap().abs() < 1e-14);
        assert!((quad_inner_product(1, 1, 0.0, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-14);
    }
}
