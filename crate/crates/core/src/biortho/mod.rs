//! Biorthogonal polynomials with respect to a kernel `w(x, t)` on `(a, b)`.
//!
//! Given distinct nodes `t_1 < ... < t_m`, the monic `p_m` is the polynomial
//! of degree `m` with `int_a^b p_m(x) w(x, t_l) dx = 0` for every node. It
//! exists and is unique when the moment determinant `D_m` is nonzero.

mod quad;

pub use quad::{integrate, integrate_vec};

use crate::error::{Error, Result};
use crate::linalg;
use crate::orthopoly::gauss_jacobi;
use crate::polycore::{classify_roots, poly_roots, Poly, RootClass, RootReport};
use crate::scalar::{Ext, PrecisionPolicy, Scalar};
use crate::signreg::{Factor, KernelFamily, KernelSpec};
use crate::transforms::ultra_transform;

/// Relative absolute-error target for moments.
pub const MOMENT_TOL: f64 = 1e-10;
pub const MAX_MOMENT_ORDER: usize = 30;
pub const MAX_NODES: usize = 8;
/// Target for the divided-difference moments, relative to the integral of
/// the absolute integrand.
const DD_TOL: f64 = 1e-13;
const DD_BASE_BITS: usize = 128;

fn check_interval(kernel: &KernelSpec, (a, b): (f64, f64)) -> Result<()> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::BadInterval { lo: a, hi: b });
    }
    let d = kernel.domain.x;
    if a < d.0 || b > d.1 {
        return Err(Error::BadParameter(format!(
            "interval ({a}, {b}) leaves the kernel's x-range ({}, {})",
            d.0, d.1
        )));
    }
    Ok(())
}

fn check_node(kernel: &KernelSpec, t: f64) -> Result<()> {
    let d = kernel.domain.y;
    if t > d.0 && t < d.1 {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x: f64::NAN, y: t })
    }
}

/// Weight exponents when the kernel carries an endpoint-singular Jacobi
/// weight on `(-1, 1)`; such moments use Gauss-Jacobi rules instead.
fn singular_weight(kernel: &KernelSpec, interval: (f64, f64)) -> Option<(&KernelSpec, f64, f64, &Factor)> {
    if let KernelFamily::FactorWrapped {
        base,
        phi: Factor::JacobiWeight { alpha, beta },
        psi,
    } = &kernel.family
    {
        if interval == (-1.0, 1.0) && alpha.min(*beta) < 0.0 {
            return Some((base, *alpha, *beta, psi));
        }
    }
    None
}

fn weighted_integral(f: impl Fn(f64) -> f64, alpha: f64, beta: f64) -> Result<f64> {
    let mut n = 32;
    let mut prev = gauss_jacobi(n, alpha, beta)?.integrate(&f);
    while n < 512 {
        n *= 2;
        let next = gauss_jacobi(n, alpha, beta)?.integrate(&f);
        let err = (next - prev).abs();
        if err <= MOMENT_TOL * (1.0 + next.abs()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureFailure { estimate: f64::NAN })
}

/// `int_a^b p(x) w(x, t) dx` for a monomial-basis `p`.
fn kernel_integral(kernel: &KernelSpec, coeffs: &[f64], t: f64, interval: (f64, f64)) -> Result<f64> {
    let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    if let Some((base, a, b, psi)) = singular_weight(kernel, interval) {
        let scale = psi.eval(&t);
        return Ok(scale * weighted_integral(|x| p(x) * base.eval_in(&x, &t), a, b)?);
    }
    let (v, _) = integrate(|x| p(x) * kernel.eval_in(&x, &t), interval.0, interval.1, MOMENT_TOL)?;
    Ok(v)
}

/// `I_k(t) = int_a^b x^k w(x, t) dx`.
pub fn moment(kernel: &KernelSpec, k: usize, t: f64, interval: (f64, f64)) -> Result<f64> {
    if k > MAX_MOMENT_ORDER {
        return Err(Error::BadParameter(format!(
            "moment order {k} exceeds {MAX_MOMENT_ORDER}"
        )));
    }
    check_interval(kernel, interval)?;
    check_node(kernel, t)?;
    let mut e = vec![0.0; k + 1];
    e[k] = 1.0;
    kernel_integral(kernel, &e, t, interval)
}

fn check_nodes(kernel: &KernelSpec, nodes: &[f64]) -> Result<()> {
    if nodes.len() > MAX_NODES {
        return Err(Error::BadParameter(format!("at most {MAX_NODES} nodes")));
    }
    if nodes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::BadNodes);
    }
    nodes.iter().try_for_each(|&t| check_node(kernel, t))
}

/// Working precision for divided differences: enough headroom to absorb
/// the `1/gap` amplification at each of the `m - 1` levels.
fn dd_bits(nodes: &[f64]) -> usize {
    let gap = nodes.windows(2).map(|w| w[1] - w[0]).fold(1.0, f64::min);
    let levels = nodes.len().saturating_sub(1) as f64;
    DD_BASE_BITS + (levels * (1.0 / gap).log2().max(0.0)).ceil() as usize
}

/// Newton divided differences `w(x; t_1..t_j)`, `j = 1..=m`, of the values
/// `w(x, t_l)`.
fn divided_differences(mut d: Vec<Ext>, ts: &[Ext]) -> Vec<f64> {
    let m = d.len();
    for j in 1..m {
        for l in (j..m).rev() {
            d[l] = (d[l].clone() - d[l - 1].clone()) / (ts[l].clone() - ts[l - j].clone());
        }
    }
    d.iter().map(Scalar::to_f64).collect()
}

fn weighted_vec(f: impl Fn(f64) -> Vec<f64>, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    let apply = |n: usize| -> Result<(Vec<f64>, Vec<f64>)> {
        let rule = gauss_jacobi(n, alpha, beta)?;
        let mut sum: Vec<f64> = Vec::new();
        let mut abs: Vec<f64> = Vec::new();
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(*x);
            sum.resize(v.len(), 0.0);
            abs.resize(v.len(), 0.0);
            for (i, vi) in v.iter().enumerate() {
                sum[i] += w * vi;
                abs[i] += w * vi.abs();
            }
        }
        Ok((sum, abs))
    };
    let mut n = 32;
    let (mut prev, _) = apply(n)?;
    while n < 512 {
        n *= 2;
        let (next, abs) = apply(n)?;
        let ok = next
            .iter()
            .zip(&prev)
            .zip(&abs)
            .all(|((a, b), s)| (a - b).abs() <= DD_TOL * s);
        if ok {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureFailure { estimate: f64::NAN })
}

/// `A[j][k] = int x^k w(x; t_1..t_{j+1}) dx` for `j < m`, `k <= m`.
///
/// The conditions `int p w(x, t_l) dx = 0` for all nodes are equivalent to
/// `int p w(x; t_1..t_j) dx = 0` for `j = 1..=m`. The divided-difference
/// form stays well conditioned when nodes cluster, provided the kernel
/// values are differenced in extended precision.
fn dd_table(kernel: &KernelSpec, nodes: &[f64], interval: (f64, f64)) -> Result<Vec<Vec<f64>>> {
    check_interval(kernel, interval)?;
    check_nodes(kernel, nodes)?;
    let m = nodes.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let bits = dd_bits(nodes);
    let ts: Vec<Ext> = nodes.iter().map(|&t| Ext::new(bits, t)).collect();
    let row = |x: f64, base: &KernelSpec, psi: Option<&Factor>| -> Vec<f64> {
        let xe = Ext::new(bits, x);
        let vals = ts
            .iter()
            .map(|t| {
                let v = base.eval_in(&xe, t);
                match psi {
                    Some(p) => p.eval(t) * v,
                    None => v,
                }
            })
            .collect();
        let mut out = Vec::with_capacity(m * (m + 1));
        for d in divided_differences(vals, &ts) {
            let mut xp = 1.0;
            for _ in 0..=m {
                out.push(d * xp);
                xp *= x;
            }
        }
        out
    };
    let flat = match singular_weight(kernel, interval) {
        Some((base, a, b, psi)) => weighted_vec(|x| row(x, base, Some(psi)), a, b)?,
        None => integrate_vec(|x| row(x, kernel, None), interval.0, interval.1, DD_TOL)?,
    };
    Ok(flat.chunks(m + 1).map(<[f64]>::to_vec).collect())
}

/// `prod_{i<j} (t_j - t_i)`
fn vandermonde(nodes: &[f64]) -> f64 {
    let mut v = 1.0;
    for (j, tj) in nodes.iter().enumerate() {
        for ti in &nodes[..j] {
            v *= tj - ti;
        }
    }
    v
}

/// `I_k(t_l)` for `k = 0..=m`, rebuilt from the divided-difference table by
/// Newton interpolation at the nodes.
fn moments_from_dd(table: &[Vec<f64>], nodes: &[f64]) -> Vec<Vec<f64>> {
    let m = nodes.len();
    (0..=m)
        .map(|k| {
            (0..m)
                .map(|l| {
                    let mut w = 1.0;
                    let mut s = 0.0;
                    for j in 0..=l {
                        s += table[j][k] * w;
                        w *= nodes[l] - nodes[j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn row_scale(rows: &[Vec<f64>]) -> f64 {
    rows.iter()
        .map(|r| r.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
        .product()
}

fn square(table: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = table.len();
    table.iter().map(|r| r[..m].to_vec()).collect()
}

/// `D_m = det[I_k(t_l)]`, `k = 0..m-1`, `l = 1..m`.
pub fn regularity_det(kernel: &KernelSpec, nodes: &[f64], interval: (f64, f64)) -> Result<f64> {
    let table = dd_table(kernel, nodes, interval)?;
    if table.is_empty() {
        return Ok(1.0);
    }
    Ok(linalg::det(square(&table)) * vandermonde(nodes))
}

/// A constructed biorthogonal polynomial together with the data that
/// determines it.
#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    pub nodes: Vec<f64>,
    pub kernel: KernelSpec,
    pub interval: (f64, f64),
    /// `[I_k(t_l)]` with row `k = 0..m-1` and column `l`.
    pub moment_matrix: Vec<Vec<f64>>,
    /// `I_m(t_l)` for each node.
    pub top_moments: Vec<f64>,
    pub regularity_det: f64,
    /// Monic `p_m` in the monomial basis.
    pub poly: Poly,
}

impl BiorthogonalSystem {
    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    /// `|int p_m(x) w(x, t_l) dx|` for each node, by fresh quadrature.
    pub fn orthogonality_residuals(&self) -> Result<Vec<f64>> {
        self.nodes
            .iter()
            .map(|&t| kernel_integral(&self.kernel, self.poly.coeffs(), t, self.interval).map(f64::abs))
            .collect()
    }

    /// Largest `|I_k(t_l)|` over the table, the natural scale for residuals.
    pub fn moment_scale(&self) -> f64 {
        self.moment_matrix
            .iter()
            .flatten()
            .chain(&self.top_moments)
            .fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

/// Solves for the monic `p_m` annihilated by the kernel at every node.
pub fn biorthogonal_poly(
    kernel: &KernelSpec,
    nodes: &[f64],
    interval: (f64, f64),
    policy: &PrecisionPolicy,
) -> Result<BiorthogonalSystem> {
    let policy = policy.validate()?;
    let table = dd_table(kernel, nodes, interval)?;
    let m = nodes.len();
    let mut moments = moments_from_dd(&table, nodes);
    let top_moments = moments.pop().unwrap_or_default();
    if m == 0 {
        return Ok(BiorthogonalSystem {
            nodes: Vec::new(),
            kernel: kernel.clone(),
            interval,
            moment_matrix: Vec::new(),
            top_moments,
            regularity_det: 1.0,
            poly: Poly::monomial(vec![1.0]),
        });
    }
    let system = square(&table);
    let reduced = linalg::det(system.clone());
    let det = reduced * vandermonde(nodes);
    if !(reduced.abs() > policy.tau_det * row_scale(&system)) {
        return Err(Error::SingularSystem { det });
    }
    let rhs: Vec<f64> = table.iter().map(|r| -r[m]).collect();
    let mut coeffs = linalg::solve(system, rhs).ok_or(Error::SingularSystem { det })?;
    coeffs.push(1.0);
    Ok(BiorthogonalSystem {
        nodes: nodes.to_vec(),
        kernel: kernel.clone(),
        interval,
        moment_matrix: moments,
        top_moments,
        regularity_det: det,
        poly: Poly::monomial(coeffs),
    })
}

/// Roots of `p_m` classified against the open interval with the policy's
/// root tolerance.
pub fn zeros_in_interval_check(system: &BiorthogonalSystem, policy: &PrecisionPolicy) -> Result<RootReport> {
    let roots = if system.degree() == 0 {
        Vec::new()
    } else {
        poly_roots(&system.poly)?
    };
    classify_roots(&roots, system.interval, policy.tau_root)
}

/// `G_2(x, t) (1 - x^2)^alpha` on `(-1, 1)^2`: the kernel whose biorthogonal
/// polynomials at the zeros of `f` coincide with the ultraspherical transform
/// of `f`.
pub fn equivalence_kernel(alpha: f64) -> Result<KernelSpec> {
    if alpha == -0.5 {
        return Err(Error::BadParameter("G2 vanishes identically at alpha = -1/2".into()));
    }
    let g2 = KernelSpec::g2(alpha)?;
    if alpha == 0.0 {
        return Ok(g2);
    }
    KernelSpec::factored(g2, Factor::JacobiWeight { alpha, beta: alpha }, Factor::Constant(1.0))
}

fn monic(coeffs: &[f64]) -> Vec<f64> {
    let lead = *coeffs.last().unwrap();
    coeffs.iter().map(|c| c / lead).collect()
}

/// Biorthogonal polynomial at the zeros of `f` next to the ultraspherical
/// transform of `f`.
#[derive(Debug, Clone)]
pub struct Equivalence {
    pub system: BiorthogonalSystem,
    /// Monic transform coefficients.
    pub transform: Vec<f64>,
    /// Largest coefficient gap relative to the transform's largest coefficient.
    pub deviation: f64,
}

pub fn transform_equivalence(f: &Poly, alpha: f64) -> Result<Equivalence> {
    let f = f.to_monomial().trim(0.0);
    let n = f.degree();
    let kernel = equivalence_kernel(alpha)?;
    let policy = PrecisionPolicy::double();
    if n == 0 {
        return Ok(Equivalence {
            system: biorthogonal_poly(&kernel, &[], (-1.0, 1.0), &policy)?,
            transform: vec![1.0],
            deviation: 0.0,
        });
    }
    if n > MAX_NODES {
        return Err(Error::BadParameter(format!("degree {n} exceeds {MAX_NODES}")));
    }
    let roots = poly_roots(&f)?;
    let report = classify_roots(&roots, (-1.0, 1.0), policy.tau_root)?;
    if report.classification != RootClass::AllStrictlyInside || report.min_separation() <= policy.tau_root {
        return Err(Error::BadParameter("input needs distinct real zeros in (-1, 1)".into()));
    }
    let mut nodes: Vec<f64> = roots.iter().map(|z| z.re).collect();
    nodes.sort_by(f64::total_cmp);
    let system = biorthogonal_poly(&kernel, &nodes, (-1.0, 1.0), &policy)?;
    let transform = monic(ultra_transform(&f, alpha)?.to_monomial().coeffs());
    let scale = transform.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let deviation = system
        .poly
        .coeffs()
        .iter()
        .zip(&transform)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale;
    Ok(Equivalence {
        system,
        transform,
        deviation,
    })
}

/// Largest coefficient gap between the monic biorthogonal polynomial at the
/// zeros of `f` and the monic ultraspherical transform of `f`, relative to
/// the transform's largest coefficient.
pub fn transform_equivalence_check(f: &Poly, alpha: f64) -> Result<f64> {
    transform_equivalence(f, alpha).map(|e| e.deviation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn unit() -> KernelSpec {
        KernelSpec::constant(1.0)
    }

    fn exp01() -> (KernelSpec, (f64, f64)) {
        (KernelSpec::exp_xy(), (0.0, 1.0))
    }

    #[test]
    fn moment_examples() {
        assert!((moment(&unit(), 0, 0.3, (-1.0, 1.0)).unwrap() - 2.0).abs() < 1e-14);
        assert!(moment(&unit(), 1, 0.3, (-1.0, 1.0)).unwrap().abs() < 1e-14);
        let (k, iv) = exp01();
        assert!((moment(&k, 0, 1.0, iv).unwrap() - (E - 1.0)).abs() < 1e-13);
        assert!((moment(&k, 1, 1.0, iv).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn regularity_examples() {
        assert!((regularity_det(&unit(), &[0.2], (-1.0, 1.0)).unwrap() - 2.0).abs() < 1e-14);
        let (k, iv) = exp01();
        let d = regularity_det(&k, &[0.0, 1.0], iv).unwrap();
        assert!((d - (1.0 - (E - 1.0) / 2.0)).abs() < 1e-12);
        assert!(matches!(regularity_det(&k, &[0.5, 0.5], iv), Err(Error::BadNodes)));
    }

    #[test]
    fn biorthogonal_examples() {
        let pol = PrecisionPolicy::double();
        let s = biorthogonal_poly(&unit(), &[], (-1.0, 1.0), &pol).unwrap();
        assert_eq!(s.poly.coeffs(), &[1.0]);
        let s = biorthogonal_poly(&unit(), &[0.4], (-1.0, 1.0), &pol).unwrap();
        assert!(s.poly.coeffs()[0].abs() < 1e-14);
        let (k, iv) = exp01();
        let s = biorthogonal_poly(&k, &[0.0], iv, &pol).unwrap();
        assert!((s.poly.coeffs()[0] + 0.5).abs() < 1e-13);
        let r = zeros_in_interval_check(&s, &pol).unwrap();
        assert!((r.roots[0].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_node_exponential_system() {
        let pol = PrecisionPolicy::double();
        let (k, iv) = exp01();
        let s = biorthogonal_poly(&k, &[0.0, 1.0], iv, &pol).unwrap();
        // Moments I_k(t) for k <= 2 in closed form, then the 2x2 solve.
        let i = |k: usize, t: f64| -> f64 {
            if t == 0.0 {
                1.0 / (k as f64 + 1.0)
            } else {
                [E - 1.0, 1.0, E - 2.0][k]
            }
        };
        let d = i(0, 0.0) * i(1, 1.0) - i(1, 0.0) * i(0, 1.0);
        let c0 = (-i(2, 0.0) * i(1, 1.0) + i(1, 0.0) * i(2, 1.0)) / d;
        let c1 = (-i(0, 0.0) * i(2, 1.0) + i(2, 0.0) * i(0, 1.0)) / d;
        assert!((s.poly.coeffs()[0] - c0).abs() < 1e-10);
        assert!((s.poly.coeffs()[1] - c1).abs() < 1e-10);
        let r = zeros_in_interval_check(&s, &pol).unwrap();
        assert_eq!(r.classification, crate::polycore::RootClass::AllStrictlyInside);
        assert!(r.min_separation() > 1e-3);
        assert!(s.orthogonality_residuals().unwrap().iter().all(|&v| v < 1e-10));
    }

    #[test]
    fn singular_moment_matrix_is_rejected() {
        let pol = PrecisionPolicy::double();
        let err = biorthogonal_poly(&unit(), &[-0.5, 0.5], (-1.0, 1.0), &pol).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { .. }));
    }

    #[test]
    fn equivalence_examples() {
        let x = Poly::monomial(vec![0.0, 1.0]);
        assert!(transform_equivalence_check(&x, 0.0).unwrap() < 1e-6);
        let f = Poly::monomial(vec![-0.25, 0.0, 1.0]);
        assert!(transform_equivalence_check(&f, 0.0).unwrap() < 1e-6);
        assert!(transform_equivalence_check(&f, 1.0).unwrap() < 1e-6);
        assert!(transform_equivalence_check(&f, 2.5).unwrap() < 1e-6);
        assert_eq!(
            transform_equivalence_check(&Poly::monomial(vec![3.0]), 0.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn singular_weight_uses_jacobi_rule() {
        let k = equivalence_kernel(-0.3).unwrap();
        let f = Poly::monomial(vec![-0.25, 0.0, 1.0]);
        assert!(transform_equivalence_check(&f, -0.3).unwrap() < 1e-6);
        assert!(moment(&k, 2, 0.1, (-1.0, 1.0)).unwrap().is_finite());
    }
}
