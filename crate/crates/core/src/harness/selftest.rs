//! Quick internal consistency checks, one report record per check.

use rand::Rng;

use super::campaigns::{case_rng, random_roots};
use super::config::CampaignConfig;
use super::report::{CampaignReport, CaseParams, CaseRecord, CaseStatus};
use crate::biortho::transform_equivalence_check;
use crate::error::Result;
use crate::orthopoly::{
    check_g2_form, displayed_symmetric_constant, genfun_taylor, jacobi_poly, ortho_constant, quad_inner_product,
    ultra_prefactor, G2Form, GenFunSpec,
};
use crate::polycore::Poly;
use crate::scalar::PrecisionPolicy;
use crate::signreg::{ssr_minor, ssr_scan, KernelSpec, SsrVerdict};
use crate::transforms::{is_degree_independent, legendre_transform, scaling_ratios, ultra_transform, IserlesSaffSpec};

pub const CHECKS: &[&str] = &[
    "g2_coefficient_form",
    "orthogonality_constant",
    "displayed_orthogonality_constant",
    "generating_function_oracle",
    "legendre_matches_ultraspherical",
    "cauchy_determinant",
    "kernel_transform_scaling",
    "exp_xy_minors",
    "biorthogonal_equivalence",
];

pub struct CheckOutcome {
    pub pass: bool,
    pub evidence: f64,
    pub detail: String,
}

fn sample_xs(n: usize) -> Vec<f64> {
    (0..n).map(|i| -0.95 + 1.9 * (i as f64 + 0.5) / n as f64).collect()
}

/// Which multiplier the `G2` Taylor coefficients support, across several
/// `alpha`. Passes when `2k + 2a + 1` matches everywhere.
pub fn g2_form_check() -> Result<CheckOutcome> {
    let xs = sample_xs(20);
    let mut worst = 0.0f64;
    let mut other = f64::INFINITY;
    for alpha in [-0.3, 0.5, 1.0, 2.5] {
        let c = check_g2_form(alpha, &xs, 12, 1e-9)?;
        if !c.supported.contains(&G2Form::TwoKPlusTwoAlphaPlusOne) {
            worst = f64::INFINITY;
        }
        worst = worst.max(c.deviation_two_alpha);
        other = other.min(c.deviation_one_alpha);
    }
    Ok(CheckOutcome {
        pass: worst <= 1e-9,
        evidence: worst,
        detail: format!("2k+2a+1 max rel deviation {worst:.3e}; 2k+a+1 deviates by at least {other:.3e} for a != 0"),
    })
}

fn norm_grid() -> impl Iterator<Item = (f64, usize, usize)> {
    [0.0, 0.5, 1.0, 2.0]
        .into_iter()
        .flat_map(|a| (0..=10).flat_map(move |n| (0..=10).map(move |m| (a, n, m))))
}

/// Quadrature against the closed-form squared norms: relative error on the
/// diagonal, error over `max(h_n, h_m)` off it.
pub fn orthogonality_check() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for (a, n, m) in norm_grid() {
        let v = quad_inner_product(n, m, a, a)?;
        let (hn, hm) = (ortho_constant(n, a, a)?.h, ortho_constant(m, a, a)?.h);
        let err = if n == m {
            (v - hn).abs() / hn
        } else {
            v.abs() / hn.max(hm)
        };
        worst = worst.max(err);
    }
    Ok(CheckOutcome {
        pass: worst <= 1e-8,
        evidence: worst,
        detail: format!("max error {worst:.3e} over n, m <= 10, a = b in {{0, 0.5, 1, 2}}"),
    })
}

/// Compares the alternative symmetric norm formula with quadrature. Passes
/// when quadrature rejects it, i.e. the closed form above is the one that
/// holds.
pub fn displayed_constant_check() -> Result<CheckOutcome> {
    let mut best = f64::INFINITY;
    for a in [0.5, 1.0, 2.0] {
        for k in 2..=10 {
            let q = quad_inner_product(k, k, a, a)?;
            best = best.min((displayed_symmetric_constant(k, a) - q).abs() / q);
        }
    }
    Ok(CheckOutcome {
        pass: best > 1e-3,
        evidence: best,
        detail: format!(
            "2^(1+a) variant differs from quadrature by at least {best:.3e} (relative); 2^(1+2a) form holds"
        ),
    })
}

/// `jacobi_poly` against Taylor coefficients of both generating functions.
pub fn genfun_oracle_check() -> Result<CheckOutcome> {
    let xs = sample_xs(20);
    let mut worst = 0.0f64;
    for (a, b) in [(0.0, 0.0), (0.5, -0.5), (1.0, 2.0), (-0.7, 0.3), (2.5, 2.5)] {
        for &x in &xs {
            let jf = genfun_taylor(GenFunSpec::JacobiF { alpha: a, beta: b }, x, 12)?;
            let ug = (a == b)
                .then(|| genfun_taylor(GenFunSpec::UltraG { alpha: a }, x, 12))
                .transpose()?;
            for n in 0..=12 {
                let p = jacobi_poly(n, a, b)?.eval(&x);
                worst = worst.max((p - jf[n]).abs() / jf[n].abs().max(1.0));
                if let Some(ug) = &ug {
                    let want = ug[n] / ultra_prefactor(a, n);
                    worst = worst.max((p - want).abs() / want.abs().max(1.0));
                }
            }
        }
    }
    Ok(CheckOutcome {
        pass: worst <= 1e-9,
        evidence: worst,
        detail: format!("max relative deviation {worst:.3e} for n <= 12"),
    })
}

pub fn legendre_check(seed: u64) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let mut rng = case_rng(seed, i);
        let d = rng.random_range(1..=12);
        let f = Poly::from_roots((), &random_roots(&mut rng, d, (-0.99, 0.99), None));
        let l = legendre_transform(&f)?;
        let u = ultra_transform(&f, 0.0)?;
        for (a, b) in l.coeffs().iter().zip(u.coeffs()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(CheckOutcome {
        pass: worst <= 1e-14,
        evidence: worst,
        detail: format!("max coefficient gap {worst:.3e} over 100 inputs"),
    })
}

/// Minors of `1/(x+y)` against the Cauchy determinant formula. These
/// minors lose several digits in double precision, so the determinant is
/// taken in extended precision.
pub fn cauchy_check(seed: u64) -> Result<CheckOutcome> {
    let k = KernelSpec::power_sum(1.0)?;
    let pol = PrecisionPolicy::extended(128);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let mut rng = case_rng(seed, i);
        let m = 1 + i % 5;
        let xs = random_roots(&mut rng, m, (0.1, 3.9), Some(0.05));
        let ys = random_roots(&mut rng, m, (0.1, 3.9), Some(0.05));
        let mut num = 1.0;
        let mut den = 1.0;
        for i in 0..m {
            for j in 0..m {
                den *= xs[i] + ys[j];
                if i < j {
                    num *= (xs[j] - xs[i]) * (ys[j] - ys[i]);
                }
            }
        }
        let want = num / den;
        let got = ssr_minor(&k, &xs, &ys, &pol)?;
        worst = worst.max((got - want).abs() / want.abs());
    }
    Ok(CheckOutcome {
        pass: worst <= 1e-8,
        evidence: worst,
        detail: format!("max relative deviation {worst:.3e} for m <= 5"),
    })
}

/// The generic kernel transform with the full `G2` coefficients differs
/// from the ultraspherical transform by a degree-independent factor.
pub fn scaling_check() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut ok = true;
    for a in [-0.3, 0.0, 0.5, 1.0, 2.5] {
        let r = scaling_ratios(&IserlesSaffSpec::ultraspherical_g2_delta(a, 12)?, a, 12)?;
        ok &= is_degree_independent(&r, 1e-12) && r[0] > 0.0;
        worst = worst.max(r.iter().map(|v| (v / r[0] - 1.0).abs()).fold(0.0, f64::max));
    }
    Ok(CheckOutcome {
        pass: ok,
        evidence: worst,
        detail: format!("max relative spread of factor ratios {worst:.3e}"),
    })
}

pub fn exp_xy_check(seed: u64) -> Result<CheckOutcome> {
    let rep = ssr_scan(&KernelSpec::exp_xy(), 4, 100, seed, &PrecisionPolicy::double())?;
    let min_ratio = rep.per_m.iter().map(|s| s.min_abs_ratio).fold(f64::INFINITY, f64::min);
    Ok(CheckOutcome {
        pass: rep.verdict == SsrVerdict::ConsistentStp,
        evidence: min_ratio,
        detail: format!("sign pattern {}", rep.sign_pattern()),
    })
}

pub fn biortho_check() -> Result<CheckOutcome> {
    let f = Poly::monomial(vec![-0.25, 0.0, 1.0]);
    let worst = [0.0, 1.0]
        .into_iter()
        .map(|a| transform_equivalence_check(&f, a))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(CheckOutcome {
        pass: worst <= 1e-6,
        evidence: worst,
        detail: format!("x^2 - 1/4, a in {{0, 1}}: deviation {worst:.3e}"),
    })
}

pub fn run_check(name: &str, seed: u64) -> Result<CheckOutcome> {
    match name {
        "g2_coefficient_form" => g2_form_check(),
        "orthogonality_constant" => orthogonality_check(),
        "displayed_orthogonality_constant" => displayed_constant_check(),
        "generating_function_oracle" => genfun_oracle_check(),
        "legendre_matches_ultraspherical" => legendre_check(seed),
        "cauchy_determinant" => cauchy_check(seed),
        "kernel_transform_scaling" => scaling_check(),
        "exp_xy_minors" => exp_xy_check(seed),
        "biorthogonal_equivalence" => biortho_check(),
        _ => unreachable!("unknown check {name}"),
    }
}

pub fn run_selftest(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let records = CHECKS
        .iter()
        .enumerate()
        .map(|(index, &name)| {
            let o = run_check(name, cfg.seed)?;
            Ok(CaseRecord {
                index,
                parameters: CaseParams::default(),
                input: name.into(),
                input_roots: None,
                classification: if o.pass { "ok" } else { "failed" }.into(),
                min_boundary_distance: None,
                status: if o.pass {
                    CaseStatus::Pass
                } else {
                    CaseStatus::Violation
                },
                exploratory: false,
                evidence: o.evidence.is_finite().then_some(o.evidence),
                detail: o.detail,
                wall_time: 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CampaignReport::new(cfg.clone(), records))
}
