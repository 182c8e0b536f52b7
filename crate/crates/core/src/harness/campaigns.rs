use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Campaign, CampaignConfig};
use super::report::{CampaignReport, CaseParams, CaseRecord, CaseStatus};
use crate::biortho::{transform_equivalence, zeros_in_interval_check};
use crate::error::{Error, Result};
use crate::polycore::{boundary_family, classify_roots, poly_roots, Poly, RootClass, RootReport};
use crate::scalar::{Ext, Precision, PrecisionPolicy, Scalar};
use crate::signreg::{ssr_scan, KernelSpec, SsrReport, SsrVerdict};
use crate::transforms::{jacobi_factorial_transform, jacobi_transform, ultra_transform};

/// Largest acceptable gap between the biorthogonal polynomial and the
/// transform output.
pub const EQUIVALENCE_TOL: f64 = 1e-6;
/// Smallest gap between random zeros fed to the biorthogonal construction.
pub const EQUIVALENCE_MIN_SEPARATION: f64 = 1e-2;

/// A polynomial-to-polynomial map under test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Map {
    Ultra { alpha: f64 },
    Jacobi { alpha: f64, beta: f64 },
    JacobiFactorial { alpha: f64, beta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Roots(Vec<f64>),
    /// `(x - 1)^n (x + 1)^m`
    Boundary {
        n: usize,
        m: usize,
    },
}

impl Input {
    fn describe(&self) -> String {
        match self {
            Input::Roots(r) => format!("random degree {}", r.len()),
            Input::Boundary { n, m } => format!("(x-1)^{n} (x+1)^{m}"),
        }
    }

    fn roots(&self) -> Option<Vec<f64>> {
        match self {
            Input::Roots(r) => Some(r.clone()),
            Input::Boundary { .. } => None,
        }
    }
}

fn image_roots_in<S: Scalar>(map: Map, input: &Input, ctx: S::Ctx) -> Result<Vec<Complex64>> {
    let f: Poly<S> = match input {
        Input::Roots(r) => {
            let r: Vec<S> = r.iter().map(|&x| S::lift(ctx, x)).collect();
            Poly::from_roots(ctx, &r)
        }
        Input::Boundary { n, m } => boundary_family(*n, *m, ctx),
    };
    let g = match map {
        Map::Ultra { alpha } => ultra_transform(&f, alpha)?,
        Map::Jacobi { alpha, beta } => jacobi_transform(&f, alpha, beta)?,
        Map::JacobiFactorial { alpha, beta } => jacobi_factorial_transform(&f, alpha, beta)?,
    };
    poly_roots(&g.to_monomial())
}

/// Zeros of the image of `input` under `map`, computed in the given precision.
pub fn image_roots(map: Map, input: &Input, precision: Precision) -> Result<Vec<Complex64>> {
    match precision {
        Precision::Double => image_roots_in::<f64>(map, input, ()),
        Precision::Extended { bits } => image_roots_in::<Ext>(map, input, bits as usize),
    }
}

/// Precision used to re-check results that fail in double precision.
pub const RECHECK_PRECISION: Precision = Precision::Extended { bits: 256 };

/// Classifies the image's zeros against `(-1, 1)`. Under double precision,
/// a result that fails `accept` is recomputed with `RECHECK_PRECISION`,
/// since clustered zeros come back from double-precision root finding as
/// spurious complex pairs; the second result is then final.
fn classify_image(
    map: Map,
    input: &Input,
    precision: Precision,
    tol: f64,
    accept: impl Fn(&RootReport) -> bool,
) -> Result<(RootReport, bool)> {
    let report = classify_roots(&image_roots(map, input, precision)?, (-1.0, 1.0), tol)?;
    if accept(&report) || precision != Precision::Double {
        return Ok((report, false));
    }
    let again = classify_roots(&image_roots(map, input, RECHECK_PRECISION)?, (-1.0, 1.0), tol)?;
    Ok((again, true))
}

fn note_recheck(r: &mut CaseRecord, rechecked: bool) {
    if rechecked {
        let note = format!("rechecked in {RECHECK_PRECISION}");
        r.detail = if r.detail.is_empty() {
            note
        } else {
            format!("{}; {note}", r.detail)
        };
    }
}

fn strictly_inside(r: &RootReport) -> bool {
    r.classification == RootClass::AllStrictlyInside
}

/// Per-case generator, independent of evaluation order.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// `degree` zeros drawn i.i.d. uniform on `range`, sorted. With
/// `min_sep`, draws are repeated until consecutive zeros are that far apart.
pub fn random_roots(rng: &mut impl Rng, degree: usize, range: (f64, f64), min_sep: Option<f64>) -> Vec<f64> {
    loop {
        let mut r: Vec<f64> = (0..degree).map(|_| rng.random_range(range.0..range.1)).collect();
        r.sort_by(f64::total_cmp);
        match min_sep {
            Some(s) if r.windows(2).any(|w| w[1] - w[0] < s) => continue,
            _ => return r,
        }
    }
}

fn base_record(index: usize, parameters: CaseParams, input: &Input) -> CaseRecord {
    CaseRecord {
        index,
        parameters,
        input: input.describe(),
        input_roots: input.roots(),
        classification: String::new(),
        min_boundary_distance: None,
        status: CaseStatus::Pass,
        exploratory: false,
        evidence: None,
        detail: String::new(),
        wall_time: 0.0,
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn params(alpha: f64, beta: Option<f64>) -> CaseParams {
    CaseParams {
        alpha: Some(alpha),
        beta,
        ..Default::default()
    }
}

fn interior_record(index: usize, parameters: CaseParams, input: &Input, report: &RootReport) -> CaseRecord {
    let mut r = base_record(index, parameters, input);
    r.classification = report.classification.as_str().into();
    r.min_boundary_distance = finite(report.min_boundary_distance());
    if report.classification == RootClass::AllStrictlyInside {
        r.evidence = r.min_boundary_distance;
    } else {
        r.status = CaseStatus::Violation;
        r.evidence = Some(if report.classification == RootClass::SomeNonReal {
            report.max_imag()
        } else {
            report.min_boundary_distance()
        });
        r.detail = format!("max |Im| {:.3e}", report.max_imag());
    }
    r
}

/// Classifies the image of an interior-rooted input against `(-1, 1)`,
/// re-checking double-precision failures in extended precision.
pub fn interior_case(map: Map, roots: &[f64], precision: Precision, tol: f64) -> Result<RootReport> {
    classify_image(map, &Input::Roots(roots.to_vec()), precision, tol, strictly_inside).map(|r| r.0)
}

fn timed(cfg: &CampaignConfig, f: impl FnOnce() -> Result<CaseRecord>) -> Result<CaseRecord> {
    let start = Instant::now();
    let mut r = f()?;
    if cfg.timing {
        r.wall_time = start.elapsed().as_secs_f64();
    }
    Ok(r)
}

fn run_cases<J: Sync>(
    cfg: &CampaignConfig,
    jobs: &[J],
    f: impl Fn(usize, &J) -> Result<CaseRecord> + Sync,
) -> Result<CampaignReport> {
    let records = jobs
        .par_iter()
        .enumerate()
        .map(|(i, j)| timed(cfg, || f(i, j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CampaignReport::new(cfg.clone(), records))
}

fn check_campaign(cfg: &CampaignConfig, want: Campaign) -> Result<()> {
    if cfg.campaign != want {
        return Err(Error::Config(format!("expected a {want} config, got {}", cfg.campaign)));
    }
    cfg.validate()?;
    if matches!(want, Campaign::Theorem12 | Campaign::BiorthoEquiv) && cfg.deg_cap == 0 {
        return Err(Error::Config("deg_cap must be at least 1".into()));
    }
    Ok(())
}

/// Random interior-rooted inputs through the ultraspherical transform; every
/// image must have all zeros strictly inside `(-1, 1)`.
pub fn run_theorem12_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    check_campaign(cfg, Campaign::Theorem12)?;
    let jobs: Vec<f64> = cfg
        .alphas
        .iter()
        .flat_map(|&a| std::iter::repeat_n(a, cfg.trials))
        .collect();
    run_cases(cfg, &jobs, |i, &alpha| {
        let mut rng = case_rng(cfg.seed, i);
        let degree = rng.random_range(1..=cfg.deg_cap);
        let input = Input::Roots(random_roots(&mut rng, degree, cfg.random_root_range, None));
        let (report, rechecked) =
            classify_image(Map::Ultra { alpha }, &input, cfg.precision, cfg.tol, strictly_inside)?;
        let mut r = interior_record(i, params(alpha, None), &input, &report);
        note_recheck(&mut r, rechecked);
        Ok(r)
    })
}

fn parameter_points(cfg: &CampaignConfig) -> Vec<(f64, f64)> {
    cfg.alphas
        .iter()
        .flat_map(|&a| cfg.betas.iter().map(move |&b| (a, b)))
        .collect()
}

/// `(alpha, beta, boundary exponents)`; `None` marks a random input.
type FamilyJob = (f64, f64, Option<(usize, usize)>);

/// `(alpha, beta, input)` for the boundary family followed by random
/// inputs, per parameter point. Random zeros are drawn later from the case
/// seed.
fn family_jobs(cfg: &CampaignConfig) -> Vec<FamilyJob> {
    let pairs = cfg.boundary_pairs();
    parameter_points(cfg)
        .into_iter()
        .flat_map(|(a, b)| {
            pairs
                .iter()
                .map(move |&p| (a, b, Some(p)))
                .chain(std::iter::repeat_n((a, b, None), cfg.trials))
        })
        .collect()
}

fn family_input(cfg: &CampaignConfig, i: usize, job: Option<(usize, usize)>) -> (Input, CaseParams) {
    match job {
        Some((n, m)) => (
            Input::Boundary { n, m },
            CaseParams {
                n: Some(n),
                m: Some(m),
                ..Default::default()
            },
        ),
        None => {
            let mut rng = case_rng(cfg.seed, i);
            let degree = rng.random_range(1..=cfg.random_degree_max.max(1));
            let roots = random_roots(&mut rng, degree, cfg.random_root_range, None);
            (Input::Roots(roots), CaseParams::default())
        }
    }
}

fn is_nonneg_integer(v: f64) -> bool {
    v >= 0.0 && v.fract() == 0.0
}

/// Jacobi transform of the boundary family, classified against the closed
/// interval `[-1, 1]`, and of random interior-rooted inputs, classified
/// against the open interval.
pub fn run_conjecture32_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    check_campaign(cfg, Campaign::Conjecture32)?;
    let jobs = family_jobs(cfg);
    run_cases(cfg, &jobs, |i, &(alpha, beta, job)| {
        let (input, mut p) = family_input(cfg, i, job);
        p.alpha = Some(alpha);
        p.beta = Some(beta);
        let accept = |r: &RootReport| match input {
            Input::Roots(_) => strictly_inside(r),
            Input::Boundary { .. } => r.all_in_closed(),
        };
        let (report, rechecked) = classify_image(Map::Jacobi { alpha, beta }, &input, cfg.precision, cfg.tol, accept)?;
        let mut r = match input {
            Input::Roots(_) => interior_record(i, p, &input, &report),
            Input::Boundary { .. } => {
                let mut r = base_record(i, p, &input);
                r.classification = report.classification.as_str().into();
                r.min_boundary_distance = finite(report.min_boundary_distance());
                r.detail = format!(
                    "interior {} boundary {}",
                    report.interior_count(),
                    report.boundary_count()
                );
                if report.all_in_closed() {
                    r.evidence = Some(report.max_imag());
                } else {
                    r.status = CaseStatus::Violation;
                    r.evidence = Some(if report.classification == RootClass::SomeNonReal {
                        report.max_imag()
                    } else {
                        report.min_boundary_distance()
                    });
                }
                r
            }
        };
        r.exploratory = !(is_nonneg_integer(alpha) && is_nonneg_integer(beta));
        note_recheck(&mut r, rechecked);
        Ok(r)
    })
}

/// Factorial Jacobi transform over the parameter grid; checks that images
/// of real-rooted inputs are real-rooted. Negative parameters are flagged
/// exploratory.
pub fn run_question31_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    check_campaign(cfg, Campaign::Question31)?;
    let jobs = family_jobs(cfg);
    run_cases(cfg, &jobs, |i, &(alpha, beta, job)| {
        let (input, mut p) = family_input(cfg, i, job);
        p.alpha = Some(alpha);
        p.beta = Some(beta);
        let map = Map::JacobiFactorial { alpha, beta };
        let (report, rechecked) = classify_image(map, &input, cfg.precision, cfg.tol, RootReport::is_real_rooted)?;
        let mut r = base_record(i, p, &input);
        r.exploratory = alpha < 0.0 || beta < 0.0;
        r.evidence = Some(report.max_imag());
        r.detail = format!("relative to (-1, 1): {}", report.classification.as_str());
        if report.is_real_rooted() {
            r.classification = "real_rooted".into();
        } else {
            r.classification = "not_real_rooted".into();
            r.status = CaseStatus::Violation;
        }
        note_recheck(&mut r, rechecked);
        Ok(r)
    })
}

fn sign_table(rep: &SsrReport) -> String {
    rep.per_m
        .iter()
        .map(|s| {
            format!(
                "m={} {} (+{} -{} ?{})",
                s.m,
                s.inferred_sign.symbol(),
                s.positive,
                s.negative,
                s.indeterminate
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn ssr_record(index: usize, parameters: CaseParams, rep: &SsrReport, expect_stp: bool) -> CaseRecord {
    let min_ratio = rep.per_m.iter().map(|s| s.min_abs_ratio).fold(f64::INFINITY, f64::min);
    let status = match (rep.verdict, expect_stp) {
        (SsrVerdict::ConsistentStp, _) => CaseStatus::Pass,
        (SsrVerdict::ConsistentSsr, false) => CaseStatus::Pass,
        (SsrVerdict::Inconclusive, _) => CaseStatus::Indeterminate,
        _ => CaseStatus::Violation,
    };
    CaseRecord {
        index,
        parameters,
        input: rep.kernel.clone(),
        input_roots: None,
        classification: serde_json::to_value(rep.verdict)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default(),
        min_boundary_distance: None,
        status,
        exploratory: !expect_stp,
        evidence: finite(min_ratio),
        detail: format!("{} | {}", rep.sign_pattern(), sign_table(rep)),
        wall_time: 0.0,
    }
}

/// Minor-sign scans of the ultraspherical kernel over the beta grid and of
/// the Jacobi generating function over the (alpha, beta) grid. Only the
/// ultraspherical kernel with `beta > 0` is expected to be STP; every other
/// case is recorded without expectation.
pub fn run_ssr_explore(cfg: &CampaignConfig) -> Result<CampaignReport> {
    check_campaign(cfg, Campaign::SsrExplore)?;
    let mut jobs: Vec<(KernelSpec, CaseParams, bool)> = cfg
        .betas
        .iter()
        .map(|&b| {
            (
                KernelSpec::ultra(b),
                CaseParams {
                    beta: Some(b),
                    ..Default::default()
                },
                b > 0.0,
            )
        })
        .collect();
    for (a, b) in cfg.genfun_points() {
        jobs.push((KernelSpec::jacobi_genfun(a, b)?, params(a, Some(b)), false));
    }
    let policy = PrecisionPolicy::for_mode(cfg.precision);
    run_cases(cfg, &jobs, |i, (spec, p, expect)| {
        let seed = case_rng(cfg.seed, i).next_u64();
        let rep = ssr_scan(spec, cfg.m_max, cfg.trials, seed, &policy)?;
        Ok(ssr_record(i, p.clone(), &rep, *expect))
    })
}

/// Random inputs with separated interior zeros: the biorthogonal polynomial
/// of the weighted `G2` kernel at those zeros must match the ultraspherical
/// transform, and its zeros must be distinct and interior.
pub fn run_biortho_equiv(cfg: &CampaignConfig) -> Result<CampaignReport> {
    check_campaign(cfg, Campaign::BiorthoEquiv)?;
    let jobs: Vec<f64> = cfg
        .alphas
        .iter()
        .flat_map(|&a| std::iter::repeat_n(a, cfg.trials))
        .collect();
    let policy = PrecisionPolicy::double();
    run_cases(cfg, &jobs, |i, &alpha| {
        let mut rng = case_rng(cfg.seed, i);
        let degree = rng.random_range(1..=cfg.deg_cap);
        let roots = random_roots(
            &mut rng,
            degree,
            cfg.random_root_range,
            Some(EQUIVALENCE_MIN_SEPARATION),
        );
        let input = Input::Roots(roots.clone());
        let mut r = base_record(i, params(alpha, None), &input);
        let eq = match transform_equivalence(&Poly::from_roots((), &roots), alpha) {
            Ok(eq) => eq,
            Err(Error::SingularSystem { det }) => {
                r.status = CaseStatus::Indeterminate;
                r.classification = "singular_moment_matrix".into();
                r.evidence = Some(det);
                return Ok(r);
            }
            Err(Error::QuadratureFailure { estimate }) => {
                r.status = CaseStatus::Indeterminate;
                r.classification = "quadrature_failure".into();
                r.evidence = Some(estimate);
                return Ok(r);
            }
            Err(e) => return Err(e),
        };
        let zeros = zeros_in_interval_check(&eq.system, &policy)?;
        r.classification = zeros.classification.as_str().into();
        r.min_boundary_distance = finite(zeros.min_boundary_distance());
        r.evidence = Some(eq.deviation);
        r.detail = format!("deviation {:.3e}", eq.deviation);
        let distinct = zeros.min_separation() > policy.tau_root;
        if eq.deviation > EQUIVALENCE_TOL || zeros.classification != RootClass::AllStrictlyInside || !distinct {
            r.status = CaseStatus::Violation;
        }
        Ok(r)
    })
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    match cfg.campaign {
        Campaign::Theorem12 => run_theorem12_campaign(cfg),
        Campaign::Conjecture32 => run_conjecture32_campaign(cfg),
        Campaign::Question31 => run_question31_campaign(cfg),
        Campaign::SsrExplore => run_ssr_explore(cfg),
        Campaign::BiorthoEquiv => run_biortho_equiv(cfg),
        Campaign::Selftest => super::selftest::run_selftest(cfg),
    }
}
