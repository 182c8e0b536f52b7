use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{Factor, KernelSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Ext, Precision, PrecisionPolicy, Scalar};

/// Smallest gap allowed between consecutive sampled tuple entries.
pub const MIN_SEPARATION: f64 = 1e-3;
pub const MAX_MINOR_ORDER: usize = 8;

fn check_tuple(xs: &[f64], lo: f64, hi: f64, what: &str) -> Result<()> {
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::BadTuple(format!("{what} not strictly increasing")));
    }
    if xs.iter().any(|&x| !(x > lo && x < hi)) {
        return Err(Error::BadTuple(format!("{what} leaves ({lo}, {hi})")));
    }
    Ok(())
}

/// `(det, det / scale)` where `scale` is the product of row sup-norms.
fn minor_in<S: Scalar>(spec: &KernelSpec, xs: &[f64], ys: &[f64], ctx: S::Ctx) -> (f64, f64) {
    let ys_s: Vec<S> = ys.iter().map(|&y| S::lift(ctx, y)).collect();
    let rows: Vec<Vec<S>> = xs
        .iter()
        .map(|&x| {
            let x = S::lift(ctx, x);
            ys_s.iter().map(|y| spec.eval_in(&x, y)).collect()
        })
        .collect();
    let mut scale = S::one(ctx);
    for r in &rows {
        let sup = r.iter().fold(S::zero(ctx), |acc, v| S::max_of(acc, v.abs()));
        scale = scale * sup;
    }
    let d = linalg::det(rows);
    let ratio = if scale.is_zero() {
        S::zero(ctx)
    } else {
        d.clone() / scale
    };
    (d.to_f64(), ratio.to_f64())
}

fn minor_with_scale(spec: &KernelSpec, xs: &[f64], ys: &[f64], mode: Precision) -> (f64, f64) {
    match mode {
        Precision::Double => minor_in::<f64>(spec, xs, ys, ()),
        Precision::Extended { bits } => minor_in::<Ext>(spec, xs, ys, bits as usize),
    }
}

/// Determinant of `[K(x_i, y_j)]` for strictly increasing tuples inside the
/// kernel's domain, `1 <= m <= 8`.
pub fn ssr_minor(spec: &KernelSpec, xs: &[f64], ys: &[f64], policy: &PrecisionPolicy) -> Result<f64> {
    let m = xs.len();
    if m == 0 || m != ys.len() || m > MAX_MINOR_ORDER {
        return Err(Error::BadTuple(format!(
            "tuples must have equal length between 1 and {MAX_MINOR_ORDER}"
        )));
    }
    check_tuple(xs, spec.domain.x.0, spec.domain.x.1, "x tuple")?;
    check_tuple(ys, spec.domain.y.0, spec.domain.y.1, "y tuple")?;
    Ok(minor_with_scale(spec, xs, ys, policy.mode).0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinorSign {
    Positive,
    Negative,
    Indeterminate,
}

impl MinorSign {
    pub fn value(self) -> Option<f64> {
        match self {
            MinorSign::Positive => Some(1.0),
            MinorSign::Negative => Some(-1.0),
            MinorSign::Indeterminate => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            MinorSign::Positive => '+',
            MinorSign::Negative => '-',
            MinorSign::Indeterminate => '?',
        }
    }
}

/// Statistics for all sampled `m x m` minors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorStats {
    pub m: usize,
    pub trials: usize,
    pub positive: usize,
    pub negative: usize,
    pub indeterminate: usize,
    pub inferred_sign: MinorSign,
    /// Smallest `|det|` seen.
    pub min_abs_det: f64,
    /// Smallest `|det| / scale` seen; indeterminate minors fall below `tau_det`.
    pub min_abs_ratio: f64,
    /// Minority determinate signs.
    pub violations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SsrVerdict {
    ConsistentStp,
    ConsistentSsr,
    ViolationFound,
    Inconclusive,
}

/// Outcome of a randomized minor scan. Verdicts describe the sampled tuples
/// only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsrReport {
    pub kernel: String,
    pub m_max: usize,
    pub seed: u64,
    pub tau_det: f64,
    pub per_m: Vec<MinorStats>,
    pub verdict: SsrVerdict,
}

impl SsrReport {
    pub fn signs(&self) -> Vec<MinorSign> {
        self.per_m.iter().map(|s| s.inferred_sign).collect()
    }

    pub fn sign_pattern(&self) -> String {
        self.per_m.iter().map(|s| s.inferred_sign.symbol()).collect()
    }

    pub fn total_violations(&self) -> usize {
        self.per_m.iter().map(|s| s.violations).sum()
    }
}

fn sample_tuple(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    for _ in 0..10_000 {
        let mut v: Vec<f64> = (0..m).map(|_| rng.random_range(lo..hi)).collect();
        v.sort_by(f64::total_cmp);
        let ok = v[0] > lo && v.windows(2).all(|w| w[1] - w[0] >= MIN_SEPARATION);
        if ok {
            return Ok(v);
        }
    }
    Err(Error::BadTuple(format!(
        "could not draw {m} points separated by {MIN_SEPARATION} in ({lo}, {hi})"
    )))
}

/// Trial `t` of order `m` uses its own ChaCha stream, so results do not
/// depend on evaluation order.
pub(crate) fn trial_rng(seed: u64, m: usize, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m as u64) << 40) | t as u64);
    rng
}

/// Samples `trials_per_m` pairs of increasing tuples for each order
/// `m = 1..=m_max` and classifies the sign of every minor.
pub fn ssr_scan(
    spec: &KernelSpec,
    m_max: usize,
    trials_per_m: usize,
    seed: u64,
    policy: &PrecisionPolicy,
) -> Result<SsrReport> {
    let policy = policy.validate()?;
    let cap = match policy.mode {
        Precision::Double => 6,
        Precision::Extended { .. } => MAX_MINOR_ORDER,
    };
    if m_max == 0 || m_max > cap {
        return Err(Error::BadParameter(format!(
            "m_max must be in 1..={cap} under {} precision",
            policy.mode
        )));
    }
    if trials_per_m < 100 {
        return Err(Error::BadParameter(format!(
            "need at least 100 trials per order, got {trials_per_m}"
        )));
    }
    let d = spec.domain;
    let mut per_m = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let samples: Vec<(f64, f64)> = (0..trials_per_m)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, m, t);
                let xs = sample_tuple(&mut rng, m, d.x.0, d.x.1)?;
                let ys = sample_tuple(&mut rng, m, d.y.0, d.y.1)?;
                Ok(minor_with_scale(spec, &xs, &ys, policy.mode))
            })
            .collect::<Result<_>>()?;
        per_m.push(summarize(m, &samples, policy.tau_det));
    }
    let verdict = if per_m.iter().any(|s| s.violations > 0) {
        SsrVerdict::ViolationFound
    } else if per_m.iter().all(|s| s.inferred_sign == MinorSign::Positive) {
        SsrVerdict::ConsistentStp
    } else if per_m.iter().all(|s| s.inferred_sign != MinorSign::Indeterminate) {
        SsrVerdict::ConsistentSsr
    } else {
        SsrVerdict::Inconclusive
    };
    Ok(SsrReport {
        kernel: spec.label(),
        m_max,
        seed,
        tau_det: policy.tau_det,
        per_m,
        verdict,
    })
}

fn summarize(m: usize, samples: &[(f64, f64)], tau_det: f64) -> MinorStats {
    let (mut pos, mut neg, mut ind) = (0, 0, 0);
    let mut min_abs_det = f64::INFINITY;
    let mut min_abs_ratio = f64::INFINITY;
    for &(det, ratio) in samples {
        min_abs_det = min_abs_det.min(det.abs());
        min_abs_ratio = min_abs_ratio.min(ratio.abs());
        if ratio > tau_det {
            pos += 1;
        } else if ratio < -tau_det {
            neg += 1;
        } else {
            ind += 1;
        }
    }
    let inferred_sign = match pos.cmp(&neg) {
        std::cmp::Ordering::Greater => MinorSign::Positive,
        std::cmp::Ordering::Less => MinorSign::Negative,
        std::cmp::Ordering::Equal => MinorSign::Indeterminate,
    };
    MinorStats {
        m,
        trials: samples.len(),
        positive: pos,
        negative: neg,
        indeterminate: ind,
        inferred_sign,
        min_abs_det,
        min_abs_ratio,
        violations: pos.min(neg),
    }
}

/// Scans of a kernel and of the same kernel multiplied by fixed-sign factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorCheck {
    pub base: SsrReport,
    pub wrapped: SsrReport,
    /// `eps_wrapped(m) = (sign phi)^m (sign psi)^m eps_base(m)` for every `m`
    /// with both signs determinate, and no violations in either scan.
    pub consistent: bool,
}

pub fn factor_invariance_check(
    base: &KernelSpec,
    phi: Factor,
    psi: Factor,
    m_max: usize,
    trials: usize,
    seed: u64,
    policy: &PrecisionPolicy,
) -> Result<FactorCheck> {
    let flip = phi.sign() * psi.sign();
    let wrapped = KernelSpec::factored(base.clone(), phi, psi)?;
    let b = ssr_scan(base, m_max, trials, seed, policy)?;
    let w = ssr_scan(&wrapped, m_max, trials, seed, policy)?;
    let consistent = b.total_violations() == 0
        && w.total_violations() == 0
        && b.per_m
            .iter()
            .zip(&w.per_m)
            .all(|(sb, sw)| match (sb.inferred_sign.value(), sw.inferred_sign.value()) {
                (Some(eb), Some(ew)) => ew == eb * flip.powi(sb.m as i32),
                _ => false,
            });
    Ok(FactorCheck {
        base: b,
        wrapped: w,
        consistent,
    })
}

/// Scans of two kernels and of their discrete composition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionCheck {
    pub left: SsrReport,
    pub right: SsrReport,
    pub composed: SsrReport,
}

impl CompositionCheck {
    /// If both factors look STP, the composition must too.
    pub fn holds(&self) -> bool {
        let stp = |r: &SsrReport| r.verdict == SsrVerdict::ConsistentStp;
        !(stp(&self.left) && stp(&self.right)) || stp(&self.composed)
    }
}

pub fn composition_check(
    left: &KernelSpec,
    right: &KernelSpec,
    grid: &[f64],
    m_max: usize,
    trials: usize,
    seed: u64,
    policy: &PrecisionPolicy,
) -> Result<CompositionCheck> {
    let composed = KernelSpec::composed(left.clone(), right.clone(), grid.to_vec())?;
    Ok(CompositionCheck {
        left: ssr_scan(left, m_max, trials, seed, policy)?,
        right: ssr_scan(right, m_max, trials, seed, policy)?,
        composed: ssr_scan(&composed, m_max, trials, seed, policy)?,
    })
}
