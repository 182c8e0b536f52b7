//! Adaptive Gauss-Kronrod (7/15) integration on finite intervals.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_SEGMENTS: usize = 4000;

/// `(kronrod, |kronrod - gauss|)` on `[a, b]`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Integral of `f` over `[a, b]` with absolute error estimate at most
/// `rel * (1 + |value|)`. Bisects the worst segment until the target is met.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> Result<(f64, f64)> {
    let mut segs = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if !total.is_finite() {
            return Err(Error::QuadratureFailure { estimate: f64::NAN });
        }
        if err <= rel * (1.0 + total.abs()) {
            return Ok((total, err));
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureFailure { estimate: err });
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = segs.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            return Err(Error::QuadratureFailure { estimate: err });
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
}

/// `(kronrod, |kronrod - gauss|, kronrod of |f|)` per component on `[a, b]`.
fn gk15_vec(f: &impl Fn(f64) -> Vec<f64>, a: f64, b: f64) -> Vec<(f64, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut acc: Vec<(f64, f64, f64)> = fc.iter().map(|v| (WGK[7] * v, WG[3] * v, WGK[7] * v.abs())).collect();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (lo, hi) = (f(c - dx), f(c + dx));
        for (i, t) in acc.iter_mut().enumerate() {
            let s = lo[i] + hi[i];
            t.0 += WGK[j] * s;
            t.2 += WGK[j] * (lo[i].abs() + hi[i].abs());
            if j % 2 == 1 {
                t.1 += WG[j / 2] * s;
            }
        }
    }
    acc.into_iter()
        .map(|(k, g, abs)| (k * h, ((k - g) * h).abs(), abs * h.abs()))
        .collect()
}

/// Componentwise integral of a vector-valued `f` over `[a, b]`. Each
/// component's error estimate is driven below `rel` times the integral of
/// its absolute value.
pub fn integrate_vec(f: impl Fn(f64) -> Vec<f64>, a: f64, b: f64, rel: f64) -> Result<Vec<f64>> {
    let mut segs = vec![(a, b, gk15_vec(&f, a, b))];
    loop {
        let dim = segs[0].2.len();
        let mut total = vec![0.0; dim];
        let mut err = vec![0.0; dim];
        let mut abs = vec![0.0; dim];
        for (_, _, r) in &segs {
            for (i, &(v, e, m)) in r.iter().enumerate() {
                total[i] += v;
                err[i] += e;
                abs[i] += m;
            }
        }
        if total.iter().any(|v| !v.is_finite()) {
            return Err(Error::QuadratureFailure { estimate: f64::NAN });
        }
        // Excess error of each component over its target, in units of the target.
        let excess = |r: &[(f64, f64, f64)]| {
            r.iter()
                .enumerate()
                .map(|(i, t)| t.1 / (rel * abs[i]).max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max)
        };
        let worst_total = (0..dim)
            .map(|i| err[i] / (rel * abs[i]).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        if worst_total <= 1.0 {
            return Ok(total);
        }
        let estimate = err.iter().cloned().fold(0.0, f64::max);
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::QuadratureFailure { estimate });
        }
        let worst = segs
            .iter()
            .enumerate()
            .map(|(i, s)| (i, excess(&s.2)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _) = segs.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            return Err(Error::QuadratureFailure { estimate });
        }
        segs.push((lo, mid, gk15_vec(&f, lo, mid)));
        segs.push((mid, hi, gk15_vec(&f, mid, hi)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let (v, _) = integrate(|x| x.powi(20), -1.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn peaked_integrand() {
        let eps: f64 = 1e-3;
        let (v, _) = integrate(|x| eps / (x * x + eps * eps), -1.0, 1.0, 1e-12).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn vector_components_meet_their_own_scale() {
        let v = integrate_vec(|x| vec![x * x, 1e-20 * x.exp(), 1e8 * x.cos()], 0.0, 1.0, 1e-14).unwrap();
        assert!((v[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((v[1] / 1e-20 - (std::f64::consts::E - 1.0)).abs() < 1e-13);
        assert!((v[2] / 1e8 - 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn nonintegrable_fails() {
        assert!(integrate(|x: f64| 1.0 / x.abs(), -1.0, 1.0, 1e-10).is_err());
    }
}
