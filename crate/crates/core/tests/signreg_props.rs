use proptest::prelude::*;
use ultrazero::signreg::{
    composition_check, factor_invariance_check, ssr_minor, ssr_scan, Factor, KernelSpec, SsrVerdict,
};
use ultrazero::PrecisionPolicy;

/// Closed form for `det[1 / (x_i + y_j)]`.
fn cauchy_det(xs: &[f64], ys: &[f64]) -> f64 {
    let mut num = 1.0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            num *= (xs[j] - xs[i]) * (ys[j] - ys[i]);
        }
    }
    let den: f64 = xs.iter().flat_map(|x| ys.iter().map(move |y| x + y)).product();
    num / den
}

/// Increasing tuple of length `m` in `(lo, hi)` with gaps at least `gap`.
fn tuple(m: usize, lo: f64, hi: f64, gap: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, m).prop_filter_map("tuple too clustered", move |mut u| {
        u.sort_by(f64::total_cmp);
        let v: Vec<f64> = u.iter().map(|t| lo + (hi - lo) * t).collect();
        let ok = v.windows(2).all(|w| w[1] - w[0] >= gap) && v[0] > lo && v[m - 1] < hi;
        ok.then_some(v)
    })
}

fn pair(max_m: usize, lo: f64, hi: f64) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_m).prop_flat_map(move |m| (tuple(m, lo, hi, 0.05), tuple(m, lo, hi, 0.05)))
}

#[test]
fn cauchy_examples() {
    let k = KernelSpec::power_sum(1.0).unwrap();
    let ext = PrecisionPolicy::extended(256);
    let v = ssr_minor(&k, &[1.0, 2.0], &[1.0, 2.0], &ext).unwrap();
    assert!((v - 1.0 / 72.0).abs() < 1e-16);
    let xs = [0.3, 0.9, 1.4, 2.2, 3.1];
    let ys = [0.2, 0.7, 1.1, 2.0, 3.5];
    let v = ssr_minor(&k, &xs, &ys, &ext).unwrap();
    let want = cauchy_det(&xs, &ys);
    assert!((v - want).abs() <= 1e-12 * want.abs());
}

#[test]
fn exp_xy_is_stp_across_seeds() {
    for seed in [1, 2, 3] {
        let r = ssr_scan(&KernelSpec::exp_xy(), 4, 200, seed, &PrecisionPolicy::double()).unwrap();
        assert_eq!(
            r.verdict,
            SsrVerdict::ConsistentStp,
            "seed {seed}: {}",
            r.sign_pattern()
        );
    }
}

#[test]
fn ultra_kernel_positive_beta_is_stp() {
    for beta in [0.5, 1.5, 3.0] {
        let r = ssr_scan(&KernelSpec::ultra(beta), 4, 200, 5, &PrecisionPolicy::extended(192)).unwrap();
        assert_eq!(
            r.verdict,
            SsrVerdict::ConsistentStp,
            "beta {beta}: {}",
            r.sign_pattern()
        );
    }
}

#[test]
fn ultra_kernel_negative_half_alternates() {
    let r = ssr_scan(&KernelSpec::ultra(-0.5), 4, 200, 5, &PrecisionPolicy::extended(192)).unwrap();
    assert_eq!(r.verdict, SsrVerdict::ConsistentSsr);
    assert_eq!(r.sign_pattern(), "+-+-");
}

#[test]
fn positive_factors_preserve_signs() {
    let pol = PrecisionPolicy::extended(192);
    let c = factor_invariance_check(
        &KernelSpec::ultra(1.5),
        Factor::OneMinusSquare { scale: 1.0 },
        Factor::OneMinusSquare { scale: 1.0 },
        4,
        150,
        9,
        &pol,
    )
    .unwrap();
    assert!(c.consistent);
    let c = factor_invariance_check(
        &KernelSpec::exp_xy(),
        Factor::Constant(2.0),
        Factor::Constant(2.0),
        4,
        150,
        9,
        &PrecisionPolicy::double(),
    )
    .unwrap();
    assert!(c.consistent);
    assert_eq!(c.wrapped.sign_pattern(), "++++");
}

#[test]
fn negative_row_factor_flips_odd_orders() {
    let c = factor_invariance_check(
        &KernelSpec::exp_xy(),
        Factor::Constant(-1.0),
        Factor::Constant(1.0),
        4,
        150,
        3,
        &PrecisionPolicy::double(),
    )
    .unwrap();
    assert!(c.consistent);
    assert_eq!(c.wrapped.sign_pattern(), "-+-+");
}

#[test]
fn composition_of_stp_kernels_is_stp() {
    let grid: Vec<f64> = (0..12).map(|i| -1.9 + 3.8 * i as f64 / 11.0).collect();
    let a = KernelSpec::exp_xy().with_domain((-2.0, 2.0), (-2.0, 2.0)).unwrap();
    let c = composition_check(&a, &a, &grid, 4, 150, 17, &PrecisionPolicy::extended(192)).unwrap();
    assert!(c.holds());
    assert_eq!(c.composed.verdict, SsrVerdict::ConsistentStp);

    let grid: Vec<f64> = (0..12).map(|i| 0.2 + 0.3 * i as f64).collect();
    let left = KernelSpec::exp_xy().with_domain((0.1, 3.9), (0.1, 3.9)).unwrap();
    let right = KernelSpec::power_sum(2.0).unwrap();
    let c = composition_check(&left, &right, &grid, 4, 150, 17, &PrecisionPolicy::extended(192)).unwrap();
    assert!(c.holds());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cauchy_matches_closed_form((xs, ys) in pair(5, 0.0, 4.0)) {
        let k = KernelSpec::power_sum(1.0).unwrap();
        let v = ssr_minor(&k, &xs, &ys, &PrecisionPolicy::extended(256)).unwrap();
        let want = cauchy_det(&xs, &ys);
        prop_assert!(want > 0.0);
        prop_assert!((v - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn constant_row_factor_scales_by_power((xs, ys) in pair(4, -3.0, 3.0), c in 0.2f64..3.0) {
        let base = KernelSpec::exp_xy();
        let wrapped = KernelSpec::factored(base.clone(), Factor::Constant(c), Factor::Constant(1.0)).unwrap();
        let pol = PrecisionPolicy::extended(192);
        let b = ssr_minor(&base, &xs, &ys, &pol).unwrap();
        let w = ssr_minor(&wrapped, &xs, &ys, &pol).unwrap();
        let want = c.powi(xs.len() as i32) * b;
        prop_assert!((w - want).abs() <= 1e-12 * want.abs());
    }

    #[test]
    fn symmetric_kernel_minor_is_symmetric((xs, ys) in pair(4, -1.0, 1.0), beta in 0.2f64..3.0) {
        let k = KernelSpec::ultra(beta);
        prop_assume!(xs.iter().chain(&ys).all(|v| v.abs() < 0.95));
        let pol = PrecisionPolicy::extended(192);
        let a = ssr_minor(&KernelSpec::exp_xy(), &xs, &ys, &pol).unwrap();
        let b = ssr_minor(&KernelSpec::exp_xy(), &ys, &xs, &pol).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
        // first-order minors are plain kernel values
        let v = ssr_minor(&k, &xs[..1], &ys[..1], &pol).unwrap();
        let want = (1.0 - 2.0 * xs[0] * ys[0] + ys[0] * ys[0]).powf(-beta);
        prop_assert!((v - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn scan_is_reproducible(seed in any::<u64>()) {
        let k = KernelSpec::ultra(1.0);
        let a = ssr_scan(&k, 3, 100, seed, &PrecisionPolicy::double()).unwrap();
        let b = ssr_scan(&k, 3, 100, seed, &PrecisionPolicy::double()).unwrap();
        prop_assert_eq!(a, b);
    }
}
