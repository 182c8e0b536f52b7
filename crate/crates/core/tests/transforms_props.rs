use proptest::prelude::*;
use ultrazero::polycore::Poly;
use ultrazero::transforms::{
    is_degree_independent, jacobi_factorial_transform, jacobi_transform, legendre_transform, scaling_ratios,
    ultra_transform, IserlesSaffSpec,
};

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, 1..=max_len)
}

fn close(a: &Poly, b: &Poly, tol: f64) -> bool {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n).all(|k| {
        let x = a.coeffs().get(k).copied().unwrap_or(0.0);
        let y = b.coeffs().get(k).copied().unwrap_or(0.0);
        (x - y).abs() <= tol * (1.0 + y.abs())
    })
}

#[test]
fn legendre_examples() {
    // x^2 - 1/4 -> P_2 - P_0/4 = (3x^2 - 1)/2 - 1/4
    let t = legendre_transform(&Poly::monomial(vec![-0.25, 0.0, 1.0])).unwrap();
    assert!(close(&t, &Poly::monomial(vec![-0.75, 0.0, 1.5]), 1e-15));
    // x^2 - 1 -> (3/2)(x^2 - 1)
    let t = jacobi_transform(&Poly::monomial(vec![-1.0, 0.0, 1.0]), 0.0, 0.0).unwrap();
    assert!(close(&t, &Poly::monomial(vec![-1.5, 0.0, 1.5]), 1e-15));
    // x^2 -> P_2 / 2
    let t = jacobi_factorial_transform(&Poly::monomial(vec![0.0, 0.0, 1.0]), 0.0, 0.0).unwrap();
    assert!(close(&t, &Poly::monomial(vec![-0.25, 0.0, 0.75]), 1e-15));
}

#[test]
fn ultraspherical_factor_at_half() {
    // x -> 1!/Gamma(2.5) P_1^(1/2,1/2) = (1/Gamma(2.5)) (3/2) x
    let t = ultra_transform(&Poly::monomial(vec![0.0, 1.0]), 0.5).unwrap();
    let g = 0.75 * std::f64::consts::PI.sqrt();
    assert!((t.coeffs()[1] - 1.5 / g).abs() < 1e-14);
}

#[test]
fn g2_kernel_transform_is_a_constant_multiple() {
    for a in [-0.9, -0.3, 0.0, 0.5, 1.0, 2.5, 4.0] {
        let spec = IserlesSaffSpec::ultraspherical_g2_delta(a, 16).unwrap();
        let r = scaling_ratios(&spec, a, 16).unwrap();
        assert!(is_degree_independent(&r, 1e-12), "alpha = {a}");
        assert_eq!(r[0] > 0.0, 2.0 * a + 1.0 > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transforms_are_linear(p in coeffs(12), q in coeffs(12), s in -3.0f64..3.0, a in -0.9f64..3.0, b in -0.9f64..3.0) {
        let (pp, qq) = (Poly::monomial(p), Poly::monomial(q));
        let combo = pp.add(&qq.scale(&s)).unwrap();
        let lhs = ultra_transform(&combo, a).unwrap();
        let rhs = ultra_transform(&pp, a).unwrap().add(&ultra_transform(&qq, a).unwrap().scale(&s)).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
        let lhs = jacobi_transform(&combo, a, b).unwrap();
        let rhs = jacobi_transform(&pp, a, b).unwrap().add(&jacobi_transform(&qq, a, b).unwrap().scale(&s)).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn legendre_is_alpha_zero(p in coeffs(16)) {
        let f = Poly::monomial(p);
        let l = legendre_transform(&f).unwrap();
        prop_assert!(close(&l, &ultra_transform(&f, 0.0).unwrap(), 1e-14));
        prop_assert!(close(&l, &jacobi_transform(&f, 0.0, 0.0).unwrap(), 1e-14));
    }

    #[test]
    fn degree_is_preserved(p in coeffs(16), a in -0.9f64..4.0) {
        let f = Poly::monomial(p).trim(0.0);
        prop_assume!(f.leading().abs() > 1e-3);
        prop_assert_eq!(ultra_transform(&f, a).unwrap().degree(), f.degree());
    }
}
