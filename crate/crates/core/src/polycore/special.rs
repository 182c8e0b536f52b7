//! Rising factorial and log-Gamma.

use std::f64::consts::PI;

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (x + k as f64))
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln |Gamma(x)|` together with the sign of `Gamma(x)`.
///
/// Returns `(f64::INFINITY, 1.0)` at the poles `x = 0, -1, -2, ...`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        return (f64::INFINITY, 1.0);
    }
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let s = (PI * x).sin();
        let (lg, sg) = ln_gamma_signed(1.0 - x);
        return ((PI / s.abs()).ln() - lg, sg * s.signum());
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let lg = 0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln();
    (lg, 1.0)
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_signed(x).0
}

/// `Gamma(x)`; exact at positive integers up to 171.
pub fn gamma(x: f64) -> f64 {
    if (1.0..=171.0).contains(&x) && x == x.floor() {
        return (1..x as usize).map(|k| k as f64).product();
    }
    let (lg, s) = ln_gamma_signed(x);
    s * lg.exp()
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 20 {
        (1..=n).map(|k| k as f64).product::<f64>().ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(7.3, 0), 1.0);
        assert_eq!(pochhammer(1.0, 4), 24.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn pochhammer_step_identity() {
        for &x in &[-3.7, -0.5, 0.0, 0.25, 1.0, 2.5, 11.0] {
            for n in 0..30 {
                let lhs = pochhammer(x, n + 1);
                let rhs = pochhammer(x, n) * (x + n as f64);
                assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((ln_gamma(100.0) - 359.134_205_369_575_4).abs() < 1e-10);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert_eq!(ln_gamma_signed(-1.5).1, 1.0);
        assert_eq!(ln_gamma_signed(-0.5).1, -1.0);
        assert!(ln_gamma(0.0).is_infinite());
    }

    #[test]
    fn factorials() {
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(10) - 3_628_800f64.ln()).abs() < 1e-13);
        assert!((ln_factorial(25) - ln_gamma(26.0)).abs() < 1e-12);
    }
}
