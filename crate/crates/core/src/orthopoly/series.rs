//! Truncated power series with `f64` coefficients.

use crate::error::{Error, Result};

/// Power series truncated after `len` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    c: Vec<f64>,
}

impl Series {
    pub fn new(mut c: Vec<f64>, len: usize) -> Self {
        c.resize(len, 0.0);
        Series { c }
    }

    pub fn constant(v: f64, len: usize) -> Self {
        Series::new(vec![v], len)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.c
    }

    pub fn add(&self, o: &Series) -> Series {
        Series {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Series {
        Series {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.len();
        let mut out = vec![0.0; n];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.c[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Series { c: out }
    }

    fn truncated(&self, len: usize) -> Series {
        Series::new(self.c[..len.min(self.len())].to_vec(), len)
    }

    /// `1 / self` by Newton iteration `b <- b (2 - a b)`, doubling the
    /// number of correct terms each step.
    pub fn recip(&self) -> Result<Series> {
        let a0 = self.c[0];
        if a0 == 0.0 {
            return Err(Error::SeriesDivergence("reciprocal"));
        }
        let n = self.len();
        let mut b = Series::constant(1.0 / a0, 1);
        let mut k = 1;
        while k < n {
            k = (2 * k).min(n);
            let a = self.truncated(k);
            let bk = b.truncated(k);
            let ab = a.mul(&bk);
            let two_minus = Series::constant(2.0, k).add(&ab.scale(-1.0));
            b = bk.mul(&two_minus);
        }
        Ok(b)
    }

    /// Principal square root (positive constant term) by Newton iteration
    /// `s <- (s + a / s) / 2`.
    pub fn sqrt(&self) -> Result<Series> {
        let a0 = self.c[0];
        if !(a0 > 0.0) {
            return Err(Error::SeriesDivergence("square root"));
        }
        let n = self.len();
        let mut s = Series::constant(a0.sqrt(), 1);
        let mut k = 1;
        while k < n {
            k = (2 * k).min(n);
            let sk = s.truncated(k);
            let q = self.truncated(k).mul(&sk.recip()?);
            s = sk.add(&q).scale(0.5);
        }
        Ok(s)
    }

    /// `self^e` for real `e` and positive constant term, by the recurrence
    /// obtained from `a b' = e a' b`.
    pub fn pow(&self, e: f64) -> Result<Series> {
        let a0 = self.c[0];
        if !(a0 > 0.0) {
            return Err(Error::SeriesDivergence("power"));
        }
        let n = self.len();
        let mut b = vec![0.0; n];
        b[0] = a0.powf(e);
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((e + 1.0) * j as f64 - k as f64) * self.c[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a0);
        }
        Ok(Series { c: b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn reciprocal_of_one_minus_t() {
        let r = Series::new(vec![1.0, -1.0], 6).recip().unwrap();
        assert!(close(r.coeffs(), &[1.0; 6], 1e-15));
    }

    #[test]
    fn sqrt_squares_back() {
        let a = Series::new(vec![4.0, 1.0, -0.5, 0.25, 3.0], 9);
        let s = a.sqrt().unwrap();
        assert!(close(s.mul(&s).coeffs(), a.coeffs(), 1e-13));
    }

    #[test]
    fn pow_matches_binomial() {
        // (1 + t)^(-1/2) = sum binom(-1/2, k) t^k
        let p = Series::new(vec![1.0, 1.0], 5).pow(-0.5).unwrap();
        assert!(close(p.coeffs(), &[1.0, -0.5, 0.375, -0.3125, 0.2734375], 1e-15));
    }

    #[test]
    fn pow_agrees_with_sqrt_and_recip() {
        let a = Series::new(vec![1.3, -0.4, 0.9, 0.1], 10);
        assert!(close(a.pow(0.5).unwrap().coeffs(), a.sqrt().unwrap().coeffs(), 1e-13));
        assert!(close(a.pow(-1.0).unwrap().coeffs(), a.recip().unwrap().coeffs(), 1e-13));
    }

    #[test]
    fn zero_constant_term_is_reported() {
        let a = Series::new(vec![0.0, 1.0], 4);
        assert!(matches!(a.recip(), Err(Error::SeriesDivergence(_))));
        assert!(matches!(a.sqrt(), Err(Error::SeriesDivergence(_))));
        assert!(matches!(a.pow(-2.0), Err(Error::SeriesDivergence(_))));
    }
}
