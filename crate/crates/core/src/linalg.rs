//! Dense elimination over any [`Scalar`].

use crate::scalar::Scalar;

/// Determinant by Gaussian elimination with partial pivoting. Consumes the
/// row-major matrix.
pub fn det<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let n = a.len();
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let ctx = a[0][0].ctx();
    let mut det = S::one(ctx);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .abs()
                    .partial_cmp(&a[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[piv][col].is_zero() {
            return S::zero(ctx);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            let f = a[r][col].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for c in col + 1..n {
                let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                a[r][c] = v;
            }
        }
    }
    det
}

/// Solves `a x = b` with partial pivoting; `None` if a pivot vanishes.
pub fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(piv, col);
        b.swap(piv, col);
        let p = a[col][col].clone();
        for r in col + 1..n {
            let f = a[r][col].clone() / p.clone();
            for c in col + 1..n {
                let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                a[r][c] = v;
            }
            let v = b[r].clone() - f * b[col].clone();
            b[r] = v;
        }
    }
    let mut x = b.clone();
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ext;

    #[test]
    fn small_determinants() {
        assert_eq!(det(vec![vec![3.0]]), 3.0);
        assert_eq!(det(vec![vec![0.0, 1.0], vec![1.0, 0.0]]), -1.0);
        let d = det(vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]]);
        assert!((d - 18.0).abs() < 1e-13);
        assert_eq!(det(vec![vec![1.0, 2.0], vec![2.0, 4.0]]), 0.0);
    }

    #[test]
    fn hilbert_in_extended_precision() {
        // det H_6 = 1 / 186313420339200000
        let n = 6;
        let h: Vec<Vec<Ext>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Ext::new(256, 1.0) / Ext::new(256, (i + j + 1) as f64))
                    .collect()
            })
            .collect();
        let d = det(h).to_f64();
        let want = 1.0 / 186_313_420_339_200_000.0;
        assert!((d - want).abs() < 1e-14 * want);
    }

    #[test]
    fn solve_recovers_solution() {
        let a = vec![vec![4.0, 1.0, 2.0], vec![1.0, 5.0, 1.0], vec![2.0, 1.0, 6.0]];
        let x = vec![1.0, -2.0, 0.5];
        let b: Vec<f64> = a.iter().map(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        let got = solve(a, b).unwrap();
        assert!(got.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-14));
        assert!(solve(vec![vec![1.0, 1.0], vec![1.0, 1.0]], vec![1.0, 2.0]).is_none());
    }
}
