use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polycore::check_jacobi_params;
use crate::scalar::Scalar;

/// A nonvanishing one-variable factor of fixed sign.
#[derive(Clone)]
pub enum Factor {
    Constant(f64),
    /// `(1 - x)^a (1 + x)^b`, positive on `(-1, 1)`.
    JacobiWeight {
        alpha: f64,
        beta: f64,
    },
    /// `c (1 - x^2)`, with the sign of `c` on `(-1, 1)`.
    OneMinusSquare {
        scale: f64,
    },
    /// Arbitrary function with a declared sign; evaluated in double precision.
    Custom {
        name: String,
        sign: f64,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Constant(c) => write!(f, "Constant({c})"),
            Factor::JacobiWeight { alpha, beta } => write!(f, "JacobiWeight({alpha}, {beta})"),
            Factor::OneMinusSquare { scale } => write!(f, "OneMinusSquare({scale})"),
            Factor::Custom { name, sign, .. } => write!(f, "Custom({name}, sign {sign})"),
        }
    }
}

impl Factor {
    pub fn custom(name: impl Into<String>, sign: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Factor::Custom {
            name: name.into(),
            sign: sign.signum(),
            f: Arc::new(f),
        }
    }

    /// Declared sign on the domain, `+1` or `-1`.
    pub fn sign(&self) -> f64 {
        match self {
            Factor::Constant(c) => c.signum(),
            Factor::JacobiWeight { .. } => 1.0,
            Factor::OneMinusSquare { scale } => scale.signum(),
            Factor::Custom { sign, .. } => *sign,
        }
    }

    pub fn eval<S: Scalar>(&self, x: &S) -> S {
        let ctx = x.ctx();
        let one = S::one(ctx);
        match self {
            Factor::Constant(c) => S::lift(ctx, *c),
            Factor::JacobiWeight { alpha, beta } => {
                let mut v = one.clone();
                if *alpha != 0.0 {
                    v = v * (one.clone() - x.clone()).powf(&S::lift(ctx, *alpha));
                }
                if *beta != 0.0 {
                    v = v * (one + x.clone()).powf(&S::lift(ctx, *beta));
                }
                v
            }
            Factor::OneMinusSquare { scale } => S::lift(ctx, *scale) * (one - x.clone() * x.clone()),
            Factor::Custom { f, .. } => S::lift(ctx, f(x.to_f64())),
        }
    }

    /// Checks the declared sign on a uniform grid of `(lo, hi)`.
    pub fn check_sign_on(&self, lo: f64, hi: f64) -> Result<()> {
        let s = self.sign();
        if s == 0.0 {
            return Err(Error::BadParameter(format!("{self:?} has no definite sign")));
        }
        for i in 1..200 {
            let x = lo + (hi - lo) * i as f64 / 200.0;
            let v = self.eval(&x);
            if !(v * s > 0.0) {
                return Err(Error::BadParameter(format!("{self:?} is {v} at {x}, not of sign {s}")));
            }
        }
        Ok(())
    }
}

/// Open rectangle `x in (x.0, x.1)`, `y in (y.0, y.1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Domain {
    pub fn square(lo: f64, hi: f64) -> Self {
        Domain {
            x: (lo, hi),
            y: (lo, hi),
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > self.x.0 && x < self.x.1 && y > self.y.0 && y < self.y.1
    }

    fn within(&self, outer: &Domain) -> bool {
        self.x.0 >= outer.x.0 && self.x.1 <= outer.x.1 && self.y.0 >= outer.y.0 && self.y.1 <= outer.y.1
    }
}

#[derive(Debug, Clone)]
pub enum KernelFamily {
    /// `e^(xy)`
    ExpXY,
    /// `(x + y)^(-beta)` on the positive quadrant.
    PowerSum { beta: f64 },
    /// `(1 - 2xy + y^2)^(-beta)` inside the unit square.
    UltraKernel { beta: f64 },
    /// `(2a+1)(1 - y^2) (1 - 2xy + y^2)^(-a - 3/2)`.
    G2Kernel { alpha: f64 },
    /// Jacobi generating function `2^(a+b) / (rho (1+y+rho)^b (1-y+rho)^a)`,
    /// `rho = sqrt(1 - 2xy + y^2)`.
    JacobiGenFun { alpha: f64, beta: f64 },
    /// Constant kernel.
    Constant { value: f64 },
    /// `phi(x) psi(y) K(x, y)`.
    FactorWrapped {
        base: Box<KernelSpec>,
        phi: Factor,
        psi: Factor,
    },
    /// `sum_{z in grid} K(x, z) L(z, y)`: composition against a discrete
    /// positive measure.
    Composed {
        left: Box<KernelSpec>,
        right: Box<KernelSpec>,
        grid: Vec<f64>,
    },
}

/// A bivariate kernel together with the rectangle it is studied on.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub domain: Domain,
}

const UNIT: Domain = Domain {
    x: (-1.0, 1.0),
    y: (-1.0, 1.0),
};

impl KernelSpec {
    /// `e^(xy)` sampled on `(-3, 3)^2`.
    pub fn exp_xy() -> Self {
        KernelSpec {
            family: KernelFamily::ExpXY,
            domain: Domain::square(-3.0, 3.0),
        }
    }

    /// `(x+y)^(-beta)` sampled on `(0, 4)^2`.
    pub fn power_sum(beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::BadParameter(format!(
                "power-sum kernel needs beta > 0, got {beta}"
            )));
        }
        Ok(KernelSpec {
            family: KernelFamily::PowerSum { beta },
            domain: Domain::square(0.0, 4.0),
        })
    }

    /// `(1 - 2xy + y^2)^(-beta)` on `(-1, 1)^2`; any real `beta`.
    pub fn ultra(beta: f64) -> Self {
        KernelSpec {
            family: KernelFamily::UltraKernel { beta },
            domain: UNIT,
        }
    }

    pub fn g2(alpha: f64) -> Result<Self> {
        check_jacobi_params(alpha, alpha)?;
        Ok(KernelSpec {
            family: KernelFamily::G2Kernel { alpha },
            domain: UNIT,
        })
    }

    pub fn jacobi_genfun(alpha: f64, beta: f64) -> Result<Self> {
        check_jacobi_params(alpha, beta)?;
        Ok(KernelSpec {
            family: KernelFamily::JacobiGenFun { alpha, beta },
            domain: UNIT,
        })
    }

    pub fn constant(value: f64) -> Self {
        KernelSpec {
            family: KernelFamily::Constant { value },
            domain: UNIT,
        }
    }

    /// `phi(x) psi(y) base(x, y)` on the base domain. Both factors must keep
    /// their declared sign there.
    pub fn factored(base: KernelSpec, phi: Factor, psi: Factor) -> Result<Self> {
        phi.check_sign_on(base.domain.x.0, base.domain.x.1)?;
        psi.check_sign_on(base.domain.y.0, base.domain.y.1)?;
        let domain = base.domain;
        Ok(KernelSpec {
            family: KernelFamily::FactorWrapped {
                base: Box::new(base),
                phi,
                psi,
            },
            domain,
        })
    }

    /// Discrete composition of `left` and `right` over `grid`, which must be
    /// strictly increasing and inside both `left`'s y-range and `right`'s
    /// x-range.
    pub fn composed(left: KernelSpec, right: KernelSpec, grid: Vec<f64>) -> Result<Self> {
        if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadTuple("composition grid must be strictly increasing".into()));
        }
        for &z in &grid {
            if !(z > left.domain.y.0 && z < left.domain.y.1 && z > right.domain.x.0 && z < right.domain.x.1) {
                return Err(Error::BadTuple(format!("grid point {z} outside the shared range")));
            }
        }
        let domain = Domain {
            x: left.domain.x,
            y: right.domain.y,
        };
        Ok(KernelSpec {
            family: KernelFamily::Composed {
                left: Box::new(left),
                right: Box::new(right),
                grid,
            },
            domain,
        })
    }

    /// Restricts to a sub-rectangle. Rejects empty intervals and, for the
    /// kernels defined only on the unit square or positive quadrant,
    /// rectangles that leave their natural domain.
    pub fn with_domain(mut self, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        let d = Domain { x, y };
        if !(x.0 < x.1) || !(y.0 < y.1) {
            return Err(Error::BadInterval {
                lo: x.0.max(y.0),
                hi: x.1.min(y.1),
            });
        }
        let ok = match &self.family {
            KernelFamily::PowerSum { .. } => x.0 >= 0.0 && y.0 >= 0.0,
            KernelFamily::UltraKernel { .. } | KernelFamily::G2Kernel { .. } | KernelFamily::JacobiGenFun { .. } => {
                d.within(&UNIT)
            }
            KernelFamily::FactorWrapped { .. } | KernelFamily::Composed { .. } => d.within(&self.domain),
            _ => x.0.is_finite() && x.1.is_finite() && y.0.is_finite() && y.1.is_finite(),
        };
        if !ok {
            return Err(Error::BadParameter(format!(
                "domain {x:?} x {y:?} leaves the kernel's natural domain"
            )));
        }
        self.domain = d;
        Ok(self)
    }

    /// Short human-readable label used in reports.
    pub fn label(&self) -> String {
        match &self.family {
            KernelFamily::ExpXY => "exp_xy".into(),
            KernelFamily::PowerSum { beta } => format!("power_sum(beta={beta})"),
            KernelFamily::UltraKernel { beta } => format!("ultra(beta={beta})"),
            KernelFamily::G2Kernel { alpha } => format!("g2(alpha={alpha})"),
            KernelFamily::JacobiGenFun { alpha, beta } => format!("jacobi_genfun(alpha={alpha},beta={beta})"),
            KernelFamily::Constant { value } => format!("constant({value})"),
            KernelFamily::FactorWrapped { base, phi, psi } => {
                format!("factored({}, {phi:?}, {psi:?})", base.label())
            }
            KernelFamily::Composed { left, right, grid } => {
                format!("composed({}, {}, {} points)", left.label(), right.label(), grid.len())
            }
        }
    }

    /// Kernel value without a domain check.
    pub fn eval_in<S: Scalar>(&self, x: &S, y: &S) -> S {
        let ctx = x.ctx();
        let one = S::one(ctx);
        let two = S::lift(ctx, 2.0);
        let quad = || one.clone() - two.clone() * x.clone() * y.clone() + y.clone() * y.clone();
        match &self.family {
            KernelFamily::ExpXY => (x.clone() * y.clone()).exp(),
            KernelFamily::PowerSum { beta } => (x.clone() + y.clone()).powf(&S::lift(ctx, -beta)),
            KernelFamily::UltraKernel { beta } => quad().powf(&S::lift(ctx, -beta)),
            KernelFamily::G2Kernel { alpha } => {
                let pref = S::lift(ctx, 2.0 * alpha + 1.0) * (one.clone() - y.clone() * y.clone());
                pref * quad().powf(&S::lift(ctx, -alpha - 1.5))
            }
            KernelFamily::JacobiGenFun { alpha, beta } => {
                let rho = quad().sqrt();
                let p = (one.clone() + y.clone() + rho.clone()).powf(&S::lift(ctx, *beta));
                let q = (one.clone() - y.clone() + rho.clone()).powf(&S::lift(ctx, *alpha));
                S::lift(ctx, 2f64.powf(alpha + beta)) / (rho * p * q)
            }
            KernelFamily::Constant { value } => S::lift(ctx, *value),
            KernelFamily::FactorWrapped { base, phi, psi } => phi.eval(x) * psi.eval(y) * base.eval_in(x, y),
            KernelFamily::Composed { left, right, grid } => {
                let mut acc = S::zero(ctx);
                for &z in grid {
                    let z = S::lift(ctx, z);
                    acc = acc + left.eval_in(x, &z) * right.eval_in(&z, y);
                }
                acc
            }
        }
    }
}

/// `K(x, y)` in double precision; `(x, y)` must lie in the open domain.
pub fn kernel_eval(spec: &KernelSpec, x: f64, y: f64) -> Result<f64> {
    if !spec.domain.contains(x, y) {
        return Err(Error::OutOfDomain { x, y });
    }
    Ok(spec.eval_in(&x, &y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        assert_eq!(kernel_eval(&KernelSpec::exp_xy(), 0.0, 2.5).unwrap(), 1.0);
        assert_eq!(
            kernel_eval(&KernelSpec::power_sum(1.0).unwrap(), 1.0, 1.0).unwrap(),
            0.5
        );
        assert_eq!(kernel_eval(&KernelSpec::ultra(0.5), 0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn out_of_domain() {
        assert!(matches!(
            kernel_eval(&KernelSpec::ultra(1.0), 1.0, 0.0),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(kernel_eval(&KernelSpec::power_sum(1.0).unwrap(), -0.5, 1.0).is_err());
        assert!(KernelSpec::power_sum(0.0).is_err());
    }

    #[test]
    fn jacobi_genfun_reduces_to_legendre_kernel() {
        // a = b = 0 gives (1 - 2xy + y^2)^(-1/2).
        let j = KernelSpec::jacobi_genfun(0.0, 0.0).unwrap();
        let u = KernelSpec::ultra(0.5);
        for &(x, y) in &[(0.1, 0.2), (-0.7, 0.9), (0.95, -0.3)] {
            let (a, b) = (kernel_eval(&j, x, y).unwrap(), kernel_eval(&u, x, y).unwrap());
            assert!((a - b).abs() < 1e-14 * b);
        }
    }

    #[test]
    fn g2_is_prefactor_times_ultra() {
        let g = KernelSpec::g2(0.5).unwrap();
        let u = KernelSpec::ultra(2.0);
        let (x, y) = (0.3, -0.4);
        let want = 2.0 * (1.0 - y * y) * kernel_eval(&u, x, y).unwrap();
        assert!((kernel_eval(&g, x, y).unwrap() - want).abs() < 1e-14 * want);
    }

    #[test]
    fn factor_sign_is_checked() {
        let bad = Factor::custom("x", 1.0, |x| x);
        assert!(KernelSpec::factored(KernelSpec::ultra(1.0), bad, Factor::Constant(1.0)).is_err());
        let ok = KernelSpec::factored(
            KernelSpec::ultra(1.5),
            Factor::Constant(1.0),
            Factor::OneMinusSquare { scale: 1.0 },
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn composition_positive_for_positive_kernels() {
        let m = KernelSpec::composed(KernelSpec::exp_xy(), KernelSpec::exp_xy(), vec![-1.0, 0.0, 1.0]).unwrap();
        let v = kernel_eval(&m, 0.5, -0.25).unwrap();
        let want: f64 = [-1.0f64, 0.0, 1.0]
            .iter()
            .map(|z| (0.5 * z).exp() * (-0.25 * z).exp())
            .sum();
        assert!((v - want).abs() < 1e-14);
        assert!(KernelSpec::composed(KernelSpec::exp_xy(), KernelSpec::exp_xy(), vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn domain_restriction() {
        assert!(KernelSpec::ultra(1.0).with_domain((-1.0, 1.5), (-1.0, 1.0)).is_err());
        assert!(KernelSpec::exp_xy().with_domain((1.0, 0.0), (0.0, 1.0)).is_err());
        assert!(KernelSpec::exp_xy().with_domain((-2.0, 2.0), (-2.0, 2.0)).is_ok());
    }
}
