//! Scalar abstraction shared by the double and extended precision paths.
//!
//! Everything numerically delicate in the crate (Jacobi recurrences, root
//! refinement, kernel minors) is written once against [`Scalar`] and
//! instantiated with either `f64` or [`Ext`], an arbitrary precision binary
//! float backed by `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Real scalar usable by the generic numerical kernels.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Construction context: `()` for `f64`, the working bit count for [`Ext`].
    type Ctx: Copy + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn lift(ctx: Self::Ctx, x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Unit roundoff of the working precision.
    fn unit_roundoff(ctx: Self::Ctx) -> f64;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    /// `self^e` for `self > 0`.
    fn powf(&self, e: &Self) -> Self;
    fn is_zero(&self) -> bool;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::lift(ctx, 0.0)
    }
    fn one(ctx: Self::Ctx) -> Self {
        Self::lift(ctx, 1.0)
    }
    fn from_usize(ctx: Self::Ctx, n: usize) -> Self {
        Self::lift(ctx, n as f64)
    }
    fn like(&self, x: f64) -> Self {
        Self::lift(self.ctx(), x)
    }
    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    type Ctx = ();

    fn ctx(&self) {}
    fn lift(_: (), x: f64) -> f64 {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn unit_roundoff(_: ()) -> f64 {
        f64::EPSILON / 2.0
    }
    fn abs(&self) -> f64 {
        f64::abs(*self)
    }
    fn sqrt(&self) -> f64 {
        f64::sqrt(*self)
    }
    fn exp(&self) -> f64 {
        f64::exp(*self)
    }
    fn ln(&self) -> f64 {
        f64::ln(*self)
    }
    fn powf(&self, e: &f64) -> f64 {
        f64::powf(*self, *e)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// Extended precision real. Binary operations run at the larger of the two
/// operand precisions.
#[derive(Clone)]
pub struct Ext {
    value: BigFloat,
    bits: usize,
}

impl Ext {
    pub fn new(bits: usize, x: f64) -> Self {
        Ext {
            value: BigFloat::from_f64(x, bits),
            bits,
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    fn wrap(value: BigFloat, bits: usize) -> Self {
        Ext { value, bits }
    }

    /// `self^e` by squaring and one square root when `2e` is a small
    /// integer and `self > 0`; far cheaper than the general `exp(e ln x)`.
    fn half_integer_pow(&self, e: &Ext, bits: usize) -> Option<Ext> {
        let ef = e.to_f64();
        let twice = 2.0 * ef;
        if !(twice.fract() == 0.0 && twice.abs() <= 256.0) || !self.value.is_positive() {
            return None;
        }
        if Ext::new(bits, ef).value != e.value {
            return None;
        }
        let mut n = ef.abs().floor() as u32;
        let one = Ext::new(bits, 1.0);
        let mut acc = one.clone();
        let mut base = Ext::wrap(self.value.clone(), bits);
        if twice.abs() % 2.0 == 1.0 {
            acc = base.sqrt();
        }
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        Some(if ef < 0.0 { one / acc } else { acc })
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({:e}; {} bits)", self.to_f64(), self.bits)
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! ext_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Ext {
            type Output = Ext;
            fn $method(self, rhs: Ext) -> Ext {
                let bits = self.bits.max(rhs.bits);
                Ext::wrap(self.value.$method(&rhs.value, bits, RM), bits)
            }
        }
    };
}

ext_binop!(Add, add);
ext_binop!(Sub, sub);
ext_binop!(Mul, mul);
ext_binop!(Div, div);

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext::wrap(self.value.neg(), self.bits)
    }
}

impl Scalar for Ext {
    type Ctx = usize;

    fn ctx(&self) -> usize {
        self.bits
    }
    fn lift(bits: usize, x: f64) -> Ext {
        Ext::new(bits, x)
    }

    fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        let Some((words, _, sign, exp, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        // Mantissa is normalized with its most significant bit set in the
        // top word; the value is 0.m * 2^exp.
        let top = *words.last().unwrap_or(&0) as f64;
        let e = exp - 64;
        let v = if e < -1000 {
            top * 2f64.powi(-1000) * 2f64.powi(e + 1000)
        } else {
            top * 2f64.powi(e)
        };
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    fn unit_roundoff(bits: usize) -> f64 {
        2f64.powi(-(bits as i32))
    }

    fn abs(&self) -> Ext {
        Ext::wrap(self.value.abs(), self.bits)
    }
    fn sqrt(&self) -> Ext {
        Ext::wrap(self.value.sqrt(self.bits, RM), self.bits)
    }
    fn exp(&self) -> Ext {
        CONSTS.with(|cc| Ext::wrap(self.value.exp(self.bits, RM, &mut cc.borrow_mut()), self.bits))
    }
    fn ln(&self) -> Ext {
        CONSTS.with(|cc| Ext::wrap(self.value.ln(self.bits, RM, &mut cc.borrow_mut()), self.bits))
    }
    fn powf(&self, e: &Ext) -> Ext {
        let bits = self.bits.max(e.bits);
        if let Some(v) = self.half_integer_pow(e, bits) {
            return v;
        }
        CONSTS.with(|cc| Ext::wrap(self.value.pow(&e.value, bits, RM, &mut cc.borrow_mut()), bits))
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Working precision selected by callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    Extended { bits: u32 },
}

impl Precision {
    pub fn validate(self) -> Result<Self> {
        match self {
            Precision::Extended { bits } if bits < 64 => Err(Error::BadParameter(format!(
                "extended precision needs at least 64 bits, got {bits}"
            ))),
            p => Ok(p),
        }
    }

    pub fn is_extended(self) -> bool {
        matches!(self, Precision::Extended { .. })
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Double => f.write_str("double"),
            Precision::Extended { bits } => write!(f, "extended:{bits}"),
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("double") {
            return Ok(Precision::Double);
        }
        if let Some(bits) = s.strip_prefix("extended:") {
            let bits: u32 = bits
                .parse()
                .map_err(|_| Error::Config(format!("bad bit count in precision '{s}'")))?;
            return Precision::Extended { bits }.validate();
        }
        if s.eq_ignore_ascii_case("extended") {
            return Ok(Precision::Extended { bits: 256 });
        }
        Err(Error::Config(format!("unknown precision '{s}'")))
    }
}

/// Precision mode plus the tolerances that go with it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub mode: Precision,
    /// Coefficients below `tau_trim * max|c|` are dropped when trimming.
    pub tau_trim: f64,
    /// Root classification tolerance.
    pub tau_root: f64,
    /// Relative threshold below which a determinant sign is indeterminate.
    pub tau_det: f64,
}

impl PrecisionPolicy {
    pub const DEFAULT_TAU_TRIM: f64 = 1e-12;
    pub const DEFAULT_TAU_ROOT: f64 = 1e-9;

    pub fn double() -> Self {
        PrecisionPolicy {
            mode: Precision::Double,
            tau_trim: Self::DEFAULT_TAU_TRIM,
            tau_root: Self::DEFAULT_TAU_ROOT,
            tau_det: 1e-11,
        }
    }

    pub fn extended(bits: u32) -> Self {
        PrecisionPolicy {
            mode: Precision::Extended { bits },
            tau_trim: Self::DEFAULT_TAU_TRIM,
            tau_root: Self::DEFAULT_TAU_ROOT,
            tau_det: 2f64.powi(-(bits as i32) / 2).max(1e-40),
        }
    }

    pub fn for_mode(mode: Precision) -> Self {
        match mode {
            Precision::Double => Self::double(),
            Precision::Extended { bits } => Self::extended(bits),
        }
    }

    pub fn validate(self) -> Result<Self> {
        self.mode.validate()?;
        for (name, v) in [
            ("tau_trim", self.tau_trim),
            ("tau_root", self.tau_root),
            ("tau_det", self.tau_det),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::BadParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(self)
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self::double()
    }
}
