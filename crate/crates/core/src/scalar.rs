//! Numeric backends.
//!
//! Everything algebraic in this crate is generic over [`Scalar`], which has two
//! implementations: [`Rat`] (exact big rationals, used for integer and rational
//! corner data) and `f64` (used for continual diagrams such as the triangle).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive};

/// Exact rational number.
pub type Rat = BigRational;

/// Absolute tolerance used by the floating backend for breakpoint merging and
/// equality checks.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_rat(r: &Rat) -> Self;

    /// Lossy for `Rat`, identity for `f64`.
    fn to_f64(&self) -> f64;

    /// Exact rational value. Panics on non-finite floats.
    fn to_rat(&self) -> Rat;

    /// Exact equality for `Rat`; `|a - b| <= FLOAT_TOLERANCE` for `f64`.
    fn approx_eq(&self, other: &Self) -> bool;

    /// `Π num / Π den`, computed so that neither backend loses exactness or
    /// overflows on long products.
    fn ratio_of_products(num: &[Self], den: &[Self]) -> Self;

    fn is_exact() -> bool;

    fn approx_le(&self, other: &Self) -> bool {
        self <= other || self.approx_eq(other)
    }

    fn from_usize(v: usize) -> Self {
        Self::from_i64(v as i64)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
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
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rat(&self) -> Rat {
        Rat::from_f64(*self).expect("finite float")
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_TOLERANCE
    }

    fn ratio_of_products(num: &[Self], den: &[Self]) -> Self {
        // interleave factors to keep the running product near 1
        let mut acc = 1.0;
        let n = num.len().max(den.len());
        for k in 0..n {
            if let Some(a) = num.get(k) {
                acc *= a;
            }
            if let Some(b) = den.get(k) {
                acc /= b;
            }
        }
        acc
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for Rat {
    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_rat(&self) -> Rat {
        self.clone()
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn ratio_of_products(num: &[Self], den: &[Self]) -> Self {
        let mut top = BigInt::one();
        let mut bottom = BigInt::one();
        for a in num {
            top *= a.numer();
            bottom *= a.denom();
        }
        for b in den {
            top *= b.denom();
            bottom *= b.numer();
        }
        Rat::new(top, bottom)
    }

    fn is_exact() -> bool {
        true
    }
}

/// `p / q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `true` when the value is zero in the backend's sense.
pub fn is_negligible<T: Scalar>(x: &T) -> bool {
    x.approx_eq(&T::zero())
}
