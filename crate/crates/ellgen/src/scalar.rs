//! Coefficient scalars.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One};

/// Ring of coefficients. Division is only used through [`Field`].
pub trait Scalar:
    Num + std::ops::Neg<Output = Self> + FromPrimitive + Clone + Debug + Display + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits scalar")
    }
}

impl<T> Scalar for T where
    T: Num + std::ops::Neg<Output = T> + FromPrimitive + Clone + Debug + Display + Send + Sync + 'static
{
}

/// Scalars with exact (or floating) division.
pub trait Field: Scalar {
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }
}

impl Field for BigRational {}
impl Field for f64 {}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Render a rational as `p` or `p/q`.
pub fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render an exponent stored in halves.
pub fn fmt_half(e: i64) -> String {
    if e % 2 == 0 {
        (e / 2).to_string()
    } else {
        format!("{}/2", e)
    }
}

pub fn to_i128(r: &BigRational) -> Option<i128> {
    use num_traits::ToPrimitive;
    if !is_integer(r) {
        return None;
    }
    r.numer().to_i128()
}

pub fn from_i128(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
