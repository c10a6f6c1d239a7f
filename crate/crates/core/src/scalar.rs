//! Coefficient fields for the operator algebra.
//!
//! Everything above this module is generic over [`Coefficient`]. The exact
//! field is [`Radical2Scalar`](crate::Radical2Scalar) (ℚ(√2) over big
//! rationals); `f64` and `f32` are provided for quick numeric runs where
//! equality is replaced by a magnitude threshold.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A field that can hold the `2^(k/2)` factors produced by `x = (a + a†)/√2`.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether equality in this field is exact.
    const EXACT: bool;

    fn from_rational(value: &BigRational) -> Self;

    fn from_integer(value: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(value.clone()))
    }

    fn from_i64(value: i64) -> Self {
        Self::from_integer(&BigInt::from(value))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// `2^(k/2)`, exact in ℚ(√2).
    fn sqrt2_pow(k: i32) -> Self;

    /// True when the value should be dropped from a canonical sum.
    fn is_negligible(&self) -> bool;

    fn to_f64(&self) -> f64;
}

macro_rules! impl_float_coefficient {
    ($f:ty, $tol:expr) => {
        impl Coefficient for $f {
            const EXACT: bool = false;

            fn from_rational(value: &BigRational) -> Self {
                value.to_f64().unwrap_or(f64::NAN) as $f
            }

            fn sqrt2_pow(k: i32) -> Self {
                (2.0 as $f).sqrt().powi(k)
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $tol
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_float_coefficient!(f64, 1e-9);
impl_float_coefficient!(f32, 1e-4);
