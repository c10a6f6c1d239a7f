//! Exact arithmetic in the quadratic field ℚ(√2).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::Coefficient;

/// An element `rat + rad·√2` with exact rational parts.
///
/// Every power `2^(k/2)` lands on exactly one component, which is why the
/// `1/√2ⁿ` factors of the position operator never leave the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Radical2Scalar {
    rat: BigRational,
    rad: BigRational,
}

impl Radical2Scalar {
    pub fn new(rat: BigRational, rad: BigRational) -> Self {
        Self { rat, rad }
    }

    pub fn rational(rat: BigRational) -> Self {
        Self { rat, rad: BigRational::zero() }
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(value: i64) -> Self {
        Self::rational(BigRational::from_integer(value.into()))
    }

    pub fn sqrt2() -> Self {
        Self { rat: BigRational::zero(), rad: BigRational::one() }
    }

    /// Rational component.
    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    /// Coefficient of √2.
    pub fn rad_part(&self) -> &BigRational {
        &self.rad
    }

    pub fn is_rational(&self) -> bool {
        self.rad.is_zero()
    }

    /// Returns the rational value when the √2 component vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    /// Galois conjugate `rat − rad·√2`.
    pub fn conjugate(&self) -> Self {
        Self { rat: self.rat.clone(), rad: -self.rad.clone() }
    }

    /// Field norm `rat² − 2·rad²`; zero only for the zero element.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(2.into()) * &self.rad * &self.rad
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    fn two_pow(exp: i32) -> BigRational {
        let magnitude = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            BigRational::from_integer(magnitude)
        } else {
            BigRational::new(BigInt::one(), magnitude)
        }
    }

    /// `2^(k/2)` for any integer `k`.
    pub fn sqrt2_power(k: i32) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::rational(Self::two_pow(k.div_euclid(2)))
        } else {
            Self { rat: BigRational::zero(), rad: Self::two_pow(k.div_euclid(2)) }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let rat = self.rat.to_f64().unwrap_or(f64::NAN);
        let rad = self.rad.to_f64().unwrap_or(f64::NAN);
        rat + rad * std::f64::consts::SQRT_2
    }
}

impl From<BigRational> for Radical2Scalar {
    fn from(rat: BigRational) -> Self {
        Self::rational(rat)
    }
}

impl From<i64> for Radical2Scalar {
    fn from(value: i64) -> Self {
        Self::integer(value)
    }
}

impl Zero for Radical2Scalar {
    fn zero() -> Self {
        Self { rat: BigRational::zero(), rad: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }
}

impl One for Radical2Scalar {
    fn one() -> Self {
        Self { rat: BigRational::one(), rad: BigRational::zero() }
    }
}

impl<'a> Add<&'a Radical2Scalar> for &'a Radical2Scalar {
    type Output = Radical2Scalar;
    fn add(self, rhs: &Radical2Scalar) -> Radical2Scalar {
        Radical2Scalar { rat: &self.rat + &rhs.rat, rad: &self.rad + &rhs.rad }
    }
}

impl<'a> Sub<&'a Radical2Scalar> for &'a Radical2Scalar {
    type Output = Radical2Scalar;
    fn sub(self, rhs: &Radical2Scalar) -> Radical2Scalar {
        Radical2Scalar { rat: &self.rat - &rhs.rat, rad: &self.rad - &rhs.rad }
    }
}

impl<'a> Mul<&'a Radical2Scalar> for &'a Radical2Scalar {
    type Output = Radical2Scalar;
    fn mul(self, rhs: &Radical2Scalar) -> Radical2Scalar {
        let two = BigRational::from_integer(2.into());
        Radical2Scalar {
            rat: &self.rat * &rhs.rat + two * &self.rad * &rhs.rad,
            rad: &self.rat * &rhs.rad + &self.rad * &rhs.rat,
        }
    }
}

impl<'a> Div<&'a Radical2Scalar> for &'a Radical2Scalar {
    type Output = Radical2Scalar;
    fn div(self, rhs: &Radical2Scalar) -> Radical2Scalar {
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero in Q(sqrt 2)");
        let num = self * &rhs.conjugate();
        Radical2Scalar { rat: num.rat / &norm, rad: num.rad / norm }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Radical2Scalar {
            type Output = Radical2Scalar;
            fn $m(self, rhs: Radical2Scalar) -> Radical2Scalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Radical2Scalar {
    type Output = Radical2Scalar;
    fn neg(self) -> Radical2Scalar {
        Radical2Scalar { rat: -self.rat, rad: -self.rad }
    }
}

impl Neg for &Radical2Scalar {
    type Output = Radical2Scalar;
    fn neg(self) -> Radical2Scalar {
        -self.clone()
    }
}

impl Coefficient for Radical2Scalar {
    const EXACT: bool = true;

    fn from_rational(value: &BigRational) -> Self {
        Self::rational(value.clone())
    }

    fn sqrt2_pow(k: i32) -> Self {
        Self::sqrt2_power(k)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_f64(&self) -> f64 {
        Radical2Scalar::to_f64(self)
    }
}

/// Renders as `p/q`, `r/s√2`, or `p/q+r/s√2` (sign folded into the joiner).
impl fmt::Display for Radical2Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.rad.is_zero()) {
            (_, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}√2", self.rad),
            (false, false) => {
                if self.rad.is_negative() {
                    write!(f, "{}-{}√2", self.rat, -self.rad.clone())
                } else {
                    write!(f, "{}+{}√2", self.rat, self.rad)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as an element of Q(sqrt 2)")]
pub struct ParseRadicalError(pub String);

fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => parse_decimal(text),
    }
}

/// Exact value of a decimal literal such as `-12`, `0.5` or `2.5e-3`.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer = BigInt::from_str(&format!("{whole}{frac}")).ok()? * sign;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}

impl FromStr for Radical2Scalar {
    type Err = ParseRadicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRadicalError(s.to_string());
        let text = s.trim();
        let Some(body) = text.strip_suffix("√2") else {
            return parse_rational(text).map(Self::rational).ok_or_else(err);
        };
        // split at the last sign that is not leading
        let split = body.char_indices().rev().find(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i);
        match split {
            Some(i) => {
                let rat = parse_rational(&body[..i]).ok_or_else(err)?;
                let rad_text = &body[i..];
                let rad_text = rad_text.strip_prefix('+').unwrap_or(rad_text);
                let rad = parse_rational(rad_text).ok_or_else(err)?;
                Ok(Self::new(rat, rad))
            }
            None => {
                let rad = parse_rational(body).ok_or_else(err)?;
                Ok(Self::new(BigRational::zero(), rad))
            }
        }
    }
}

impl Serialize for Radical2Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Radical2Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
