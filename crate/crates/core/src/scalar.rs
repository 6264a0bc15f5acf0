//! Scalar types in which cardinalities and expectations are evaluated.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

use crate::{Error, Rational, Result};

/// A field-like numeric type able to hold `1 / |G|` and sums of such terms.
///
/// [`Rational`] evaluates exactly; the float impls round.
pub trait Scalar: Num + Clone + Debug + PartialOrd {
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_biguint(value: &BigUint) -> Self;

    fn from_u64(value: u64) -> Self {
        Self::from_biguint(&BigUint::from(value))
    }

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        Self::from_biguint(num) / Self::from_biguint(den)
    }

    fn from_rational(value: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// `1 / value`.
    fn recip_of(value: &BigUint) -> Self {
        Self::one() / Self::from_biguint(value)
    }

    fn pow_u32(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_biguint(value: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(value.clone()))
    }

    fn from_ratio(num: &BigUint, den: &BigUint) -> Self {
        BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn pow_u32(&self, exp: u32) -> Self {
        num_traits::pow::Pow::pow(self, exp)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_biguint(value: &BigUint) -> Self {
        value.to_f64().unwrap_or(f64::INFINITY)
    }

    fn from_rational(value: &Rational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn pow_u32(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_biguint(value: &BigUint) -> Self {
        value.to_f32().unwrap_or(f32::INFINITY)
    }

    fn from_rational(value: &Rational) -> Self {
        ToPrimitive::to_f32(value).unwrap_or(f32::NAN)
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn pow_u32(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
}

/// Formats as `"num/den"`, including integers (`"1/1"`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str_radix(num, 10).map_err(|_| bad())?;
    let den = BigInt::from_str_radix(den, 10).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: u64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Serde adapter writing a [`Rational`] as a `"num/den"` string.
pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{format_rational, parse_rational};
        use crate::Rational;

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.serialize_some(&format_rational(v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

/// Serde adapter writing a [`BigUint`] as a JSON number when it fits in `u64`, else as a
/// decimal string.
pub mod serde_biguint {
    use num_bigint::BigUint;
    use num_traits::{Num, ToPrimitive};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match value.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&value.to_str_radix(10)),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(v) => Ok(BigUint::from(v)),
            Repr::Text(t) => BigUint::from_str_radix(&t, 10).map_err(serde::de::Error::custom),
        }
    }
}
