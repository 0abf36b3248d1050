//! Exact rational scalars.
//!
//! Every distance, tolerance and level offset in this crate is a [`Rational`].
//! The textual form is `"p"` for integers and `"p/q"` otherwise, always in
//! lowest terms with a positive denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational number in canonical reduced form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("rational literal {0:?} is not in lowest terms")]
    NotReduced(String),
}

impl Rational {
    /// `numer / denom`, reduced. Panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `1 / 2^exponent`.
    pub fn dyadic(exponent: u32) -> Self {
        let denom = BigInt::one() << exponent as usize;
        Rational(BigRational::new(BigInt::one(), denom))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Absolute difference `|self - other|`.
    pub fn abs_diff(&self, other: &Rational) -> Rational {
        if self >= other {
            self - other
        } else {
            other - self
        }
    }

    /// Lossy conversion for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn no_leading_zero(s: &str) -> bool {
    s == "0" || !s.starts_with('0')
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Strict parse: `-?digits` or `-?digits/digits`, lowest terms, no
    /// whitespace, no `+`, no leading zeros, no `-0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let malformed = || ParseRationalError::Malformed(s.to_string());
        let (numer_txt, denom_txt) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let (negative, magnitude) = match numer_txt.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, numer_txt),
        };
        if !is_digits(magnitude) || !no_leading_zero(magnitude) {
            return Err(malformed());
        }
        if negative && magnitude == "0" {
            return Err(malformed());
        }
        let mut numer: BigInt = magnitude.parse().map_err(|_| malformed())?;
        if negative {
            numer = -numer;
        }
        let denom = match denom_txt {
            None => BigInt::one(),
            Some(d) => {
                if !is_digits(d) || !no_leading_zero(d) {
                    return Err(malformed());
                }
                let denom: BigInt = d.parse().map_err(|_| malformed())?;
                if denom.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(s.to_string()));
                }
                if !numer.gcd(&denom).is_one() {
                    return Err(ParseRationalError::NotReduced(s.to_string()));
                }
                denom
            }
        };
        Ok(Rational(BigRational::new_raw(numer, denom)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_canonical() {
        assert_eq!(Rational::new(6, 4).to_string(), "3/2");
        assert_eq!(Rational::new(-4, 2).to_string(), "-2");
        assert_eq!(Rational::new(3, -9).to_string(), "-1/3");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn strict_parse() {
        assert_eq!("23/10".parse::<Rational>().unwrap(), Rational::new(23, 10));
        assert_eq!("-7".parse::<Rational>().unwrap(), Rational::from_integer(-7));
        assert_eq!("0".parse::<Rational>().unwrap(), Rational::zero());
        for bad in ["", " 1", "1 ", "+1", "1/", "/2", "1/0", "01", "1/02", "-0", "1.5", "a", "1/2/3", "2/4"] {
            assert!(bad.parse::<Rational>().is_err(), "accepted {bad:?}");
        }
        assert!(matches!("2/4".parse::<Rational>(), Err(ParseRationalError::NotReduced(_))));
        assert!(matches!("3/0".parse::<Rational>(), Err(ParseRationalError::ZeroDenominator(_))));
    }

    #[test]
    fn dyadic_offsets() {
        assert_eq!(Rational::dyadic(0), Rational::one());
        assert_eq!(Rational::dyadic(3), Rational::new(1, 8));
        assert_eq!(Rational::dyadic(200).denom().bits(), 201);
    }

    #[test]
    fn arithmetic_and_order() {
        let a = Rational::new(1, 5);
        let b = Rational::new(1, 2);
        assert_eq!(&a + &b, Rational::new(7, 10));
        assert_eq!(&a - &b, Rational::new(-3, 10));
        assert_eq!(&a * &b, Rational::new(1, 10));
        assert_eq!(&a / &b, Rational::new(2, 5));
        assert!(a < b);
        assert_eq!(a.abs_diff(&b), Rational::new(3, 10));
        assert_eq!(b.abs_diff(&a), Rational::new(3, 10));
    }

    #[test]
    fn serde_uses_fraction_strings() {
        let json = serde_json::to_string(&vec![Rational::new(19, 10), Rational::from_integer(2)]).unwrap();
        assert_eq!(json, r#"["19/10","2"]"#);
        let back: Vec<Rational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Rational::new(19, 10), Rational::from_integer(2)]);
        assert!(serde_json::from_str::<Rational>(r#""x/2""#).is_err());
        assert!(serde_json::from_str::<Rational>("1").is_err());
    }
}
