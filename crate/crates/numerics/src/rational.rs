use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
///
/// Backed by [`num_rational::BigRational`], which keeps the denominator
/// positive and the fraction fully reduced after every operation. The type
/// round-trips through the decimal-string wire format used by all JSON
/// schemas in this workspace: values with a terminating decimal expansion
/// print as decimals (`-0.55`, `1.3`, `2`), everything else prints as a
/// fraction (`7/3`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `numerator / denominator`. Panics if the denominator is zero.
    pub fn from_frac(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Rational(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        ))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rational(self.0.recip())
    }

    /// Lossy conversion used only for ordering heuristics, never for results.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            return write!(f, "{}", self.0.numer());
        }
        // A fraction terminates in base 10 iff the reduced denominator is
        // of the form 2^a * 5^b.
        let denom = self.0.denom().magnitude().clone();
        let (mut rest, two) = (denom.clone(), BigUint::from(2u32));
        let five = BigUint::from(5u32);
        let mut a = 0u64;
        let mut b = 0u64;
        while (&rest % &two).is_zero() {
            rest /= &two;
            a += 1;
        }
        while (&rest % &five).is_zero() {
            rest /= &five;
            b += 1;
        }
        if !rest.is_one() {
            return write!(f, "{}/{}", self.0.numer(), self.0.denom());
        }
        let scale = a.max(b);
        let pow10 = BigUint::from(10u32).pow(scale as u32);
        let scaled = self.0.numer().magnitude() * &pow10 / &denom;
        let digits = scaled.to_str_radix(10);
        let digits = if (digits.len() as u64) <= scale {
            format!("{}{}", "0".repeat((scale + 1) as usize - digits.len()), digits)
        } else {
            digits
        };
        let split = digits.len() - scale as usize;
        let (int_part, frac_part) = digits.split_at(split);
        let frac_part = frac_part.trim_end_matches('0');
        let sign = if self.0.numer().sign() == Sign::Minus {
            "-"
        } else {
            ""
        };
        if frac_part.is_empty() {
            write!(f, "{sign}{int_part}")
        } else {
            write!(f, "{sign}{int_part}.{frac_part}")
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Error produced when a string is not a valid rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts integers (`-3`), finite decimals (`0.25`, `-.5`) and
    /// fractions (`7/3`). Parsing is exact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRationalError {
            literal: s.to_string(),
            reason,
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(err("empty string"));
        }
        if let Some((num, den)) = t.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| err("bad numerator"))?;
            let den: BigInt = den.trim().parse().map_err(|_| err("bad denominator"))?;
            if den.is_zero() {
                return Err(err("zero denominator"));
            }
            return Ok(Rational(BigRational::new(num, den)));
        }
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, fr)) => (i, fr),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(err("non-digit character"));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err("integer overflow"))?
        };
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(Rational(BigRational::new(BigInt::from(sign) * numer, denom)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(r("-0.55"), Rational::from_frac(-11, 20));
        assert_eq!(r("1.3"), Rational::from_frac(13, 10));
        assert_eq!(r("7/3"), Rational::from_frac(7, 3));
        assert_eq!(r(".5"), Rational::from_frac(1, 2));
        assert_eq!(r("-3"), Rational::from_int(-3));
        assert_eq!(r("0.10"), Rational::from_frac(1, 10));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1.2.3", "1/0", "abc", "1e3", "--2", "1/ "] {
            assert!(bad.parse::<Rational>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn displays_canonical_decimal_strings() {
        assert_eq!(r("-0.55").to_string(), "-0.55");
        assert_eq!(r("1.3").to_string(), "1.3");
        assert_eq!(r("7/3").to_string(), "7/3");
        assert_eq!(r("2").to_string(), "2");
        assert_eq!(r("-0.050").to_string(), "-0.05");
        assert_eq!(r("0").to_string(), "0");
        assert_eq!(Rational::from_frac(1, 8).to_string(), "0.125");
        assert_eq!(Rational::from_frac(-1, 400).to_string(), "-0.0025");
    }

    #[test]
    fn stays_reduced_with_positive_denominator() {
        let x = Rational::from_frac(4, -6);
        assert_eq!(x.numerator(), &BigInt::from(-2));
        assert_eq!(x.denominator(), &BigInt::from(3));
        let y = Rational::from_frac(1, 3) + Rational::from_frac(2, 3);
        assert!(y.is_integer());
    }
}
