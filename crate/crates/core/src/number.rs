//! Exact rationals and the extended nonnegative reals `[0, ∞]`.
//!
//! Every value that enters a comparison is exact. Decimal text is parsed
//! digit by digit into a rational, so `0.1` is exactly `1/10`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `2^exp` for any signed exponent.
pub fn pow2(exp: i64) -> Rational {
    let magnitude = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rational::from_integer(magnitude)
    } else {
        Rational::new(BigInt::one(), magnitude)
    }
}

/// `⌊x⌋` computed exactly.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn render(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, integers, and decimal literals with an optional exponent
/// (`"1.25"`, `"-3e-2"`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exponent - frac.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, scale.unsigned_abs() as usize);
    }
    Ok(if negative { -value } else { value })
}

/// A value in `[0, ∞]` (finite entries may be negative only where a caller
/// explicitly permits it; capacities and nonnegative functions reject them).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn zero() -> Self {
        Extended::Finite(Rational::zero())
    }

    pub fn from_int(value: i64) -> Self {
        Extended::Finite(int(value))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Extended::Finite(x) if x.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Extended::Finite(x) if x.is_negative())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    /// Multiplication by a finite nonnegative scalar with `0·∞ = 0`.
    pub fn scale(&self, c: &Rational) -> Extended {
        match self {
            Extended::Finite(x) => Extended::Finite(x * c),
            Extended::Infinite if c.is_zero() => Extended::zero(),
            Extended::Infinite => Extended::Infinite,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(x) => to_f64(x),
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Extended::Finite(x) => render(x),
            Extended::Infinite => "inf".to_owned(),
        }
    }
}

impl From<Rational> for Extended {
    fn from(value: Rational) -> Self {
        Extended::Finite(value)
    }
}

impl Default for Extended {
    fn default() -> Self {
        Extended::zero()
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for &Extended {
    type Output = Extended;

    fn add(self, rhs: &Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl Add for Extended {
    type Output = Extended;

    fn add(self, rhs: Extended) -> Extended {
        &self + &rhs
    }
}

impl Mul<&Rational> for &Extended {
    type Output = Extended;

    fn mul(self, rhs: &Rational) -> Extended {
        self.scale(rhs)
    }
}

impl std::iter::Sum for Extended {
    fn sum<I: Iterator<Item = Extended>>(iter: I) -> Self {
        iter.fold(Extended::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Extended {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "+inf" | "Infinity" | "infinity" | "∞" => Ok(Extended::Infinite),
            other => parse_rational(other).map(Extended::Finite),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("1.26").unwrap(), rat(63, 50));
        assert_eq!(parse_rational("-3e-2").unwrap(), rat(-3, 100));
        assert_eq!(parse_rational("2.5E1").unwrap(), int(25));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("9/2").unwrap(), rat(9, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn infinity_conventions() {
        let inf = Extended::Infinite;
        assert_eq!(inf.scale(&int(0)), Extended::zero());
        assert_eq!(&inf + &Extended::from_int(3), Extended::Infinite);
        assert!(Extended::from_int(1_000_000) < inf);
        assert_eq!("inf".parse::<Extended>().unwrap(), inf);
        assert_eq!(render(&rat(9, 2)), "9/2");
        assert_eq!(render(&int(-4)), "-4");
    }

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(3), int(8));
        assert_eq!(pow2(-2), rat(1, 4));
        assert_eq!(floor(&rat(-1, 2)), BigInt::from(-1));
    }
}
