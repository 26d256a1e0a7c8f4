//! Exact rationals in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// A fraction `num/den` with `den >= 1` and `gcd(|num|, den) = 1`.
///
/// Every constructor normalizes, so two equal values always have identical
/// numerator and denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num/den` reduced to lowest terms. Returns `None` when `den == 0`.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Self> {
        let den = den.into();
        if den.is_zero() {
            return None;
        }
        Some(Rational(BigRational::new(num.into(), den)))
    }

    /// Wraps parts the caller knows are already in lowest terms with `den > 0`.
    pub(crate) fn from_reduced(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        Rational(BigRational::new_raw(num, den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
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

    /// Largest integer not exceeding the value (rounds toward negative infinity).
    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `1/self`, or `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    /// Decomposes into `(numerator, denominator)`.
    pub fn into_parts(self) -> (BigInt, BigInt) {
        self.0.into_raw()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

/// Parses `P/Q` or `P`, with an optional sign on `P` only. `Q` must be positive.
impl FromStr for Rational {
    type Err = ParseError;

    fn from_str(src: &str) -> Result<Self, ParseError> {
        let lead = src.len() - src.trim_start().len();
        let text = src.trim();
        let (num_text, den_text, den_pos) = match text.find('/') {
            Some(slash) => (&text[..slash], Some(&text[slash + 1..]), lead + slash + 1),
            None => (text, None, lead + text.len()),
        };

        let num = parse_signed(num_text, lead)?;
        let den = match den_text {
            Some(t) => parse_unsigned(t, den_pos)?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(ParseError::new(den_pos, "denominator must be positive"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

fn parse_signed(text: &str, pos: usize) -> Result<BigInt, ParseError> {
    let (negative, digits, offset) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..], 1),
        Some(b'+') => (false, &text[1..], 1),
        _ => (false, text, 0),
    };
    let magnitude = parse_unsigned(digits, pos + offset)?;
    Ok(if negative { -magnitude } else { magnitude })
}

fn parse_unsigned(text: &str, pos: usize) -> Result<BigInt, ParseError> {
    if text.is_empty() {
        return Err(ParseError::new(pos, "expected digits"));
    }
    if let Some(bad) = text.bytes().position(|b| !b.is_ascii_digit()) {
        let ch = text[bad..].chars().next().unwrap_or('?');
        return Err(ParseError::new(
            pos + bad,
            format!("unexpected character '{ch}'"),
        ));
    }
    Ok(text.parse().expect("ascii digits parse as an integer"))
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.is_integer() && *self.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer((*other).into())))
    }
}

/// An exact fraction with positive denominator, not necessarily in lowest
/// terms. Comparisons cross-multiply, so no gcd is ever taken; this is the
/// cheap form for sums over denominators with millions of bits.
#[derive(Clone, Debug)]
pub struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl Fraction {
    /// `None` when `den == 0`. A negative denominator moves its sign to the numerator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            None
        } else if den.is_negative() {
            Some(Fraction {
                num: -num,
                den: -den,
            })
        } else {
            Some(Fraction { num, den })
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Reduces to lowest terms.
    pub fn reduce(&self) -> Rational {
        Rational(BigRational::new(self.num.clone(), self.den.clone()))
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        (&self.num * r.denom()).cmp(&(r.numer() * &self.den))
    }
}

impl From<Rational> for Fraction {
    fn from(r: Rational) -> Self {
        let (num, den) = r.into_parts();
        Fraction { num, den }
    }
}

impl PartialEq<Rational> for Fraction {
    fn eq(&self, other: &Rational) -> bool {
        self.cmp_rational(other) == Ordering::Equal
    }
}

impl PartialOrd<Rational> for Fraction {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp_rational(other))
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Fraction) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn normalizes_to_lowest_terms_with_positive_denominator() {
        let x = r(6, -14);
        assert_eq!(*x.numer(), BigInt::from(-3));
        assert_eq!(*x.denom(), BigInt::from(7));
        assert!(Rational::new(1, 0).is_none());
    }

    #[test]
    fn floor_rounds_toward_negative_infinity() {
        assert_eq!(r(7, 3).floor(), BigInt::from(2));
        assert_eq!(r(-7, 3).floor(), BigInt::from(-3));
        assert_eq!(r(-6, 3).floor(), BigInt::from(-2));
    }

    #[test]
    fn parses_seed_syntax() {
        assert_eq!("6/7".parse::<Rational>().unwrap(), r(6, 7));
        assert_eq!(" -3/9 ".parse::<Rational>().unwrap(), r(-1, 3));
        assert_eq!("+5".parse::<Rational>().unwrap(), r(5, 1));

        let err = "6/x".parse::<Rational>().unwrap_err();
        assert_eq!(err.pos, 2);
        let err = "1/-7".parse::<Rational>().unwrap_err();
        assert_eq!(err.pos, 2);
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("/3".parse::<Rational>().is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&r(6, 7) + &r(1, 112), r(97, 112));
        assert_eq!(&r(1, 2) - &r(1, 3), r(1, 6));
        assert_eq!(r(2, 3).recip().unwrap(), r(3, 2));
        assert!(Rational::zero().recip().is_none());
        assert!(r(1, 3) < r(1, 2));
        assert_eq!(r(4, 2), 2);
    }

    #[test]
    fn unreduced_fractions_compare_by_value() {
        let f = Fraction::new(10, 20).unwrap();
        assert_eq!(f, r(1, 2));
        assert!(f < r(2, 3));
        assert!(f > r(-1, 2));
        assert_eq!(f.reduce(), r(1, 2));
        assert_eq!(Fraction::new(3, -6).unwrap(), r(-1, 2));
        assert_eq!(Fraction::new(2, 4).unwrap(), Fraction::new(3, 6).unwrap());
        assert!(Fraction::new(1, 0).is_none());
    }
}
