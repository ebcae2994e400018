//! Exact nonnegative rational distances.
//!
//! Every distance, diameter and level in this crate is a [`Scalar`]. Equality
//! is exact: two scalars compare equal iff they denote the same rational.
//!
//! Text forms accepted by [`Scalar::from_str`]:
//!
//! * integers: `3`, `+12`
//! * decimals, optionally with an exponent: `0.5`, `.25`, `1.`, `2.5e-3`
//! * fractions: `1/3`, `-4/6` (the sign is only tolerated so that a negative
//!   value can be reported as such instead of as a syntax error)
//!
//! [`Display`](fmt::Display) writes a terminating decimal whenever the
//! denominator has no prime factor other than 2 and 5, and `p/q` otherwise,
//! so `Display` followed by `from_str` is the identity.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Failure to read a number from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarParseError {
    #[error("`{0}` is not a number")]
    Syntax(String),
    #[error("`{0}` has a zero denominator")]
    ZeroDenominator(String),
    #[error("`{0}` is negative")]
    Negative(String),
}

/// Parse a signed rational from its text form.
pub fn parse_rational(text: &str) -> Result<BigRational, ScalarParseError> {
    let s = text.trim();
    let syntax = || ScalarParseError::Syntax(text.to_string());
    if s.is_empty() {
        return Err(syntax());
    }
    if let Some((p, q)) = s.split_once('/') {
        let numer = parse_integer(p.trim()).ok_or_else(syntax)?;
        let q = q.trim();
        if q.starts_with(['+', '-']) {
            return Err(syntax());
        }
        let denom = parse_integer(q).ok_or_else(syntax)?;
        if denom.is_zero() {
            return Err(ScalarParseError::ZeroDenominator(text.to_string()));
        }
        return Ok(BigRational::new(numer, denom));
    }

    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(at) => {
            let exp: i64 = body[at + 1..].parse().map_err(|_| syntax())?;
            (&body[..at], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(syntax());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(syntax());
    }
    // Keep exponents in a range where the power of ten stays reasonable.
    if exponent.unsigned_abs() > 4096 {
        return Err(syntax());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * Pow::pow(&ten, scale as u64))
    } else {
        BigRational::new(numer, Pow::pow(&ten, scale.unsigned_abs()))
    };
    Ok(value)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// An exact nonnegative rational number.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    /// Wraps a rational, rejecting negative values.
    pub fn new(value: BigRational) -> Option<Self> {
        if value.is_negative() {
            None
        } else {
            Some(Scalar(value))
        }
    }

    pub fn from_integer(value: u64) -> Self {
        Scalar(BigRational::from_integer(value.into()))
    }

    /// `numer / denom`. Panics on a zero denominator.
    pub fn ratio(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "zero denominator");
        Scalar(BigRational::new(numer.into(), denom.into()))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Scalar) -> Option<Scalar> {
        Scalar::new(&self.0 - &other.0)
    }

    /// Half of the value, used to pick a radius strictly below a positive one.
    pub fn halved(&self) -> Scalar {
        Scalar(&self.0 / BigInt::from(2u32))
    }

    /// Lossy conversion for display-only purposes.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let value = parse_rational(s)?;
        Scalar::new(value).ok_or_else(|| ScalarParseError::Negative(s.to_string()))
    }
}

/// Number of decimal digits needed to write `1/denom` exactly, if finite.
fn terminating_digits(denom: &BigInt) -> Option<u64> {
    let mut d = denom.clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut twos = 0u64;
    let mut fives = 0u64;
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    d.is_one().then_some(twos.max(fives))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let numer = self.0.numer();
        let denom = self.0.denom();
        if denom.is_one() {
            return write!(f, "{numer}");
        }
        match terminating_digits(denom) {
            Some(places) => {
                let scaled = numer * Pow::pow(&BigInt::from(10u32), places) / denom;
                let (_, magnitude) = scaled.into_parts();
                let mut digits = magnitude.to_string();
                let places = places as usize;
                if digits.len() <= places {
                    digits = format!("{}{}", "0".repeat(places + 1 - digits.len()), digits);
                }
                let (int_part, frac_part) = digits.split_at(digits.len() - places);
                let sign = if numer.sign() == Sign::Minus { "-" } else { "" };
                write!(f, "{sign}{int_part}.{frac_part}")
            }
            None => write!(f, "{numer}/{denom}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct ScalarVisitor;

impl Visitor<'_> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a nonnegative number or a string such as \"3/4\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
        v.parse().map_err(E::custom)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
        Ok(Scalar::from_integer(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
        self.visit_str(&v.to_string())
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
        // The shortest round-tripping decimal of the float, read exactly.
        self.visit_str(&v.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(s("3"), Scalar::from_integer(3));
        assert_eq!(s("0.5"), Scalar::ratio(1, 2));
        assert_eq!(s(".25"), Scalar::ratio(1, 4));
        assert_eq!(s("1."), Scalar::one());
        assert_eq!(s("2/4"), Scalar::ratio(1, 2));
        assert_eq!(s(" 1/3 "), Scalar::ratio(1, 3));
        assert_eq!(s("2.5e-3"), Scalar::ratio(1, 400));
        assert_eq!(s("1E2"), Scalar::from_integer(100));
        assert_eq!(s("+7"), Scalar::from_integer(7));
        assert_eq!(s("-0"), Scalar::zero());
    }

    #[test]
    fn decimal_parsing_is_exact() {
        // 0.1 + 0.2 == 0.3 holds exactly here, unlike binary floats.
        let sum = s("0.1").as_rational() + s("0.2").as_rational();
        assert_eq!(&sum, s("0.3").as_rational());
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1/-2", "1.2.3", ".", "e5", "1e", "--1", "0x10", "1/ "] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad:?} parsed");
        }
        assert!(matches!("-1".parse::<Scalar>(), Err(ScalarParseError::Negative(_))));
        assert!(matches!("1/0".parse::<Scalar>(), Err(ScalarParseError::ZeroDenominator(_))));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::ratio(1, 2).to_string(), "0.5");
        assert_eq!(Scalar::ratio(1, 3).to_string(), "1/3");
        assert_eq!(Scalar::from_integer(12).to_string(), "12");
        assert_eq!(Scalar::ratio(1, 400).to_string(), "0.0025");
        assert_eq!(Scalar::ratio(7, 20).to_string(), "0.35");
        assert_eq!(Scalar::ratio(5, 6).to_string(), "5/6");
        assert_eq!(Scalar::ratio(25, 8).to_string(), "3.125");
    }

    #[test]
    fn serde_accepts_numbers_and_strings() {
        let v: Vec<Scalar> = serde_json::from_str(r#"[1, 0.5, "1/3", "2.5"]"#).unwrap();
        assert_eq!(v, vec![Scalar::one(), Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::ratio(5, 2)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1","0.5","1/3","2.5"]"#);
        assert!(serde_json::from_str::<Scalar>("-1").is_err());
    }

    proptest! {
        #[test]
        fn display_round_trips(n in 0u64..1_000_000, d in 1u64..5_000) {
            let x = Scalar::ratio(n, d);
            prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
    }
}
