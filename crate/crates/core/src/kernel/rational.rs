use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::KernelError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a decimal with an optional repeating block
/// such as `"-0.708(3)"`.
pub fn parse_rational(s: &str) -> Result<Rational, KernelError> {
    let t = s.trim();
    if t.contains('.') {
        return parse_repeating_decimal(t);
    }
    let err = || KernelError::Parse(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(KernelError::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| err())?)),
    }
}

/// Exact decimal rendering; a repeating tail is wrapped in parentheses,
/// so 17/24 renders as `0.708(3)` and 2/3 as `0.(6)`.
pub fn to_repeating_decimal(r: &Rational) -> String {
    let mut out = String::new();
    if r.is_negative() {
        out.push('-');
    }
    let num = r.numer().abs();
    let den = r.denom().clone();
    let (whole, mut rem) = num.div_rem(&den);
    write!(out, "{whole}").unwrap();
    if rem.is_zero() {
        return out;
    }
    out.push('.');
    let mut digits = String::new();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let ten = BigInt::from(10);
    while !rem.is_zero() {
        if let Some(&pos) = seen.get(&rem) {
            digits.insert(pos, '(');
            digits.push(')');
            break;
        }
        seen.insert(rem.clone(), digits.len());
        rem *= &ten;
        let (d, r2) = rem.div_rem(&den);
        digits.push(char::from(b'0' + d.to_u8().unwrap()));
        rem = r2;
    }
    out.push_str(&digits);
    out
}

/// Inverse of [`to_repeating_decimal`].
pub fn parse_repeating_decimal(s: &str) -> Result<Rational, KernelError> {
    let err = || KernelError::Parse(s.to_string());
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    let (fixed, repeat) = match frac.split_once('(') {
        Some((f, r)) => (f, r.strip_suffix(')').ok_or_else(err)?),
        None => (frac, ""),
    };
    let digits_ok = |x: &str| x.chars().all(|c| c.is_ascii_digit());
    if whole.is_empty() || !digits_ok(whole) || !digits_ok(fixed) || !digits_ok(repeat) {
        return Err(err());
    }
    let ten = BigInt::from(10);
    let pow10 = |n: usize| num_traits::pow(ten.clone(), n);
    let as_int = |x: &str| -> BigInt {
        if x.is_empty() {
            BigInt::zero()
        } else {
            x.parse().unwrap()
        }
    };
    let mut value = Rational::from_integer(as_int(whole));
    value += Rational::new(as_int(fixed), pow10(fixed.len()));
    if !repeat.is_empty() {
        let block = Rational::new(as_int(repeat), pow10(repeat.len()) - BigInt::one());
        value += block / Rational::from_integer(pow10(fixed.len()));
    }
    Ok(if neg { -value } else { value })
}

/// Machine-readable form of a rational: exact numerator and denominator plus
/// a display-only decimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
    pub decimal: String,
}

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            decimal: to_repeating_decimal(r),
        }
    }
}

impl TryFrom<&RationalRepr> for Rational {
    type Error = KernelError;

    fn try_from(repr: &RationalRepr) -> Result<Self, Self::Error> {
        parse_rational(&format!("{}/{}", repr.num, repr.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_repeating_decimal(&rat(45, 8)), "5.625");
        assert_eq!(to_repeating_decimal(&rat(-17, 24)), "-0.708(3)");
        assert_eq!(to_repeating_decimal(&rat(-67, 96)), "-0.69791(6)");
        assert_eq!(to_repeating_decimal(&rat(2, 3)), "0.(6)");
        assert_eq!(to_repeating_decimal(&rat(-19, 6)), "-3.1(6)");
        assert_eq!(to_repeating_decimal(&int(-7)), "-7");
    }

    #[test]
    fn parses_fraction_forms() {
        assert_eq!(parse_rational("-45/8").unwrap(), rat(-45, 8));
        assert_eq!(parse_rational(" 12 ").unwrap(), int(12));
        assert_eq!(parse_rational("0.041(6)").unwrap(), rat(1, 24));
        assert_eq!(parse_rational("1/0"), Err(KernelError::DivisionByZero));
        assert!(parse_rational("x/2").is_err());
        assert!(parse_repeating_decimal("1.2(3").is_err());
    }

    proptest! {
        #[test]
        fn decimal_roundtrip(n in -100_000i64..100_000, d in 1i64..5_000) {
            let r = rat(n, d);
            let shown = to_repeating_decimal(&r);
            prop_assert_eq!(parse_repeating_decimal(&shown).unwrap(), r.clone());
            let repr = RationalRepr::from(&r);
            prop_assert_eq!(Rational::try_from(&repr).unwrap(), r);
        }
    }
}
