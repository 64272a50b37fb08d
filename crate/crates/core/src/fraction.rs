//! Exact rational parameters.
//!
//! Radii, rates and gaps enter the integer thresholds through `floor(p * n)`
//! and friends; keeping them as exact fractions means no threshold ever
//! drifts by one because of binary floating point.

use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Fraction = Ratio<i128>;

pub fn frac(numer: i128, denom: i128) -> Fraction {
    Ratio::new(numer, denom)
}

pub fn floor_mul(x: &Fraction, n: usize) -> i128 {
    (x * Fraction::from_integer(n as i128)).floor().to_integer()
}

pub fn ceil_mul(x: &Fraction, n: usize) -> i128 {
    (x * Fraction::from_integer(n as i128)).ceil().to_integer()
}

pub fn to_f64(x: &Fraction) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Rounds `x` down to the nearest integer multiple of `step`.
pub fn floor_to_multiple(x: &Fraction, step: &Fraction) -> Fraction {
    (x / step).floor() * step
}

/// Rounds `x` up to the nearest integer multiple of `step`.
pub fn ceil_to_multiple(x: &Fraction, step: &Fraction) -> Fraction {
    (x / step).ceil() * step
}

pub fn is_multiple_of(x: &Fraction, step: &Fraction) -> bool {
    (x / step).is_integer()
}

/// Parses `"2/3"`, `"0.25"`, `"1e-3"` or `"3"` into an exact fraction.
///
/// Decimal literals are read digit by digit, so `0.1` is exactly `1/10`.
pub fn parse_fraction(s: &str) -> Result<Fraction> {
    let s = s.trim();
    let bad = || Error::Input(format!("cannot parse '{s}' as a fraction"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Input(format!("zero denominator in '{s}'")));
        }
        return Ok(Ratio::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let mut numer: i128 = joined.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    if scale.unsigned_abs() > 30 {
        return Err(bad());
    }
    let pow = 10i128.pow(scale.unsigned_abs());
    Ok(if scale >= 0 { Ratio::from_integer(numer * pow) } else { Ratio::new(numer, pow) })
}

/// `FromStr` wrapper so clap can parse fraction flags directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FracArg(pub Fraction);

impl FromStr for FracArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_fraction(s).map(FracArg).map_err(|e| e.to_string())
    }
}

impl serde::Serialize for FracArg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl std::fmt::Display for FracArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Integer `a.div_ceil(b)` for the signed type used by `Fraction`.
pub fn div_ceil(a: i128, b: i128) -> i128 {
    Integer::div_ceil(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ratios_and_decimals() {
        assert_eq!(parse_fraction("2/3").unwrap(), frac(2, 3));
        assert_eq!(parse_fraction("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_fraction(".1").unwrap(), frac(1, 10));
        assert_eq!(parse_fraction("3").unwrap(), frac(3, 1));
        assert_eq!(parse_fraction("1e-3").unwrap(), frac(1, 1000));
        assert_eq!(parse_fraction("-0.5").unwrap(), frac(-1, 2));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
        assert!(parse_fraction("").is_err());
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(floor_mul(&frac(2, 3), 3), 2);
        assert_eq!(floor_mul(&frac(1, 3), 4), 1);
        assert_eq!(ceil_mul(&frac(1, 3), 4), 2);
        let step = frac(1, 11);
        assert_eq!(floor_to_multiple(&frac(11, 20), &step), frac(6, 11));
        assert_eq!(ceil_to_multiple(&frac(1, 100), &step), frac(1, 11));
        assert!(is_multiple_of(&frac(6, 11), &step));
        assert!(!is_multiple_of(&frac(1, 2), &step));
    }
}
