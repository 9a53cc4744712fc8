//! Parsing and formatting of exact rational scalars.
//!
//! Rationals cross the tool boundary as strings, either `"p/q"` or plain
//! integers or decimal literals, so no precision is ever lost.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Formats a rational canonically: `"p"` when the denominator is one,
/// `"p/q"` otherwise (always reduced, sign on the numerator).
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `"p/q"`, integer, or plain decimal (`"-0.25"`) literals.
pub fn parse_rational(raw: &str) -> Result<Rational> {
    let s = raw.trim();
    if s.is_empty() {
        return Err(Error::InvalidRational(raw.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let numer: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRational(raw.to_string()))?;
        let denom: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRational(raw.to_string()))?;
        if denom.is_zero() {
            return Err(Error::InvalidRational(raw.to_string()));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{}0", if negative { "-" } else { "" })
        } else {
            int_part.to_string()
        };
        let int: BigInt = int_part
            .parse()
            .map_err(|_| Error::InvalidRational(raw.to_string()))?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidRational(raw.to_string()));
        }
        let frac: BigInt = frac_part
            .parse()
            .map_err(|_| Error::InvalidRational(raw.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = int.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(signed, scale));
    }
    let int: BigInt = s
        .parse()
        .map_err(|_| Error::InvalidRational(raw.to_string()))?;
    Ok(Rational::from(int))
}
