//! Exact rational arithmetic helpers.
//!
//! All utility values, marginal utilities, and solver objectives are
//! `BigRational`s so that argmax sets and ties are decided exactly.
//! Decimal literals (`31.5`, `6.674e-11`) parse to the exact rational
//! they denote; nothing is ever rounded on the way in.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatParseError {
    #[error("empty number literal")]
    Empty,
    #[error("malformed number literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse a rational from any of the accepted literal forms:
/// `7`, `-3`, `3/4`, `31.5`, `.5`, `6.674e-11`.
pub fn parse_rat(text: &str) -> Result<Rat, RatParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RatParseError::Empty);
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| RatParseError::Malformed(text.to_string()))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| RatParseError::Malformed(text.to_string()))?;
        if d.is_zero() {
            return Err(RatParseError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rat::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| RatParseError::Malformed(text.to_string()))
}

/// `[+-]? digits [. digits] [eE [+-] digits]`, also `.5` and `5.`.
fn parse_decimal(s: &str) -> Option<Rat> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().ok()?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let joined = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&joined).ok()? * BigInt::from(sign);
    let scale = frac_part.len() as i64;
    // value = numer * 10^(exp - scale)
    let shift = exp - scale;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        Rat::from_integer(numer * ten.pow(shift as u32))
    } else {
        Rat::new(numer, ten.pow((-shift) as u32))
    };
    Some(value)
}

/// Canonical text form: integers bare, everything else `num/den`.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fixed six-decimal rendering for human-readable output.
pub fn format_rat_decimal(r: &Rat) -> String {
    let scale = BigInt::from(1_000_000);
    let scaled = r * Rat::from_integer(scale.clone());
    // round half away from zero
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        (scaled - half).ceil()
    } else {
        (scaled + half).floor()
    };
    let units = rounded.to_integer();
    let negative = units.is_negative();
    let abs = units.abs();
    let whole = &abs / &scale;
    let frac = &abs % &scale;
    format!(
        "{}{}.{:06}",
        if negative { "-" } else { "" },
        whole,
        frac
    )
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}
