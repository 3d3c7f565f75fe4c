//! Textual form of field elements: a polynomial in `L`, e.g. `1/2 + 3/4*L - L^2`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{FieldElement, LambdaField, Rational};
use crate::error::{Error, Result};

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coords().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let power = match i {
                0 => String::new(),
                1 => "L".to_owned(),
                k => format!("L^{k}"),
            };
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&mag))?,
                (_, true) => write!(f, "{power}")?,
                (_, false) => write!(f, "{}*{power}", format_rational(&mag))?,
            }
        }
        Ok(())
    }
}

/// `p/q`, or the integer when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    parse_rational_at(s.trim(), 0)
}

fn parse_rational_at(s: &str, offset: usize) -> Result<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = n
        .parse()
        .map_err(|_| Error::parse(offset, format!("expected an integer, found `{n}`")))?;
    let den: BigInt = match d {
        Some(d) => d.parse().map_err(|_| {
            Error::parse(
                offset + s.find('/').unwrap_or(0) + 1,
                format!("expected a denominator, found `{d}`"),
            )
        })?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::parse(offset, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

impl FieldElement {
    /// Parses the textual form in the field `ℚ(λ_q)`. `L` denotes `λ_q`.
    pub fn parse(field: &Arc<LambdaField>, input: &str) -> Result<FieldElement> {
        let mut coords: Vec<Rational> = Vec::new();
        let bytes = input.as_bytes();
        let mut pos = 0;
        let mut any = false;
        while pos < bytes.len() {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos >= bytes.len() {
                break;
            }
            let mut negative = false;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                negative = bytes[pos] == b'-';
                pos += 1;
            } else if any {
                return Err(Error::parse(pos, "expected `+` or `-` between terms"));
            }
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'+' && !(bytes[pos] == b'-' && pos > start) {
                pos += 1;
            }
            let term = input[start..pos].trim_end();
            if term.is_empty() {
                return Err(Error::parse(start, "empty term"));
            }
            let (coef, power) = parse_term(term, start)?;
            let coef = if negative { -coef } else { coef };
            if coords.len() <= power {
                coords.resize(power + 1, Rational::zero());
            }
            coords[power] += coef;
            any = true;
        }
        if !any {
            return Err(Error::parse(0, "empty field element"));
        }
        Ok(FieldElement::from_coords(field, &coords))
    }
}

fn parse_term(term: &str, offset: usize) -> Result<(Rational, usize)> {
    let Some(lpos) = term.find('L') else {
        return Ok((parse_rational_at(term, offset)?, 0));
    };
    let before = term[..lpos].trim_end();
    let coef = if before.is_empty() {
        Rational::one()
    } else {
        let c = before
            .strip_suffix('*')
            .ok_or_else(|| Error::parse(offset + lpos, "expected `*` before `L`"))?;
        parse_rational_at(c.trim(), offset)?
    };
    let after = term[lpos + 1..].trim();
    let power = if after.is_empty() {
        1
    } else {
        let p = after
            .strip_prefix('^')
            .ok_or_else(|| Error::parse(offset + lpos + 1, "expected `^` after `L`"))?;
        p.trim()
            .parse::<usize>()
            .map_err(|_| Error::parse(offset + lpos + 2, format!("bad exponent `{p}`")))?
    };
    Ok((coef, power))
}
