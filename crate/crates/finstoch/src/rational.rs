//! Exact rational arithmetic.
//!
//! Every probability value in this crate is a [`Rat`]: an arbitrary-precision
//! rational, always in lowest terms with a positive denominator. There is no
//! floating point anywhere in the engine.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// Shorthand constructor from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

/// The rational zero.
pub fn zero() -> Rat {
    Rat::zero()
}

/// The rational one.
pub fn one() -> Rat {
    Rat::one()
}

/// Parses `"a/b"` or `"a"` with exact integer arithmetic.
///
/// Whitespace around the number and around the slash is tolerated. A zero
/// denominator or malformed text is a validation error, never a panic.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let trimmed = text.trim();
    let parse_int = |part: &str| -> Result<BigInt> {
        part.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::ParseRational {
                text: text.to_owned(),
                reason: e.to_string(),
            })
    };
    match trimmed.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(trimmed)?)),
        Some((numer, denom)) => {
            let n = parse_int(numer)?;
            let d = parse_int(denom)?;
            if d.is_zero() {
                return Err(Error::ZeroDenominator(text.to_owned()));
            }
            Ok(Rat::new(n, d))
        }
    }
}

/// Renders a rational in lowest terms, as `"a/b"` or plain `"a"` for integers.
pub fn format_rat(value: &Rat) -> String {
    value.to_string()
}

/// Sums a slice of rationals exactly.
pub fn sum(values: &[Rat]) -> Rat {
    values.iter().fold(Rat::zero(), |acc, v| acc + v)
}
