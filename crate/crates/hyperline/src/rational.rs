//! Exact rational scalars.
//!
//! The whole engine computes over `Q = BigRational`; nothing is ever rounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{EngineError, Result};

pub type Q = BigRational;

/// The rational `n/1`.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// The rational `p/q`. Panics on `q = 0`; test/fixture helper.
pub fn qr(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// The rational value at a natural-number index.
pub fn q_of_index(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign(q: &Q) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Smallest natural number `>= q`, clamped below at zero.
pub fn ceil_to_u64(q: &Q) -> Result<u64> {
    if q.is_negative() {
        return Ok(0);
    }
    let c = q.ceil().to_integer();
    u64::try_from(&c).map_err(|_| EngineError::ModulusOverflow(u64::MAX))
}

/// Parse `p`, `-p`, `p/q` or `-p/q` with arbitrary-precision parts.
pub fn parse_rational(text: &str) -> Result<Q> {
    let s = text.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let make = |p: &str, q: &str| -> Result<Q> {
        let num: BigInt = p
            .parse()
            .map_err(|_| EngineError::Argument(format!("bad rational literal `{text}`")))?;
        let den: BigInt = q
            .parse()
            .map_err(|_| EngineError::Argument(format!("bad rational literal `{text}`")))?;
        if den.is_zero() {
            return Err(EngineError::Argument(format!(
                "zero denominator in `{text}`"
            )));
        }
        Ok(Q::new(num, den))
    };
    let q = match body.split_once('/') {
        Some((p, d)) => make(p, d)?,
        None => make(body, "1")?,
    };
    Ok(if neg { -q } else { q })
}

/// Render a rational as `p` or `p/q`.
pub fn show_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_show_round_trip() {
        for s in ["0", "5", "-5", "1/2", "-3/4", "22/7"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(show_rational(&q), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_rational("2/4").unwrap(), qr(1, 2));
        assert_eq!(parse_rational("4/2").unwrap(), qi(2));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn ceil_clamps_negatives() {
        assert_eq!(ceil_to_u64(&qr(-7, 2)).unwrap(), 0);
        assert_eq!(ceil_to_u64(&qr(7, 2)).unwrap(), 4);
    }
}
