//! Exact rational scalars and their string form (`"num/den"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Renders `n` for integers and `n/d` otherwise.
pub fn to_string(x: &Q) -> String {
    x.to_string()
}

pub fn parse(s: &str) -> Result<Q> {
    let t = s.trim();
    let v = Q::from_str(t).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(v)
}

/// Serde adapter storing a rational as its exact string form.
pub mod serde_str {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_form() {
        assert_eq!(to_string(&qf(-3, 2)), "-3/2");
        assert_eq!(to_string(&q(1)), "1");
        assert_eq!(parse("-6/4").unwrap(), qf(-3, 2));
        assert_eq!(parse(" 7 ").unwrap(), q(7));
        assert!(parse("1/0x").is_err());
    }
}
