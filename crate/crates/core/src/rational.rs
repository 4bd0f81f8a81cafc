//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn one_over(n: u64) -> Q {
    Q::new(BigInt::one(), BigInt::from(n))
}

pub fn ratio(num: usize, den: usize) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Renders as `p/q`, or `p` when the denominator is one.
pub fn to_text(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse(s: &str) -> Result<Q> {
    let bad = || Error::InvalidArgument(format!("`{s}` is not a rational p/q"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Decimal rendering with `digits` places, truncated toward zero.
pub fn to_decimal(v: &Q, digits: usize) -> String {
    let neg = v.is_negative();
    let a = v.abs();
    let int = a.trunc().to_integer();
    let mut frac = a.fract();
    let mut s = format!("{}{}", if neg { "-" } else { "" }, int);
    if digits > 0 {
        s.push('.');
        for _ in 0..digits {
            frac *= BigInt::from(10);
            let d = frac.trunc().to_integer();
            s.push_str(&d.to_string());
            frac = frac.fract();
        }
    }
    s
}

/// `floor(x / step) * step`.
pub fn floor_to_grid(x: &Q, step: &Q) -> Q {
    (x / step).floor() * step
}

pub mod serde_text {
    //! Serde adapter storing a rational as its `"p/q"` string.
    use super::{parse, to_text, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_keyed {
    //! Serde adapter for maps from string-keyed values to rationals, stored
    //! as `{"<key>": "p/q"}`.
    use std::collections::BTreeMap;
    use std::fmt::Display;
    use std::str::FromStr;

    use super::{parse, to_text, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<K: Display, S: Serializer>(m: &BTreeMap<K, Q>, s: S) -> Result<S::Ok, S::Error> {
        let text: BTreeMap<String, String> = m.iter().map(|(k, v)| (k.to_string(), to_text(v))).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, K, D>(d: D) -> Result<BTreeMap<K, Q>, D::Error>
    where
        K: FromStr + Ord,
        K::Err: Display,
        D: Deserializer<'de>,
    {
        let text = BTreeMap::<String, String>::deserialize(d)?;
        text.into_iter()
            .map(|(k, v)| {
                let k = k.parse::<K>().map_err(serde::de::Error::custom)?;
                let v = parse(&v).map_err(serde::de::Error::custom)?;
                Ok((k, v))
            })
            .collect()
    }
}
