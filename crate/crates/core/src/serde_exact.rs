//! Lossless JSON encodings for exact numbers.
//!
//! Rationals are written as `"num/den"` strings (`"n"` when integral).
//! Integers outside the signed 64-bit range are written as decimal strings,
//! everything else as plain JSON numbers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serializer};

pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let parse = |t: &str| BigInt::from_str(t.trim()).map_err(|e| format!("bad integer `{t}`: {e}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse(s)?)),
        Some((n, d)) => {
            let d = parse(d)?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(BigRational::new(parse(n)?, d))
        }
    }
}

pub fn rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(r))
}

pub fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).map_err(de::Error::custom)
}

pub fn rationals<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational_to_string))
}

pub fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
    Vec::<String>::deserialize(d)?
        .iter()
        .map(|s| parse_rational(s).map_err(de::Error::custom))
        .collect()
}

pub fn integer<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match n.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&n.to_string()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Num(i64),
    Str(String),
}

pub fn de_integer<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    match IntRepr::deserialize(d)? {
        IntRepr::Num(v) => Ok(BigInt::from(v)),
        IntRepr::Str(s) => BigInt::from_str(&s).map_err(de::Error::custom),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use serde::Serialize;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Probe {
        #[serde(serialize_with = "rational", deserialize_with = "de_rational")]
        r: BigRational,
        #[serde(serialize_with = "integer", deserialize_with = "de_integer")]
        n: BigInt,
    }

    #[test]
    fn round_trip() {
        let big: BigInt = BigInt::from(2u8).pow(70u32) * BigInt::from(3u8);
        let p = Probe {
            r: rat(-7, 3),
            n: big.clone(),
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, format!("{{\"r\":\"-7/3\",\"n\":\"{big}\"}}"));
        assert_eq!(serde_json::from_str::<Probe>(&s).unwrap(), p);
        let small = Probe {
            r: rat(4, 2),
            n: BigInt::from(i64::MIN),
        };
        let s = serde_json::to_string(&small).unwrap();
        assert_eq!(s, format!("{{\"r\":\"2\",\"n\":{}}}", i64::MIN));
        assert_eq!(serde_json::from_str::<Probe>(&s).unwrap(), small);
        assert!(parse_rational("1/0").is_err());
    }
}
