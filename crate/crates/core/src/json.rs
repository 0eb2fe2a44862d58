//! JSON helpers: integers above `2^53` are written as decimal strings so
//! that consumers with double-precision numbers read them exactly.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serializer};

pub(crate) const SAFE_MAX: u64 = 1 << 53;

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(i64),
    Str(String),
}

fn parse<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    use serde::de::Error;
    match NumOrStr::deserialize(d)? {
        NumOrStr::Num(n) => Ok(BigInt::from(n)),
        NumOrStr::Str(s) => s.parse().map_err(D::Error::custom),
    }
}

pub(crate) mod big_uint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        match x.to_u64() {
            Some(v) if v <= SAFE_MAX => ser.serialize_u64(v),
            _ => ser.serialize_str(&x.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        use serde::de::Error;
        parse(d)?
            .to_biguint()
            .ok_or_else(|| D::Error::custom("expected a non-negative integer"))
    }
}

/// Safe rendering of a `u64` as a JSON value.
pub fn u64_value(x: u64) -> serde_json::Value {
    if x <= SAFE_MAX {
        x.into()
    } else {
        x.to_string().into()
    }
}

/// Safe rendering of an arbitrary integer as a JSON value.
pub fn big_int_value(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) if v.unsigned_abs() <= SAFE_MAX => v.into(),
        _ => x.to_string().into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "big_uint")]
        x: BigUint,
    }

    #[test]
    fn large_values_become_strings() {
        let h = Holder {
            x: BigUint::from(SAFE_MAX + 1),
        };
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"x":"9007199254740993"}"#);
        assert_eq!(serde_json::from_str::<Holder>(&text).unwrap(), h);
        let small = Holder {
            x: BigUint::from(SAFE_MAX),
        };
        assert_eq!(
            serde_json::to_string(&small).unwrap(),
            r#"{"x":9007199254740992}"#
        );
        assert_eq!(
            u64_value(SAFE_MAX + 1),
            serde_json::json!("9007199254740993")
        );
        assert_eq!(big_int_value(&BigInt::from(-7)), serde_json::json!(-7));
        assert_eq!(
            big_int_value(&-BigInt::from(SAFE_MAX + 1)),
            serde_json::json!("-9007199254740993")
        );
    }
}
