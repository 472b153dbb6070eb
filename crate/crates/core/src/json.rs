//! JSON helpers for unbounded integers.
//!
//! Integers are written as plain JSON numbers of any length; `serde_json` is
//! built with `arbitrary_precision`, so nothing is lost on the way through.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => {
                let n: serde_json::Number = self.0.to_string().parse().map_err(S::Error::custom)?;
                n.serialize(s)
            }
        }
    }
}

pub(crate) struct OwnedJsonInt(pub BigInt);

impl<'de> Deserialize<'de> for OwnedJsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        let text = n.to_string();
        text.parse::<BigInt>()
            .map(OwnedJsonInt)
            .map_err(|_| D::Error::custom(format!("expected an integer, found {text}")))
    }
}

pub(crate) fn serialize_int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    JsonInt(v).serialize(s)
}

pub(crate) fn deserialize_int<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    OwnedJsonInt::deserialize(d).map(|n| n.0)
}

pub(crate) fn serialize_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(JsonInt))
}

pub(crate) fn deserialize_ints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let raw = Vec::<OwnedJsonInt>::deserialize(d)?;
    Ok(raw.into_iter().map(|n| n.0).collect())
}
