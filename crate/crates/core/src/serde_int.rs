//! JSON encoding for big integers: a JSON number when it fits in 64 bits,
//! otherwise a decimal string. Both forms are accepted on input.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        if let Some(v) = self.0.to_i64() {
            ser.serialize_i64(v)
        } else if let Some(v) = self.0.to_u64() {
            ser.serialize_u64(v)
        } else {
            ser.serialize_str(&self.0.to_string())
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
        v.parse::<BigInt>().map(JsonInt).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        de.deserialize_any(JsonIntVisitor)
    }
}

/// `#[serde(with = "crate::serde_int::big")]`
pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        JsonInt(v.clone()).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        JsonInt::deserialize(de).map(|j| j.0)
    }
}

/// `#[serde(with = "crate::serde_int::big_vec")]`
pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(|x| JsonInt(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<JsonInt>::deserialize(de).map(|v| v.into_iter().map(|j| j.0).collect())
    }
}

pub type PrimeSet = BTreeSet<u64>;
