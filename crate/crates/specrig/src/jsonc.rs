//! Serde adapters encoding complex numbers as `[re, im]` JSON pairs.
//!
//! Used via `#[serde(with = "crate::jsonc::cpair")]` on `Complex64` fields
//! and `crate::jsonc::cvec` on `Vec<Complex64>` fields. Deserialization
//! rejects non-finite components so files cannot smuggle NaN into a run.

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serializer};

pub mod cpair {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&v.re)?;
        t.serialize_element(&v.im)?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let (re, im) = <(f64, f64)>::deserialize(d)?;
        if !re.is_finite() || !im.is_finite() {
            return Err(D::Error::custom("complex components must be finite"));
        }
        Ok(Complex64::new(re, im))
    }
}

pub mod cvec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for z in v {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<(f64, f64)>::deserialize(d)?;
        pairs
            .into_iter()
            .map(|(re, im)| {
                if !re.is_finite() || !im.is_finite() {
                    Err(D::Error::custom("complex components must be finite"))
                } else {
                    Ok(Complex64::new(re, im))
                }
            })
            .collect()
    }
}
