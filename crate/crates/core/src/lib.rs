//! Exact determinant toolkit for the `M(d)` family of `2d x 2d` signed
//! `{-1, 0, 1}` matrices, whose determinant is conjectured to be `(-1)^d`.
//!
//! * [`matrix`] builds `M(d)` and its sparse/dense/text representations.
//! * [`engines`] evaluates determinants four independent ways.
//! * [`campaign`] runs checkpointed, parallel verification over a range of `d`.
//! * [`explore`] exports cofactor and principal-minor sequences.
//! * [`bfile`] reads and writes two-column `index value` sequence files.

pub mod bfile;
pub mod campaign;
pub mod engines;
pub mod error;
pub mod explore;
pub mod matrix;

pub use engines::{conjectured_value, Certification, CrtMode, DetResult, Engine};
pub use error::{Error, Result};
pub use matrix::{build_m, entry, DenseMatrix, EntryAddress, SparseColMatrix};

/// Serializes big integers as decimal strings.
pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| de::Error::custom(format!("invalid integer {s:?}")))
    }
}
