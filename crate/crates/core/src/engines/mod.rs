//! Exact determinant engines.
//!
//! | engine       | input            | cost            | trust                     |
//! |--------------|------------------|-----------------|---------------------------|
//! | laplace      | dense, n <= 12   | exponential     | reference oracle          |
//! | bareiss      | dense            | O(n^3) bigint   | certified                 |
//! | modular_crt  | sparse           | O(n^3) per prime| certified or probabilistic|
//! | structural   | sparse M = P - Q | O(n)            | only via cross-checks     |

mod bareiss;
mod laplace;
mod modular;
pub mod primes;
mod structural;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bareiss::det_bareiss;
pub use laplace::{det_laplace, LAPLACE_MAX_DIM};
pub use modular::{crt_reconstruct, det_crt, det_mod_p, hadamard_bound, CrtMode};
pub use structural::{det_structural, split_pq, StructuralSweep, SplitForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Laplace,
    Bareiss,
    ModularCrt,
    Structural,
}

impl Engine {
    pub const ALL: [Engine; 4] = [
        Engine::Laplace,
        Engine::Bareiss,
        Engine::ModularCrt,
        Engine::Structural,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Laplace => "laplace",
            Engine::Bareiss => "bareiss",
            Engine::ModularCrt => "modular_crt",
            Engine::Structural => "structural",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown engine {s:?} (expected laplace, bareiss, modular_crt or structural)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    Certified,
    Probabilistic,
}

/// An exact determinant together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetResult {
    #[serde(with = "crate::bigint_string")]
    pub value: BigInt,
    pub engine: Engine,
    pub certification: Certification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_trace: Option<Vec<(u64, u64)>>,
}

impl DetResult {
    pub(crate) fn certified(value: BigInt, engine: Engine) -> Self {
        Self {
            value,
            engine,
            certification: Certification::Certified,
            prime_trace: None,
        }
    }
}

/// `(-1)^d`, the conjectured value of `det M(d)`.
pub fn conjectured_value(d: u64) -> Result<i32> {
    match d {
        0 => Err(Error::InvalidFamilyIndex(0)),
        d if d % 2 == 1 => Ok(-1),
        _ => Ok(1),
    }
}
