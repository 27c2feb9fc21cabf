use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primes::{descending_primes, inv_mod, mul_mod, sample_primes, PRIME_HIGH};
use super::{Certification, DetResult, Engine};
use crate::error::{Error, Result};
use crate::matrix::SparseColMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CrtMode {
    /// Accumulate primes until the modulus exceeds `2H + 1`.
    Certified,
    /// Use `k` primes sampled with `seed`.
    Probabilistic { k: usize, seed: u64 },
}

/// `det(m) mod p` by Gaussian elimination over `GF(p)`.
pub fn det_mod_p(m: &SparseColMatrix, p: u64) -> Result<u64> {
    if !(2..PRIME_HIGH).contains(&p) {
        return Err(Error::InvalidPrime(p));
    }
    let n = m.dim();
    let mut a = vec![0u64; n * n];
    for (r, c, v) in m.triplets() {
        a[(r - 1) * n + (c - 1)] = if v > 0 { 1 } else { p - 1 };
    }

    let mut det = 1 % p;
    let mut tail: Vec<(usize, u64)> = Vec::with_capacity(n);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| a[r * n + k] != 0) else {
            return Ok(0);
        };
        if piv != k {
            for j in k..n {
                a.swap(piv * n + j, k * n + j);
            }
            det = (p - det) % p;
        }
        let pivot = a[k * n + k];
        det = mul_mod(det, pivot, p);
        let inv = inv_mod(pivot, p);

        tail.clear();
        tail.extend((k + 1..n).filter(|&j| a[k * n + j] != 0).map(|j| (j, a[k * n + j])));

        for i in k + 1..n {
            let lead = a[i * n + k];
            if lead == 0 {
                continue;
            }
            let f = mul_mod(lead, inv, p);
            let row = &mut a[i * n..(i + 1) * n];
            for &(j, b) in &tail {
                let t = mul_mod(f, b, p);
                row[j] = if row[j] >= t { row[j] - t } else { row[j] + p - t };
            }
            row[k] = 0;
        }
    }
    Ok(det)
}

/// `floor(prod_c ||column_c||_2)`, computed exactly as the integer square
/// root of the product of squared column norms.
pub fn hadamard_bound(m: &SparseColMatrix) -> BigUint {
    let mut prod = BigUint::one();
    for col in m.columns() {
        let sq: u64 = col.iter().map(|&(_, v)| (v as i64 * v as i64) as u64).sum();
        if sq == 0 {
            return BigUint::zero();
        }
        if sq != 1 {
            prod *= sq;
        }
    }
    prod.sqrt()
}

/// Combines residues `(p_i, r_i)` into the unique value in the symmetric
/// range `[-(P-1)/2, (P-1)/2]`, `P = prod p_i`. Returns the value and `P`.
pub fn crt_reconstruct(residues: &[(u64, u64)]) -> (BigInt, BigUint) {
    let mut x = BigUint::zero();
    let mut modulus = BigUint::one();
    for &(p, r) in residues {
        let x_mod = (&x % p).to_u64().expect("reduced below p");
        let m_mod = (&modulus % p).to_u64().expect("reduced below p");
        let diff = if r >= x_mod { r - x_mod } else { r + p - x_mod };
        let t = mul_mod(diff, inv_mod(m_mod, p), p);
        x += &modulus * t;
        modulus *= p;
    }
    let half = (&modulus - 1u32) / 2u32;
    let value = if x > half {
        BigInt::from(x) - BigInt::from(modulus.clone())
    } else {
        BigInt::from(x)
    };
    (value, modulus)
}

/// Determinant by residues modulo word-size primes and CRT reconstruction.
pub fn det_crt(m: &SparseColMatrix, mode: CrtMode) -> DetResult {
    let bound = hadamard_bound(m);
    let target = &bound * 2u32 + 1u32;
    let mut trace = Vec::new();
    match mode {
        CrtMode::Certified => {
            let mut modulus = BigUint::one();
            for p in descending_primes() {
                if modulus > target {
                    break;
                }
                trace.push((p, det_mod_p(m, p).expect("prime in range")));
                modulus *= p;
            }
        }
        CrtMode::Probabilistic { k, seed } => {
            for p in sample_primes(k, seed) {
                trace.push((p, det_mod_p(m, p).expect("prime in range")));
            }
        }
    }
    let (value, modulus) = crt_reconstruct(&trace);
    let certification = if modulus > target {
        Certification::Certified
    } else {
        Certification::Probabilistic
    };
    DetResult {
        value,
        engine: Engine::ModularCrt,
        certification,
        prime_trace: Some(trace),
    }
}
