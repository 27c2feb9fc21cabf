//! Word-size primes for the modular engine.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Primes used by the modular engine lie in `[PRIME_LOW, PRIME_HIGH)`.
pub const PRIME_LOW: u64 = 1 << 60;
pub const PRIME_HIGH: u64 = 1 << 62;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62` in descending order. Deterministic; used by
/// certified runs.
pub fn descending_primes() -> impl Iterator<Item = u64> {
    (PRIME_LOW..PRIME_HIGH).rev().filter(|&n| is_prime(n))
}

/// `k` distinct primes sampled from `[2^60, 2^62)`, reproducible from `seed`.
pub fn sample_primes(k: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(k);
    while out.len() < k {
        let mut n = rng.gen_range(PRIME_LOW..PRIME_HIGH) | 1;
        while n < PRIME_HIGH && !is_prime(n) {
            n += 2;
        }
        if n < PRIME_HIGH && !out.contains(&n) {
            out.push(n);
        }
    }
    out
}
