//! Cross-engine agreement on small {-1, 0, 1} matrices.
//!
//! The Leibniz sum below is the independent oracle; Laplace is checked
//! against it, and every other engine against Laplace.

use detconj::engines::{
    det_bareiss, det_crt, det_laplace, det_mod_p, det_structural, hadamard_bound, CrtMode,
};
use detconj::{DenseMatrix, SparseColMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn leibniz(rows: &[Vec<i64>]) -> i64 {
    let n = rows.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i64;
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let prod: i64 = (0..n).map(|i| rows[i][p[i]]).product();
        total += if inversions % 2 == 0 { prod } else { -prod };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect()).collect()
}

fn mod_p(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.try_into().unwrap()
}

/// Every engine on one matrix; panics on any disagreement.
fn check_all(rows: &[Vec<i64>]) {
    let dense = DenseMatrix::from_rows(rows);
    let sparse = dense.to_sparse().unwrap();
    let lap = det_laplace(&dense).unwrap().value;
    let bar = det_bareiss(&dense).value;
    let crt = det_crt(&sparse, CrtMode::Certified);
    assert_eq!(bar, lap, "bareiss vs laplace on {rows:?}");
    assert_eq!(crt.value, lap, "crt vs laplace on {rows:?}");
    for &(p, r) in crt.prime_trace.as_ref().unwrap() {
        assert_eq!(det_mod_p(&sparse, p).unwrap(), mod_p(&bar, p));
        assert_eq!(r, mod_p(&bar, p));
    }
    for p in [2u64, 3, 7, 1_000_000_007] {
        assert_eq!(det_mod_p(&sparse, p).unwrap(), mod_p(&bar, p), "p={p} on {rows:?}");
    }
    assert!(BigUint::try_from(bar.abs()).unwrap() <= hadamard_bound(&sparse));
}

#[test]
fn laplace_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 0..=6 {
        for _ in 0..200 {
            let rows = random_rows(&mut rng, n);
            let lap = det_laplace(&DenseMatrix::from_rows(&rows)).unwrap().value;
            assert_eq!(lap, BigInt::from(leibniz(&rows)), "{rows:?}");
        }
    }
}

#[test]
fn exhaustive_up_to_three() {
    for n in 1..=3usize {
        let cells = n * n;
        for code in 0..3usize.pow(cells as u32) {
            let mut c = code;
            let mut rows = vec![vec![0i64; n]; n];
            for k in 0..cells {
                rows[k / n][k % n] = (c % 3) as i64 - 1;
                c /= 3;
            }
            check_all(&rows);
        }
    }
}

#[test]
fn random_four_to_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(2014);
    for n in 4..=6 {
        for _ in 0..1000 {
            check_all(&random_rows(&mut rng, n));
        }
    }
}

/// Random `I - A` with `A` a {0,1} matrix with at most one 1 per column.
#[test]
fn cycle_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..2000 {
        let n = rng.gen_range(1..=8);
        let target: Vec<Option<usize>> = (0..n)
            .map(|c| {
                let r = rng.gen_range(0..n);
                (rng.gen_bool(0.7) && r != c).then_some(r)
            })
            .collect();
        // independent cycle search: iterate the map n times from each node
        let cyclic = (0..n).any(|s| {
            let mut c = s;
            for _ in 0..n {
                match target[c] {
                    Some(r) => c = r,
                    None => return false,
                }
            }
            true
        });
        let mut rows = vec![vec![0i64; n]; n];
        for c in 0..n {
            rows[c][c] = 1;
            if let Some(r) = target[c] {
                rows[r][c] = -1;
            }
        }
        let lap = det_laplace(&DenseMatrix::from_rows(&rows)).unwrap().value;
        assert_eq!(lap, BigInt::from(if cyclic { 0 } else { 1 }), "{rows:?}");
        let sparse = DenseMatrix::from_rows(&rows).to_sparse().unwrap();
        assert_eq!(det_structural(&sparse).unwrap().value, lap);
    }
}

fn matrix_strategy(max_n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-1i64..=1, n), n))
}

proptest! {
    #[test]
    fn transpose_invariance(rows in matrix_strategy(9)) {
        let m = DenseMatrix::from_rows(&rows);
        prop_assert_eq!(det_bareiss(&m.transpose()).value, det_bareiss(&m).value);
    }

    #[test]
    fn row_swap_negates(rows in matrix_strategy(9), a in 0usize..9, b in 0usize..9) {
        let n = rows.len();
        let (a, b) = (a % n + 1, b % n + 1);
        prop_assume!(a != b);
        let m = DenseMatrix::from_rows(&rows);
        let mut s = m.clone();
        s.swap_rows(a, b);
        prop_assert_eq!(det_bareiss(&s).value, -det_bareiss(&m).value);
    }

    #[test]
    fn sparse_dense_round_trip(rows in matrix_strategy(8)) {
        let dense = DenseMatrix::from_rows(&rows);
        let sparse = dense.to_sparse().unwrap();
        prop_assert_eq!(sparse.to_dense(), dense);
        prop_assert_eq!(SparseColMatrix::from_text(&sparse.to_text()).unwrap(), sparse);
    }
}

#[test]
fn probabilistic_agrees_on_dense_sign_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..20 {
        let n = 30;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect())
            .collect();
        let dense = DenseMatrix::from_rows(&rows);
        let sparse = dense.to_sparse().unwrap();
        let exact = det_bareiss(&dense).value;
        assert_eq!(det_crt(&sparse, CrtMode::Certified).value, exact);
        let prob = det_crt(&sparse, CrtMode::Probabilistic { k: 5, seed });
        assert_eq!(prob.value, exact);
        let primes: Vec<u64> = prob.prime_trace.unwrap().iter().map(|t| t.0).collect();
        let mut dedup = primes.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), primes.len());
    }
}
