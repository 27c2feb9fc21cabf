use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{DetResult, Engine};
use crate::matrix::DenseMatrix;

/// Fraction-free (Bareiss) elimination.
///
/// Runs over checked `i128` first and restarts over `BigInt` if any
/// intermediate overflows, so the result is exact either way.
pub fn det_bareiss(m: &DenseMatrix) -> DetResult {
    let small: Option<Vec<i128>> = m.entries().iter().map(ToPrimitive::to_i128).collect();
    let value = small
        .and_then(|rows| eliminate::<i128>(m.dim(), rows))
        .map(BigInt::from)
        .unwrap_or_else(|| {
            eliminate::<BigInt>(m.dim(), m.entries().to_vec()).expect("bigint cannot overflow")
        });
    DetResult::certified(value, Engine::Bareiss)
}

trait Ring: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    /// `(a * pivot - lead * b) / prev`, division exact.
    fn step(a: &Self, pivot: &Self, lead: &Self, b: &Self, prev: &Self) -> Option<Self>;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn step(a: &Self, pivot: &Self, lead: &Self, b: &Self, prev: &Self) -> Option<Self> {
        let num = a.checked_mul(*pivot)?.checked_sub(lead.checked_mul(*b)?)?;
        debug_assert_eq!(num % prev, 0);
        num.checked_div(*prev)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn step(a: &Self, pivot: &Self, lead: &Self, b: &Self, prev: &Self) -> Option<Self> {
        let num = a * pivot - lead * b;
        let (q, r) = num.div_rem(prev);
        debug_assert!(Zero::is_zero(&r));
        Some(q)
    }
}

fn eliminate<T: Ring>(n: usize, mut a: Vec<T>) -> Option<T> {
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        let pivot_row = (k..n).find(|&r| !a[r * n + k].is_zero());
        let Some(p) = pivot_row else {
            return Some(T::zero());
        };
        if p != k {
            for j in k..n {
                a.swap(p * n + j, k * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        let pivot_is_prev = pivot == prev;
        let pivot_is_neg_prev = prev.neg().is_some_and(|np| np == pivot);
        let pivot_tail: Vec<(usize, T)> = (k + 1..n)
            .filter(|&j| !a[k * n + j].is_zero())
            .map(|j| (j, a[k * n + j].clone()))
            .collect();

        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            let row = &mut a[i * n..(i + 1) * n];
            if lead.is_zero() {
                // row scales by pivot / prev
                if pivot_is_prev {
                    continue;
                }
                for x in row[k + 1..].iter_mut() {
                    if x.is_zero() {
                        continue;
                    }
                    *x = if pivot_is_neg_prev {
                        x.neg()?
                    } else {
                        T::step(x, &pivot, &T::zero(), &T::zero(), &prev)?
                    };
                }
            } else {
                let mut tail = pivot_tail.iter().peekable();
                for j in k + 1..n {
                    let b = match tail.peek() {
                        Some((jj, v)) if *jj == j => {
                            tail.next();
                            v.clone()
                        }
                        _ => {
                            if row[j].is_zero() {
                                continue;
                            }
                            T::zero()
                        }
                    };
                    row[j] = T::step(&row[j], &pivot, &lead, &b, &prev)?;
                }
                row[k] = T::zero();
            }
        }
        prev = pivot;
    }
    let last = a[n * n - 1].clone();
    if negate {
        last.neg()
    } else {
        Some(last)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::det_laplace;
    use crate::matrix::build_m;

    #[test]
    fn family_members() {
        let d1 = build_m(1).unwrap().to_dense();
        assert_eq!(det_bareiss(&d1).value, det_laplace(&d1).unwrap().value);
        assert_eq!(det_bareiss(&d1).value, BigInt::from(-1));
        let d3 = build_m(3).unwrap().to_dense();
        assert_eq!(det_bareiss(&d3).value, BigInt::from(-1));
        assert_eq!(det_bareiss(&d3).value, det_laplace(&d3).unwrap().value);
    }

    #[test]
    fn repeated_row_is_singular() {
        let m = DenseMatrix::from_rows(&[[1, -1, 0], [0, 1, 1], [1, -1, 0]]);
        assert!(det_bareiss(&m).value == BigInt::from(0));
    }

    #[test]
    fn trivial_shapes() {
        assert_eq!(det_bareiss(&DenseMatrix::zeros(0)).value, BigInt::from(1));
        assert_eq!(det_bareiss(&DenseMatrix::from_rows(&[[-7]])).value, BigInt::from(-7));
        assert_eq!(det_bareiss(&DenseMatrix::identity(9)).value, BigInt::from(1));
    }

    #[test]
    fn general_integers() {
        let m = DenseMatrix::from_rows(&[[2, 3, 1], [4, 1, -3], [0, 5, 6]]);
        assert_eq!(det_bareiss(&m).value, det_laplace(&m).unwrap().value);
        let z = DenseMatrix::from_rows(&[[0, 0, 1], [0, 2, 0], [3, 0, 0]]);
        assert_eq!(det_bareiss(&z).value, BigInt::from(-6));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        // diag(2^100, 2^100, 3): the i128 path overflows on the product.
        let big = BigInt::from(1u8) << 100usize;
        let mut m = DenseMatrix::zeros(3);
        m.set(1, 1, big.clone());
        m.set(2, 2, big.clone());
        m.set(3, 3, BigInt::from(3));
        m.set(1, 2, BigInt::from(1));
        let expected = &big * &big * 3;
        assert_eq!(det_bareiss(&m).value, expected);
    }
}
