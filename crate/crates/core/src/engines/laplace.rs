use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{DetResult, Engine};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Largest dimension the cofactor expansion accepts.
pub const LAPLACE_MAX_DIM: usize = 12;

/// Cofactor expansion, always along the sparsest remaining row.
pub fn det_laplace(m: &DenseMatrix) -> Result<DetResult> {
    let n = m.dim();
    if n > LAPLACE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: LAPLACE_MAX_DIM,
        });
    }
    let rows: Vec<usize> = (1..=n).collect();
    let cols: Vec<usize> = (1..=n).collect();
    let value = expand(m, &rows, &cols);
    Ok(DetResult::certified(value, Engine::Laplace))
}

fn expand(m: &DenseMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    match rows.len() {
        0 => return BigInt::one(),
        1 => return m.get(rows[0], cols[0]).clone(),
        _ => {}
    }
    let nonzeros = |r: usize| cols.iter().filter(|&&c| !m.get(r, c).is_zero()).count();
    let (pick, _) = rows
        .iter()
        .enumerate()
        .min_by_key(|&(_, &r)| nonzeros(r))
        .expect("nonempty");
    let row = rows[pick];
    let sub_rows: Vec<usize> = rows.iter().copied().filter(|&r| r != row).collect();

    let mut total = BigInt::zero();
    for (j, &col) in cols.iter().enumerate() {
        let a = m.get(row, col);
        if a.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&c| c != col).collect();
        let minor = expand(m, &sub_rows, &sub_cols);
        if (pick + j) % 2 == 0 {
            total += a * minor;
        } else {
            total -= a * minor;
        }
    }
    total
}
