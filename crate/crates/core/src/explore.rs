//! Raw integer sequences for pattern guessing: cofactors along a row and
//! leading principal minors of `M(d)`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bfile;
use crate::engines::det_bareiss;
use crate::error::{Error, Result};
use crate::matrix::build_m;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofactorProfile {
    pub d: u64,
    pub row: usize,
    /// `cofactors[j - 1] = (-1)^(row + j) * det(M(d) without row, column j)`.
    pub cofactors: Vec<BigInt>,
}

impl CofactorProfile {
    /// `sum_j M[r, j] * C_j`: `det M(d)` when `r == row`, else zero.
    pub fn expand_with_row(&self, r: usize) -> Result<BigInt> {
        let m = build_m(self.d)?;
        let n = m.dim();
        if r == 0 || r > n {
            return Err(Error::RowOutOfRange { row: r, n });
        }
        let mut sum = BigInt::zero();
        for (j, c) in self.cofactors.iter().enumerate() {
            match m.get(r, j + 1) {
                1 => sum += c,
                -1 => sum -= c,
                _ => {}
            }
        }
        Ok(sum)
    }

    /// `# d=<d> row=<row>` header, then `j C_j` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# d={} row={}", self.d, self.row);
        s.push_str(&bfile::format_bfile((1..).zip(self.cofactors.iter())));
        s
    }
}

/// All `2d` cofactors of `M(d)` along `row`, each minor by Bareiss.
pub fn cofactor_profile(d: u64, row: usize) -> Result<CofactorProfile> {
    let dense = build_m(d)?.to_dense();
    let n = dense.dim();
    if row == 0 || row > n {
        return Err(Error::RowOutOfRange { row, n });
    }
    let cofactors = (1..=n)
        .map(|j| {
            let minor = det_bareiss(&dense.minor(row, j)).value;
            if (row + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        })
        .collect();
    Ok(CofactorProfile { d, row, cofactors })
}

/// `det` of the leading `k x k` block of `M(d)` for `k = 1..=2d`.
pub fn principal_minors(d: u64) -> Result<Vec<BigInt>> {
    let dense = build_m(d)?.to_dense();
    Ok((1..=dense.dim())
        .map(|k| det_bareiss(&dense.leading(k)).value)
        .collect())
}
