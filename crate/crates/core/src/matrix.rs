//! Sparse and dense exact matrices, and the M(d) family.
//!
//! Every external index is 1-based. `SparseColMatrix` stores only the
//! nonzero `{-1, +1}` entries of each column, sorted by row.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A position `(a, c)` inside `M(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EntryAddress {
    pub d: u64,
    pub a: u64,
    pub c: u64,
}

impl EntryAddress {
    pub fn new(d: u64, a: u64, c: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidFamilyIndex(d));
        }
        let n = 2 * d;
        if a == 0 || a > n || c == 0 || c > n {
            return Err(Error::IndexOutOfRange {
                row: a as usize,
                col: c as usize,
                n: n as usize,
            });
        }
        Ok(Self { d, a, c })
    }

    /// The `b` in `c = 2b - 1` or `c = 2b`, together with the parity.
    pub fn column_block(&self) -> (u64, bool) {
        let odd = self.c % 2 == 1;
        (self.c.div_ceil(2), odd)
    }
}

/// Entry of `M(d)` at the given address.
///
/// Odd column `2b-1`: `+1` at row `2b`, `-1` at row `3b+1`.
/// Even column `2b`: `+1` at row `2b-1`, `-1` at row `b-1`.
pub fn entry(addr: EntryAddress) -> i8 {
    let a = addr.a;
    let (b, odd) = addr.column_block();
    if odd {
        if a == 2 * b {
            1
        } else if a == 3 * b + 1 {
            -1
        } else {
            0
        }
    } else if a == 2 * b - 1 {
        1
    } else if b >= 1 && a + 1 == b {
        -1
    } else {
        0
    }
}

/// Validating wrapper around [`entry`].
pub fn entry_at(d: u64, a: u64, c: u64) -> Result<i8> {
    EntryAddress::new(d, a, c).map(entry)
}

/// Column-major sparse matrix with entries in `{-1, 0, +1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseColMatrix {
    n: usize,
    columns: Vec<Vec<(usize, i8)>>,
}

impl SparseColMatrix {
    /// Builds a matrix from per-column `(row, value)` lists. Lists need not
    /// be sorted; zeros are dropped.
    pub fn from_columns(n: usize, columns: Vec<Vec<(usize, i8)>>) -> Result<Self> {
        if columns.len() != n {
            return Err(Error::ShapeMismatch {
                n,
                len: columns.len(),
            });
        }
        let mut out = Vec::with_capacity(n);
        for (ci, mut col) in columns.into_iter().enumerate() {
            let c = ci + 1;
            col.retain(|&(_, v)| v != 0);
            col.sort_unstable_by_key(|&(r, _)| r);
            for w in col.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::DuplicateEntry { row: w[0].0, col: c });
                }
            }
            for &(r, v) in &col {
                if r == 0 || r > n {
                    return Err(Error::IndexOutOfRange { row: r, col: c, n });
                }
                if v != 1 && v != -1 {
                    return Err(Error::EntryOutOfRange {
                        row: r,
                        col: c,
                        value: v.to_string(),
                    });
                }
            }
            out.push(col);
        }
        Ok(Self { n, columns: out })
    }

    /// Builds a matrix from `(row, col, value)` triplets.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, i8)]) -> Result<Self> {
        let mut columns = vec![Vec::new(); n];
        for &(r, c, v) in triplets {
            if c == 0 || c > n {
                return Err(Error::IndexOutOfRange { row: r, col: c, n });
            }
            columns[c - 1].push((r, v));
        }
        Self::from_columns(n, columns)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            columns: (1..=n).map(|c| vec![(c, 1)]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Nonzeros of column `c` (1-based), sorted by row.
    pub fn column(&self, c: usize) -> &[(usize, i8)] {
        &self.columns[c - 1]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(usize, i8)]> {
        self.columns.iter().map(Vec::as_slice)
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.columns[col - 1]
            .binary_search_by_key(&row, |&(r, _)| r)
            .map(|i| self.columns[col - 1][i].1)
            .unwrap_or(0)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// All nonzeros as `(row, col, value)`, ordered by `(col, row)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(ci, col)| col.iter().map(move |&(r, v)| (r, ci + 1, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.n];
        for (r, c, v) in self.triplets() {
            columns[r - 1].push((c, v));
        }
        Self {
            n: self.n,
            columns,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n);
        for (r, c, v) in self.triplets() {
            m.set(r, c, BigInt::from(v));
        }
        m
    }

    /// Text serialization: `n <dim>` followed by `row col value` lines in
    /// `(col, row)` order, LF terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 + 12 * self.nnz());
        let _ = writeln!(s, "n {}", self.n);
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "empty input".into(),
        })?;
        let n: usize = header
            .strip_prefix("n ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                reason: format!("expected `n <dimension>`, got {header:?}"),
            })?;
        let mut triplets = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::Parse { line: i + 1, reason };
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 3 {
                return Err(bad(format!("expected `row col value`, got {line:?}")));
            }
            let r: usize = fields[0].parse().map_err(|_| bad(format!("bad row {:?}", fields[0])))?;
            let c: usize = fields[1].parse().map_err(|_| bad(format!("bad column {:?}", fields[1])))?;
            let v: i8 = match fields[2] {
                "1" => 1,
                "-1" => -1,
                other => return Err(bad(format!("value {other:?} is not 1 or -1"))),
            };
            triplets.push((r, c, v));
        }
        Self::from_triplets(n, &triplets)
    }
}

/// `M(d)`, the `2d x 2d` matrix whose entries are given by [`entry`].
pub fn build_m(d: u64) -> Result<SparseColMatrix> {
    if d == 0 {
        return Err(Error::InvalidFamilyIndex(d));
    }
    let n = 2 * d as usize;
    let mut columns = Vec::with_capacity(n);
    for b in 1..=d as usize {
        // column 2b-1
        let mut odd = vec![(2 * b, 1i8)];
        if 3 * b + 1 <= n {
            odd.push((3 * b + 1, -1));
        }
        // column 2b
        let mut even = vec![(2 * b - 1, 1i8)];
        if b >= 2 {
            even.insert(0, (b - 1, -1));
        }
        columns.push(odd);
        columns.push(even);
    }
    Ok(SparseColMatrix { n, columns })
}

/// Entries of `M(d)` that are absent from `M(d-1)`, as `(row, col, value)`.
///
/// `M(d-1)` is the leading principal `2(d-1)` block of `M(d)`, so the new
/// entries are exactly those in rows or columns `2d-1` and `2d`.
pub fn growth_entries(d: u64) -> Result<Vec<(usize, usize, i8)>> {
    if d == 0 {
        return Err(Error::InvalidFamilyIndex(d));
    }
    let n = 2 * d as usize;
    let mut out = Vec::with_capacity(5);
    // new rows in old odd columns: 3b+1 in {2d-1, 2d}, with 2b-1 < 2d-1
    for r in [n - 1, n] {
        if (r - 1) % 3 == 0 {
            let b = (r - 1) / 3;
            if b >= 1 && 2 * b - 1 < n - 1 {
                out.push((r, 2 * b - 1, -1));
            }
        }
    }
    let b = d as usize;
    out.push((2 * b, 2 * b - 1, 1));
    if 3 * b + 1 <= n {
        out.push((3 * b + 1, 2 * b - 1, -1));
    }
    out.push((2 * b - 1, 2 * b, 1));
    if b >= 2 {
        out.push((b - 1, 2 * b, -1));
    }
    Ok(out)
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 1..=n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Row-major entries; `entries.len()` must be `n * n`.
    pub fn from_entries(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch {
                n,
                len: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    /// Convenience constructor from small integer rows. Panics if the rows
    /// are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), n, "ragged row");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[(row - 1) * self.n + (col - 1)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[(row - 1) * self.n + (col - 1)] = value;
    }

    /// Row-major entries, 0-based.
    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for c in 0..n {
            for r in 0..n {
                entries.push(self.entries[r * n + c].clone());
            }
        }
        Self { n, entries }
    }

    pub fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 1..=self.n {
            self.entries
                .swap((r1 - 1) * self.n + (c - 1), (r2 - 1) * self.n + (c - 1));
        }
    }

    /// The matrix with row `row` and column `col` deleted.
    pub fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for r in (1..=n).filter(|&r| r != row) {
            for c in (1..=n).filter(|&c| c != col) {
                entries.push(self.get(r, c).clone());
            }
        }
        Self { n: n - 1, entries }
    }

    /// Leading principal `k x k` submatrix.
    pub fn leading(&self, k: usize) -> Self {
        assert!(k <= self.n);
        let mut entries = Vec::with_capacity(k * k);
        for r in 1..=k {
            for c in 1..=k {
                entries.push(self.get(r, c).clone());
            }
        }
        Self { n: k, entries }
    }

    /// Converts back to sparse form; every entry must be in `{-1, 0, 1}`.
    pub fn to_sparse(&self) -> Result<SparseColMatrix> {
        let n = self.n;
        let mut columns = vec![Vec::new(); n];
        for r in 1..=n {
            for c in 1..=n {
                let v = self.get(r, c);
                if v.is_zero() {
                    continue;
                }
                match v.to_i8() {
                    Some(x) if x.abs() == 1 => columns[c - 1].push((r, x)),
                    _ => {
                        return Err(Error::EntryOutOfRange {
                            row: r,
                            col: c,
                            value: v.to_string(),
                        })
                    }
                }
            }
        }
        SparseColMatrix::from_columns(n, columns)
    }

    /// Largest absolute entry, or zero for the empty matrix.
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}
