//! Determinants of matrices of the form `M = P - Q`.
//!
//! `P` is a permutation matrix (the `+1` entries) and `Q` holds at most one
//! `1` per column (the magnitudes of the `-1` entries). Then
//! `det M = sign(P) * det(I - A)` with `A = P^-1 Q`, and `A` is the adjacency
//! matrix of a functional graph `c -> perm^-1(partial(c))`. For unit weights
//! `det(I - A)` is `0` if that graph has a cycle and `1` otherwise.

use num_bigint::BigInt;

use super::{DetResult, Engine};
use crate::error::{Error, Result};
use crate::matrix::{growth_entries, SparseColMatrix};

/// The split `M = P - Q`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitForm {
    n: usize,
    /// `perm[c - 1]` is the row of the `+1` in column `c`.
    perm: Vec<usize>,
    /// `partial[c - 1]` is the row of the `-1` in column `c`, if any.
    partial: Vec<Option<usize>>,
}

impl SplitForm {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn perm(&self, c: usize) -> usize {
        self.perm[c - 1]
    }

    pub fn partial(&self, c: usize) -> Option<usize> {
        self.partial[c - 1]
    }

    /// `(column, row)` pairs of the partial map, by column.
    pub fn partial_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partial
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.map(|r| (i + 1, r)))
    }

    /// Rebuilds `P - Q`.
    pub fn reconstruct(&self) -> Result<SparseColMatrix> {
        let columns = (0..self.n)
            .map(|i| {
                let mut col = vec![(self.perm[i], 1i8)];
                col.extend(self.partial[i].map(|r| (r, -1i8)));
                col
            })
            .collect();
        SparseColMatrix::from_columns(self.n, columns)
    }

    /// Sign of the permutation, via its cycle decomposition.
    pub fn perm_sign(&self) -> i8 {
        let mut seen = vec![false; self.n];
        let mut transpositions = 0usize;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                c = self.perm[c] - 1;
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Whether the functional graph `c -> perm^-1(partial(c))` has a cycle.
    pub fn has_cycle(&self) -> bool {
        let n = self.n;
        let mut inverse = vec![0usize; n];
        for (c, &r) in self.perm.iter().enumerate() {
            inverse[r - 1] = c;
        }
        let next = |c: usize| self.partial[c].map(|r| inverse[r - 1]);

        // 0 = unvisited, 1 = on current walk, 2 = done
        let mut state = vec![0u8; n];
        let mut walk = Vec::new();
        for start in 0..n {
            let mut c = start;
            loop {
                match state[c] {
                    1 => return true,
                    2 => break,
                    _ => {}
                }
                state[c] = 1;
                walk.push(c);
                match next(c) {
                    Some(nc) => c = nc,
                    None => break,
                }
            }
            for c in walk.drain(..) {
                state[c] = 2;
            }
        }
        false
    }
}

/// Splits `m` into its `+1` permutation part and `-1` partial part.
pub fn split_pq(m: &SparseColMatrix) -> Result<SplitForm> {
    let n = m.dim();
    let mut perm = Vec::with_capacity(n);
    let mut partial = Vec::with_capacity(n);
    let mut row_used = vec![false; n];
    for (ci, col) in m.columns().enumerate() {
        let c = ci + 1;
        let mut plus = col.iter().filter(|&&(_, v)| v == 1).map(|&(r, _)| r);
        let mut minus = col.iter().filter(|&&(_, v)| v == -1).map(|&(r, _)| r);
        let (Some(p), None) = (plus.next(), plus.next()) else {
            return Err(Error::StructuralMismatch(format!(
                "column {c} does not hold exactly one +1"
            )));
        };
        let q = minus.next();
        if minus.next().is_some() {
            return Err(Error::StructuralMismatch(format!(
                "column {c} holds more than one -1"
            )));
        }
        if std::mem::replace(&mut row_used[p - 1], true) {
            return Err(Error::StructuralMismatch(format!(
                "+1 entries are not a permutation: row {p} repeats"
            )));
        }
        perm.push(p);
        partial.push(q);
    }
    Ok(SplitForm { n, perm, partial })
}

/// `sign(perm)` if the functional graph is acyclic, else `0`. `O(n)`.
pub fn det_structural(m: &SparseColMatrix) -> Result<DetResult> {
    let split = split_pq(m)?;
    let value = if split.has_cycle() { 0 } else { split.perm_sign() };
    Ok(DetResult::certified(BigInt::from(value), Engine::Structural))
}

/// Incremental structural evaluation of `det M(d)` for `d = 1, 2, ...`.
///
/// `M(d-1)` is the leading principal block of `M(d)`, so each step adds the
/// entries from [`growth_entries`] to a union-find over the functional graph.
/// Every set in the forest has exactly one sink (a column without a `-1`),
/// so adding the edge `u -> v` from sink `u` closes a cycle iff `v` already
/// lies in `u`'s set. A cycle persists for all larger `d`.
#[derive(Debug, Default)]
pub struct StructuralSweep {
    d: u64,
    /// `perm_inv[r - 1]` is the column holding the `+1` of row `r`.
    perm_inv: Vec<usize>,
    has_minus: Vec<bool>,
    parent: Vec<usize>,
    rank: Vec<u8>,
    sign: i8,
    cyclic: bool,
}

impl StructuralSweep {
    pub fn new() -> Self {
        Self {
            sign: 1,
            ..Self::default()
        }
    }

    /// Advances to the next `d` and returns `(d, det M(d))`.
    pub fn step(&mut self) -> Result<(u64, i8)> {
        self.d += 1;
        let d = self.d;
        let n = 2 * d as usize;
        let new = growth_entries(d)?;

        self.perm_inv.resize(n, 0);
        self.has_minus.resize(n, false);
        let base = self.parent.len();
        self.parent.extend(base..n);
        self.rank.resize(n, 0);

        // the two new columns must take the two new rows
        let mut block = [0usize; 2];
        for &(r, c, v) in &new {
            if v != 1 {
                continue;
            }
            if r < n - 1 || c < n - 1 || block[c - (n - 1)] != 0 {
                return Err(Error::StructuralMismatch(format!(
                    "+1 at ({r}, {c}) breaks the block permutation at d={d}"
                )));
            }
            block[c - (n - 1)] = r;
            self.perm_inv[r - 1] = c;
        }
        if block[0] == 0 || block[1] == 0 || block[0] == block[1] {
            return Err(Error::StructuralMismatch(format!(
                "new columns at d={d} do not permute the new rows"
            )));
        }
        if block[0] == n {
            self.sign = -self.sign;
        }

        for &(r, c, v) in &new {
            if v != -1 {
                continue;
            }
            if std::mem::replace(&mut self.has_minus[c - 1], true) {
                return Err(Error::StructuralMismatch(format!(
                    "column {c} holds more than one -1"
                )));
            }
            let target = self.perm_inv[r - 1];
            if !self.cyclic && !self.link(c - 1, target - 1) {
                self.cyclic = true;
            }
        }

        Ok((d, if self.cyclic { 0 } else { self.sign }))
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let up = self.parent[x];
            self.parent[x] = root;
            x = up;
        }
        root
    }

    /// Adds edge `u -> v`; false if it closes a cycle.
    fn link(&mut self, u: usize, v: usize) -> bool {
        let (ru, rv) = (self.find(u), self.find(v));
        if ru == rv {
            return false;
        }
        match self.rank[ru].cmp(&self.rank[rv]) {
            std::cmp::Ordering::Less => self.parent[ru] = rv,
            std::cmp::Ordering::Greater => self.parent[rv] = ru,
            std::cmp::Ordering::Equal => {
                self.parent[ru] = rv;
                self.rank[rv] += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_m;

    #[test]
    fn split_examples() {
        let s1 = split_pq(&build_m(1).unwrap()).unwrap();
        assert_eq!((s1.perm(1), s1.perm(2)), (2, 1));
        assert_eq!(s1.partial_pairs().count(), 0);

        let s2 = split_pq(&build_m(2).unwrap()).unwrap();
        assert_eq!((1..=4).map(|c| s2.perm(c)).collect::<Vec<_>>(), vec![2, 1, 4, 3]);
        assert_eq!(s2.partial_pairs().collect::<Vec<_>>(), vec![(1, 4), (4, 1)]);
    }

    #[test]
    fn split_rejects_bad_shapes() {
        let two_plus = SparseColMatrix::from_columns(2, vec![vec![(1, 1), (2, 1)], vec![]]).unwrap();
        assert!(matches!(split_pq(&two_plus), Err(Error::StructuralMismatch(_))));
        let no_plus = SparseColMatrix::from_columns(2, vec![vec![(1, -1)], vec![(2, 1)]]).unwrap();
        assert!(split_pq(&no_plus).is_err());
        let same_row = SparseColMatrix::from_columns(2, vec![vec![(1, 1)], vec![(1, 1)]]).unwrap();
        assert!(split_pq(&same_row).is_err());
        let two_minus =
            SparseColMatrix::from_columns(3, vec![vec![(1, 1), (2, -1), (3, -1)], vec![(2, 1)], vec![(3, 1)]])
                .unwrap();
        assert!(split_pq(&two_minus).is_err());
        assert!(det_structural(&two_plus).is_err());
    }

    #[test]
    fn structural_examples() {
        assert_eq!(det_structural(&build_m(1).unwrap()).unwrap().value, BigInt::from(-1));
        assert_eq!(det_structural(&build_m(2).unwrap()).unwrap().value, BigInt::from(1));
        let singular = SparseColMatrix::from_columns(2, vec![vec![(1, 1), (2, -1)], vec![(1, -1), (2, 1)]]).unwrap();
        assert_eq!(det_structural(&singular).unwrap().value, BigInt::from(0));
        // I - A with A a 3-cycle, then with the cycle broken into a chain
        let cycle = SparseColMatrix::from_triplets(
            3,
            &[(1, 1, 1), (2, 1, -1), (2, 2, 1), (3, 2, -1), (3, 3, 1), (1, 3, -1)],
        )
        .unwrap();
        assert_eq!(det_structural(&cycle).unwrap().value, BigInt::from(0));
        let chain =
            SparseColMatrix::from_triplets(3, &[(1, 1, 1), (2, 1, -1), (2, 2, 1), (3, 2, -1), (3, 3, 1)])
                .unwrap();
        assert_eq!(det_structural(&chain).unwrap().value, BigInt::from(1));
    }

    #[test]
    fn reconstruction() {
        for d in 1..=50 {
            let m = build_m(d).unwrap();
            assert_eq!(split_pq(&m).unwrap().reconstruct().unwrap(), m);
        }
    }

    #[test]
    fn sweep_matches_per_member_engine() {
        let mut sweep = StructuralSweep::new();
        for d in 1..=400u64 {
            let (sd, v) = sweep.step().unwrap();
            assert_eq!(sd, d);
            let direct = det_structural(&build_m(d).unwrap()).unwrap().value;
            assert_eq!(BigInt::from(v), direct, "d={d}");
        }
    }
}
