//! Sparse integer elimination for coboundary matrices.
//!
//! Cubical coboundaries have `±1` entries and very few nonzeros per row, so
//! almost every pivot is a unit. Unit pivots are eliminated in place
//! (Markowitz order); whatever survives is handed to the dense Smith normal
//! form, which yields the remaining invariant factors exactly.

use crate::linalg;

#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    /// Rows as sorted `(column, value)` lists without zeros.
    pub rows: Vec<Vec<(usize, i128)>>,
}

/// Rank and invariant factors `> 1` of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<i128>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, i128)]) -> Self {
        let mut m = SparseMatrix::new(nrows, ncols);
        for &(r, c, v) in triplets {
            m.rows[r].push((c, v));
        }
        for row in m.rows.iter_mut() {
            row.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i128)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *row = merged;
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> linalg::IntMatrix {
        let mut d = vec![vec![0i128; self.ncols]; self.nrows];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::new(self.ncols, self.nrows);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                t.rows[j].push((i, v));
            }
        }
        t
    }

    /// `self * other`, used to assert `delta . delta = 0`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = SparseMatrix::new(self.nrows, other.ncols);
        let mut acc: std::collections::BTreeMap<usize, i128> = Default::default();
        for (i, row) in self.rows.iter().enumerate() {
            acc.clear();
            for &(k, v) in row {
                for &(j, w) in &other.rows[k] {
                    *acc.entry(j).or_insert(0) += v * w;
                }
            }
            out.rows[i] = acc.iter().filter(|e| *e.1 != 0).map(|(&j, &v)| (j, v)).collect();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn invariants(&self) -> Invariants {
        Eliminator::new(self).run()
    }
}

struct Eliminator {
    rows: Vec<Vec<(usize, i128)>>,
    alive: Vec<bool>,
    /// Rows possibly containing each column (may hold stale entries).
    cols: Vec<Vec<usize>>,
}

impl Eliminator {
    fn new(m: &SparseMatrix) -> Self {
        let mut cols = vec![Vec::new(); m.ncols];
        for (i, row) in m.rows.iter().enumerate() {
            for &(j, _) in row {
                cols[j].push(i);
            }
        }
        Eliminator {
            alive: m.rows.iter().map(|r| !r.is_empty()).collect(),
            rows: m.rows.clone(),
            cols,
        }
    }

    fn entry(&self, r: usize, c: usize) -> i128 {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.rows[r][k].1,
            Err(_) => 0,
        }
    }

    fn run(mut self) -> Invariants {
        let mut rank = 0;
        // Process rows shortest first; rows grow through fill-in, so the
        // queue is rebuilt whenever it runs dry.
        loop {
            let mut order: Vec<usize> = (0..self.rows.len())
                .filter(|&i| self.alive[i] && !self.rows[i].is_empty())
                .collect();
            if order.is_empty() {
                break;
            }
            order.sort_by_key(|&i| self.rows[i].len());
            let mut progressed = false;
            for &p in &order {
                if !self.alive[p] || self.rows[p].is_empty() {
                    continue;
                }
                let pivot = self.rows[p]
                    .iter()
                    .filter(|e| e.1.abs() == 1)
                    .min_by_key(|e| self.cols[e.0].len())
                    .copied();
                let Some((c, pv)) = pivot else { continue };
                self.eliminate(p, c, pv);
                rank += 1;
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        // dense remainder
        let rest_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.alive[i] && !self.rows[i].is_empty())
            .collect();
        let mut torsion = Vec::new();
        if !rest_rows.is_empty() {
            let mut col_index = std::collections::BTreeMap::new();
            for &r in &rest_rows {
                for &(c, _) in &self.rows[r] {
                    let n = col_index.len();
                    col_index.entry(c).or_insert(n);
                }
            }
            let ncols = col_index.len();
            let dense: linalg::IntMatrix = rest_rows
                .iter()
                .map(|&r| {
                    let mut row = vec![0i128; ncols];
                    for &(c, v) in &self.rows[r] {
                        row[col_index[&c]] = v;
                    }
                    row
                })
                .collect();
            let s = linalg::smith(&dense, ncols);
            rank += s.rank();
            torsion = s.torsion();
        }
        Invariants { rank, torsion }
    }

    fn eliminate(&mut self, p: usize, c: usize, pv: i128) {
        let pivot_row = std::mem::take(&mut self.rows[p]);
        self.alive[p] = false;
        let candidates = std::mem::take(&mut self.cols[c]);
        for r in candidates {
            if r == p || !self.alive[r] {
                continue;
            }
            let x = self.entry(r, c);
            if x == 0 {
                continue;
            }
            // row_r -= (x / pv) * pivot_row; pv = ±1
            let f = x * pv;
            let old = std::mem::take(&mut self.rows[r]);
            let mut merged = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let take_old = j >= pivot_row.len() || (i < old.len() && old[i].0 < pivot_row[j].0);
                let take_piv = i >= old.len() || (j < pivot_row.len() && pivot_row[j].0 < old[i].0);
                if take_old {
                    merged.push(old[i]);
                    i += 1;
                } else if take_piv {
                    let (col, v) = pivot_row[j];
                    merged.push((col, -f * v));
                    self.cols[col].push(r);
                    j += 1;
                } else {
                    let col = old[i].0;
                    let v = old[i].1 - f * pivot_row[j].1;
                    if v != 0 {
                        merged.push((col, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            self.rows[r] = merged;
        }
        // After clearing column c elsewhere, the rest of the pivot row can be
        // cleared by column operations that touch nothing else.
        for &(col, _) in &pivot_row {
            if col != c {
                self.cols[col].retain(|&r| r != p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_invariants(m: &SparseMatrix) -> Invariants {
        let s = linalg::smith(&m.to_dense(), m.ncols);
        Invariants {
            rank: s.rank(),
            torsion: s.torsion(),
        }
    }

    #[test]
    fn matches_dense_smith() {
        let m = SparseMatrix::from_triplets(
            3,
            3,
            &[(0, 0, 2), (0, 1, 4), (0, 2, 4), (1, 0, -6), (1, 1, 6), (1, 2, 12), (2, 0, 10), (2, 1, -4), (2, 2, -16)],
        );
        assert_eq!(m.invariants(), dense_invariants(&m));
        // boundary of a square loop: rank 3
        let sq = SparseMatrix::from_triplets(
            4,
            4,
            &[(0, 0, -1), (0, 1, 1), (1, 1, -1), (1, 2, 1), (2, 2, -1), (2, 3, 1), (3, 3, -1), (3, 0, 1)],
        );
        assert_eq!(sq.invariants(), Invariants { rank: 3, torsion: vec![] });
    }

    #[test]
    fn torsion_survives_unit_elimination() {
        // projective-plane style relation: a 2 in the remainder
        let m = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, -1)]);
        assert_eq!(m.invariants(), Invariants { rank: 2, torsion: vec![2] });
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn random_sparse_agrees_with_dense(entries in proptest::collection::vec((0usize..6, 0usize..7, -2i128..=2), 0..30)) {
            let m = SparseMatrix::from_triplets(6, 7, &entries);
            prop_assert_eq!(m.invariants(), dense_invariants(&m));
        }
    }
}
