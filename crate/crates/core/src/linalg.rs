//! Exact dense integer linear algebra.
//!
//! Everything here works over `i128` and never touches floating point:
//! fraction-free (Bareiss) determinants and adjugates, Smith normal form with
//! unimodular transforms, and row-echelon kernels used to pick integral
//! cohomology bases.

use num_integer::Integer;

pub type IntMatrix = Vec<Vec<i128>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn from_i64(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| i128::from(x)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i128; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[t][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &IntMatrix, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &IntMatrix, ncols: usize) -> IntMatrix {
    let mut t = vec![vec![0i128; a.len()]; ncols];
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            t[j][i] = x;
        }
    }
    t
}

/// Determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Returns `(det, adj)` with `m * adj = det * I`, computed by fraction-free
/// Gauss-Jordan elimination. `None` when `m` is singular.
pub fn adjugate(m: &IntMatrix) -> Option<(i128, IntMatrix)> {
    let n = m.len();
    if n == 0 {
        return Some((1, Vec::new()));
    }
    let mut a: IntMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| i128::from(i == j)));
            r
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let r = (k + 1..n).find(|&r| a[r][k] != 0)?;
            a.swap(k, r);
            sign = -sign;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    // Left block is now prev * I, right block is prev * m^{-1}.
    let det = sign * prev;
    let adj = a
        .iter()
        .map(|row| row[n..].iter().map(|&x| x * sign).collect())
        .collect();
    Some((det, adj))
}

/// Smith normal form `u * m * v = diag` with unimodular `u`, `v`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Non-negative diagonal entries, each dividing the next; length is
    /// `min(rows, cols)`.
    pub diag: Vec<i128>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }

    pub fn torsion(&self) -> Vec<i128> {
        self.diag.iter().copied().filter(|&d| d > 1).collect()
    }
}

/// Smith normal form with transforms. Intended for small matrices (graph
/// forms, reduced cores).
pub fn smith(m: &IntMatrix, ncols: usize) -> Smith {
    let nrows = m.len();
    let mut a = m.clone();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    let steps = nrows.min(ncols);
    let mut t = 0;
    while t < steps {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if a[i][j] != 0
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            let p = a[t][t];
            for i in t + 1..nrows {
                if a[i][t] != 0 {
                    let q = Integer::div_floor(&a[i][t], &p);
                    row_axpy(&mut a, i, t, -q);
                    row_axpy(&mut u, i, t, -q);
                    if a[i][t] != 0 {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..ncols {
                if a[t][j] != 0 {
                    let q = Integer::div_floor(&a[t][j], &p);
                    col_axpy(&mut a, j, t, -q);
                    col_axpy(&mut v, j, t, -q);
                    if a[t][j] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let mut bad = None;
                'outer: for i in t + 1..nrows {
                    for j in t + 1..ncols {
                        if a[i][j] % p != 0 {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        row_axpy(&mut a, t, i, 1);
                        row_axpy(&mut u, t, i, 1);
                        continue;
                    }
                }
            }
            // move the smallest entry of row/col t into the pivot
            let mut best = (t, t);
            for i in t..nrows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
                u.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
                for row in v.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
        t += 1;
    }
    let diag = (0..steps).map(|i| a[i][i]).collect();
    Smith { u, v, diag }
}

fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, c: i128) {
    if c == 0 {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        *x += c * *y;
    }
}

fn col_axpy(a: &mut IntMatrix, dst: usize, src: usize, c: i128) {
    if c == 0 {
        return;
    }
    for row in a.iter_mut() {
        row[dst] += c * row[src];
    }
}

/// Row echelon form with transform: `u * m = h`, `u` unimodular, and its
/// inverse. Rows of `u` beyond `rank` span the left kernel of `m` over Z.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub h: IntMatrix,
    pub rank: usize,
}

pub fn row_echelon(m: &IntMatrix, ncols: usize) -> RowEchelon {
    let nrows = m.len();
    let mut h = m.clone();
    let mut u = identity(nrows);
    let mut u_inv = identity(nrows);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        loop {
            // smallest nonzero in column c at or below r
            let mut best: Option<usize> = None;
            for i in r..nrows {
                if h[i][c] != 0 && best.is_none_or(|b| h[i][c].abs() < h[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            if b != r {
                h.swap(r, b);
                u.swap(r, b);
                // u_inv columns swap
                for row in u_inv.iter_mut() {
                    row.swap(r, b);
                }
            }
            let mut done = true;
            for i in r + 1..nrows {
                if h[i][c] != 0 {
                    let q = Integer::div_floor(&h[i][c], &h[r][c]);
                    row_axpy(&mut h, i, r, -q);
                    row_axpy(&mut u, i, r, -q);
                    // inverse: column r += q * column i
                    col_axpy(&mut u_inv, r, i, q);
                    if h[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                r += 1;
                break;
            }
        }
    }
    RowEchelon {
        u,
        u_inv,
        h,
        rank: r,
    }
}

/// Solves `m x = b` over Z for nonsingular square `m`; `None` if the
/// rational solution is not integral.
pub fn solve_integral(m: &IntMatrix, b: &[i128]) -> Option<Vec<i128>> {
    let (det, adj) = adjugate(m)?;
    let num = mat_vec(&adj, b);
    num.iter()
        .map(|&x| if x % det == 0 { Some(x / det) } else { None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i128]]) -> IntMatrix {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn bareiss_determinants() {
        assert_eq!(determinant(&m(&[&[-2]])), -2);
        assert_eq!(determinant(&m(&[&[-2, 1], &[1, -2]])), 3);
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), -1);
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), 0);
        assert_eq!(determinant(&Vec::new()), 1);
    }

    #[test]
    fn adjugate_inverts() {
        let a = m(&[&[-2, 1, 0], &[1, -3, 1], &[0, 1, -2]]);
        let (det, adj) = adjugate(&a).unwrap();
        assert_eq!(det, determinant(&a));
        let prod = mat_mul(&a, &adj);
        for (i, row) in prod.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { det } else { 0 });
            }
        }
        // pivoting path
        let b = m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let (det, adj) = adjugate(&b).unwrap();
        assert_eq!(det, 2);
        let prod = mat_mul(&b, &adj);
        assert_eq!(prod, m(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]));
        assert!(adjugate(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn smith_of_small_matrices() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a, 3);
        assert_eq!(s.diag, vec![2, 6, 12]);
        let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, if i == j { s.diag[i] } else { 0 });
            }
        }
        let b = m(&[&[-2, 1], &[1, -2]]);
        assert_eq!(smith(&b, 2).diag, vec![1, 3]);
        let c = m(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        let s = smith(&c, 4);
        assert_eq!(s.rank(), 3);
    }

    #[test]
    fn echelon_kernel_is_saturated() {
        let a = m(&[&[2, 4], &[1, 2], &[3, 6]]);
        let e = row_echelon(&a, 2);
        assert_eq!(e.rank, 1);
        assert_eq!(mat_mul(&e.u, &a), e.h);
        assert_eq!(mat_mul(&e.u, &e.u_inv), identity(3));
        for row in &e.u[e.rank..] {
            let v = mat_vec(&transpose(&a, 2), row);
            assert!(v.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn integral_solve() {
        let a = m(&[&[-2, 1], &[1, -2]]);
        assert_eq!(solve_integral(&a, &[-1, -1]), Some(vec![1, 1]));
        assert_eq!(solve_integral(&a, &[1, 0]), None);
    }
}
