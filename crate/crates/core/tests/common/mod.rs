//! Test helpers, including an independent oracle for relative cohomology.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use latcoh_core::{CohomologyGroup, PlumbingGraph, Rational};

pub fn r(x: i128) -> Rational {
    Rational::from(x)
}

pub fn disjoint_union(a: &PlumbingGraph, b: &PlumbingGraph) -> PlumbingGraph {
    let n = a.len();
    let mut dec = a.decorations().to_vec();
    dec.extend(b.decorations());
    let mut edges = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&(x, y)| (x + n, y + n)));
    PlumbingGraph::from_decorations(&dec, &edges).unwrap()
}

pub fn ranks_and_torsion(c: &CohomologyGroup) -> Vec<(usize, Vec<i128>)> {
    c.degrees.iter().map(|g| (g.rank, g.torsion.clone())).collect()
}

/// Diagonal of the Smith normal form (nonzero entries only, as absolute values).
pub fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_entry(&a, t..m, t..n) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let f = a[i][t] / a[t][t];
                    for j in t..n {
                        a[i][j] -= f * a[t][j];
                    }
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let f = a[t][j] / a[t][t];
                    for row in a.iter_mut().skip(t) {
                        row[j] -= f * row[t];
                    }
                    clean &= a[t][j] == 0;
                }
            }
            if !clean {
                // move the smallest leftover of row/column t into the pivot
                let (mut bi, mut bj) = (t, t);
                for i in t + 1..m {
                    if a[i][t] != 0 && a[i][t].abs() < a[bi][bj].abs() {
                        (bi, bj) = (i, t);
                    }
                }
                for j in t + 1..n {
                    if a[t][j] != 0 && a[t][j].abs() < a[bi][bj].abs() {
                        (bi, bj) = (t, j);
                    }
                }
                a.swap(t, bi);
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            let p = a[t][t];
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..n {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_entry(
    a: &[Vec<i128>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub struct OracleResult {
    /// Minimum of `q(kbar + 2v) - q(kbar)` over the lattice.
    pub min_shift: Rational,
    /// `(level, q) -> (rank, torsion)` for the nonzero groups.
    pub groups: BTreeMap<(i64, usize), (usize, Vec<i128>)>,
}

/// Relative cohomology straight from the definition: for each level `t`,
/// the cochains of `S_t` vanishing on the hyperplane through `kbar`
/// (the kernel of the restriction), and their cohomology by Smith forms.
/// Lattice points are enumerated in a box around `kbar`.
pub fn oracle_relative(g: &PlumbingGraph, j0: usize, kbar: &[i64], top: i64) -> Result<OracleResult, String> {
    let s = g.len();
    let m = g.matrix();
    let w = |v: &[i64]| -> i64 {
        let av: i64 = kbar.iter().zip(v).map(|(a, x)| a * x).sum();
        let vmv: i64 = (0..s).map(|i| (0..s).map(|j| v[i] * m[i][j] * v[j]).sum::<i64>()).sum();
        let twice = av - vmv;
        assert_eq!(twice % 2, 0, "kbar is not characteristic");
        twice / 2
    };
    // grow the box until S_top stays off its boundary
    let (wmin, height) = [6i64, 10, 16, 24]
        .iter()
        .find_map(|&r| {
            let mut pts = vec![vec![-r; s]];
            for i in 0..s {
                pts = pts
                    .into_iter()
                    .flat_map(|p| {
                        (-r..=r).map(move |x| {
                            let mut q = p.clone();
                            q[i] = x;
                            q
                        })
                    })
                    .collect();
            }
            let wmin = pts.iter().map(|p| w(p)).min().unwrap();
            let height: HashMap<Vec<i64>, i64> = pts
                .iter()
                .map(|p| (p.clone(), w(p) - wmin))
                .filter(|&(_, h)| h <= top)
                .collect();
            let inside = height.keys().all(|p| p.iter().all(|x| x.abs() < r));
            inside.then_some((wmin, height))
        })
        .ok_or("S_top does not fit in the oracle box")?;

    let mut groups = BTreeMap::new();
    for t in 0..=top {
        // cubes of S_t off the hyperplane v_j0 = 0, by dimension
        let mut cubes: Vec<Vec<(Vec<i64>, u32)>> = vec![Vec::new(); s + 1];
        let vertex_in = |v: &[i64], mask: u32| -> bool {
            (0..1u32 << s).filter(|sub| sub & !mask == 0).all(|sub| {
                let mut p = v.to_vec();
                for (i, x) in p.iter_mut().enumerate() {
                    if sub >> i & 1 == 1 {
                        *x += 1;
                    }
                }
                height.get(&p).is_some_and(|&h| h <= t)
            })
        };
        let mut pts: Vec<&Vec<i64>> = height.keys().collect();
        pts.sort();
        for v in pts {
            for mask in 0..1u32 << s {
                let in_h = mask >> j0 & 1 == 0 && v[j0] == 0;
                if !in_h && vertex_in(v, mask) {
                    cubes[mask.count_ones() as usize].push((v.clone(), mask));
                }
            }
        }
        let index: Vec<HashMap<(Vec<i64>, u32), usize>> = cubes
            .iter()
            .map(|cs| cs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        // δ_q as an n_{q+1} x n_q matrix
        let delta = |q: usize| -> Vec<Vec<i128>> {
            let mut d = vec![vec![0i128; cubes[q].len()]; cubes[q + 1].len()];
            for (row, (v, mask)) in cubes[q + 1].iter().enumerate() {
                let dirs: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
                for (k, &i) in dirs.iter().enumerate() {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let face = mask & !(1 << i);
                    let mut far = v.clone();
                    far[i] += 1;
                    if let Some(&c) = index[q].get(&(far, face)) {
                        d[row][c] += sign;
                    }
                    if let Some(&c) = index[q].get(&(v.clone(), face)) {
                        d[row][c] -= sign;
                    }
                }
            }
            d
        };
        let snf: Vec<Vec<i128>> = (0..s).map(|q| smith_diagonal(delta(q))).collect();
        for q in 0..=s {
            let out = if q < s { snf[q].len() } else { 0 };
            let inc = if q > 0 { snf[q - 1].len() } else { 0 };
            let rank = cubes[q].len() - out - inc;
            let mut torsion: Vec<i128> = if q > 0 {
                snf[q - 1].iter().copied().filter(|&x| x > 1).collect()
            } else {
                Vec::new()
            };
            torsion.sort_unstable();
            if rank > 0 || !torsion.is_empty() {
                groups.insert((t, q), (rank, torsion));
            }
        }
    }
    Ok(OracleResult {
        min_shift: Rational::from(wmin as i128),
        groups,
    })
}
