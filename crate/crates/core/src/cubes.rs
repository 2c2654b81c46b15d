//! Lattice cubes, sublevel complexes `S_t` and their integral cohomology.
//!
//! A complex is built once at its largest level. Points are lattice vectors
//! `l` (relative to a base characteristic element) with an integer weight
//! `χ(l)`; a cube `(l, I)` is stored when all its vertices are points and its
//! weight is the maximum over them. Sorting each dimension by weight makes
//! every sublevel set a prefix, so one complex serves the whole tower.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charlat::{CharElement, Lattice};
use crate::enumerate::{ellipsoid_box as raw_ellipsoid_box, BoxBounds};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::sparse::SparseMatrix;
use crate::Rational;

/// Dense free-part computations are refused above this many cochains.
pub const DENSE_LIMIT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cube {
    pub point: usize,
    pub mask: u64,
    pub weight: i64,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn directions(&self) -> Vec<usize> {
        mask_bits(self.mask)
    }
}

pub(crate) fn mask_bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|j| mask >> j & 1 == 1).collect()
}

/// Free rank and invariant factors of one cohomology group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupData {
    pub rank: usize,
    pub torsion: Vec<i128>,
}

impl GroupData {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// `H^q` for `q = 0..=dim`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyGroup {
    pub degrees: Vec<GroupData>,
}

impl CohomologyGroup {
    pub fn get(&self, q: usize) -> GroupData {
        self.degrees.get(q).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(GroupData::is_zero)
    }

    pub fn euler(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(q, g)| if q % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

/// A face-closed set of cubes of a complex, e.g. a hyperplane section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    member: Vec<Vec<bool>>,
}

impl Subcomplex {
    pub fn empty(c: &CubeComplex) -> Subcomplex {
        Subcomplex {
            member: c.cubes.iter().map(|v| vec![false; v.len()]).collect(),
        }
    }

    /// Cubes inside `{l_j = value}`: base point on it and `j ∉ I`.
    pub fn hyperplane(c: &CubeComplex, j: usize, value: i64) -> Subcomplex {
        Subcomplex {
            member: c
                .cubes
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|cube| cube.mask >> j & 1 == 0 && c.points[cube.point][j] == value)
                        .collect()
                })
                .collect(),
        }
    }

    /// Cubes lying in the boundary of the box: some `i ∉ I` at a box wall.
    pub fn box_boundary(c: &CubeComplex, bounds: &BoxBounds) -> Subcomplex {
        Subcomplex {
            member: c
                .cubes
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|cube| {
                            let p = &c.points[cube.point];
                            (0..c.s).any(|i| {
                                cube.mask >> i & 1 == 0 && (p[i] == bounds.lo[i] || p[i] == bounds.hi[i])
                            })
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            member: self
                .member
                .iter()
                .zip(&other.member)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x || *y).collect())
                .collect(),
        }
    }

    pub fn contains(&self, q: usize, idx: usize) -> bool {
        self.member[q][idx]
    }

    pub fn count(&self, q: usize) -> usize {
        self.member[q].iter().filter(|&&x| x).count()
    }
}

/// Integral basis data for the free part of `H^q` at one level.
#[derive(Debug, Clone)]
pub struct FreeBasis {
    /// Global indices of the `q`-cubes carrying cochains.
    pub cubes: Vec<usize>,
    rank_delta: usize,
    u_inv: IntMatrix,
    p: IntMatrix,
    rank_image: usize,
    /// Representative cocycles of the free generators, over `cubes`.
    pub reps: Vec<Vec<i128>>,
    pub torsion: Vec<i128>,
}

impl FreeBasis {
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Free coordinates of a cocycle given over `self.cubes`; `None` if it is
    /// not a cocycle.
    pub fn coords(&self, v: &[i128]) -> Option<Vec<i128>> {
        let n = self.cubes.len();
        let mut full = vec![0i128; n];
        for (j, out) in full.iter_mut().enumerate() {
            let mut acc = 0i128;
            for i in 0..n {
                if v[i] != 0 {
                    acc += v[i] * self.u_inv[i][j];
                }
            }
            *out = acc;
        }
        if full[..self.rank_delta].iter().any(|&x| x != 0) {
            return None;
        }
        let c = &full[self.rank_delta..];
        let y = linalg::mat_vec(&self.p, c);
        Some(y[self.rank_image..].to_vec())
    }
}

/// A finite cubical complex filtered by integer weights.
#[derive(Debug, Clone)]
pub struct CubeComplex {
    s: usize,
    points: Vec<Vec<i64>>,
    /// Per dimension, sorted by `(weight, point, mask)`.
    cubes: Vec<Vec<Cube>>,
    /// `faces[q][c]`: the `2q` faces of cube `c` of dimension `q` as
    /// `(index in dimension q-1, sign)`.
    faces: Vec<Vec<Vec<(usize, i8)>>>,
}

fn point_lookup(points: &[Vec<i64>]) -> HashMap<&[i64], usize> {
    points.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect()
}

impl CubeComplex {
    /// All cubes whose vertices lie in `points`, weighted by the max of
    /// the point weights.
    pub fn from_points(s: usize, points: Vec<Vec<i64>>, weights: Vec<i64>) -> CubeComplex {
        assert!(s <= 64, "at most 64 vertices are supported");
        assert_eq!(points.len(), weights.len());
        let lookup = point_lookup(&points);
        let nbr: Vec<Vec<Option<usize>>> = points
            .iter()
            .map(|p| {
                let mut x = p.clone();
                (0..s)
                    .map(|j| {
                        x[j] += 1;
                        let r = lookup.get(x.as_slice()).copied();
                        x[j] -= 1;
                        r
                    })
                    .collect()
            })
            .collect();
        drop(lookup);
        let mut layers: Vec<Vec<Cube>> = vec![points
            .iter()
            .enumerate()
            .map(|(i, _)| Cube {
                point: i,
                mask: 0,
                weight: weights[i],
            })
            .collect()];
        loop {
            let prev = layers.last().unwrap();
            let index: HashMap<(usize, u64), usize> =
                prev.iter().enumerate().map(|(i, c)| ((c.point, c.mask), i)).collect();
            let mut next = Vec::new();
            for c in prev {
                let start = if c.mask == 0 { 0 } else { 64 - c.mask.leading_zeros() as usize };
                for j in start..s {
                    let Some(p2) = nbr[c.point][j] else { continue };
                    if let Some(&other) = index.get(&(p2, c.mask)) {
                        next.push(Cube {
                            point: c.point,
                            mask: c.mask | 1 << j,
                            weight: c.weight.max(prev[other].weight),
                        });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layers.push(next);
        }
        CubeComplex::assemble(s, points, layers, &nbr)
    }

    /// The complex spanned by the listed cubes `(base point, directions)` and
    /// all their faces, every cube of weight 0.
    pub fn from_cubes(s: usize, cubes: &[(Vec<i64>, Vec<usize>)]) -> CubeComplex {
        let mut pts: std::collections::BTreeSet<Vec<i64>> = Default::default();
        let mut set: std::collections::BTreeSet<(Vec<i64>, u64)> = Default::default();
        for (p, dirs) in cubes {
            let mask: u64 = dirs.iter().map(|&j| 1u64 << j).sum();
            // every subcube (p + e_A, B) with A ∩ B = ∅, A ∪ B ⊆ I
            let bits = mask_bits(mask);
            let n = bits.len();
            for sel in 0..3usize.pow(n as u32) {
                let mut x = p.clone();
                let mut m = 0u64;
                let mut r = sel;
                for &j in &bits {
                    match r % 3 {
                        1 => x[j] += 1,
                        2 => m |= 1 << j,
                        _ => {}
                    }
                    r /= 3;
                }
                if m == 0 {
                    pts.insert(x.clone());
                }
                set.insert((x, m));
            }
        }
        let points: Vec<Vec<i64>> = pts.into_iter().collect();
        let lookup = point_lookup(&points);
        let nbr: Vec<Vec<Option<usize>>> = points
            .iter()
            .map(|p| {
                let mut x = p.clone();
                (0..s)
                    .map(|j| {
                        x[j] += 1;
                        let r = lookup.get(x.as_slice()).copied();
                        x[j] -= 1;
                        r
                    })
                    .collect()
            })
            .collect();
        let mut layers: Vec<Vec<Cube>> = Vec::new();
        for (x, m) in &set {
            let q = m.count_ones() as usize;
            while layers.len() <= q {
                layers.push(Vec::new());
            }
            layers[q].push(Cube {
                point: lookup[x.as_slice()],
                mask: *m,
                weight: 0,
            });
        }
        drop(lookup);
        CubeComplex::assemble(s, points, layers, &nbr)
    }

    fn assemble(s: usize, points: Vec<Vec<i64>>, mut layers: Vec<Vec<Cube>>, nbr: &[Vec<Option<usize>>]) -> CubeComplex {
        for layer in layers.iter_mut() {
            layer.sort_by_key(|c| (c.weight, c.point, c.mask));
        }
        let mut faces: Vec<Vec<Vec<(usize, i8)>>> = vec![Vec::new()];
        for q in 1..layers.len() {
            let index: HashMap<(usize, u64), usize> = layers[q - 1]
                .iter()
                .enumerate()
                .map(|(i, c)| ((c.point, c.mask), i))
                .collect();
            let f = layers[q]
                .par_iter()
                .map(|c| {
                    let mut out = Vec::with_capacity(2 * q);
                    for (t, j) in mask_bits(c.mask).into_iter().enumerate() {
                        let sign: i8 = if t % 2 == 0 { -1 } else { 1 };
                        let m = c.mask & !(1 << j);
                        let near = index[&(c.point, m)];
                        let far = index[&(nbr[c.point][j].expect("face closed"), m)];
                        out.push((near, sign));
                        out.push((far, -sign));
                    }
                    out
                })
                .collect();
            faces.push(f);
        }
        CubeComplex {
            s,
            points,
            cubes: layers,
            faces,
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Top cube dimension present (0 for a nonempty complex of points).
    pub fn max_dim(&self) -> usize {
        self.cubes.len().saturating_sub(1)
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn cubes(&self, q: usize) -> &[Cube] {
        self.cubes.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Faces of cube `idx` of dimension `q` with their boundary signs.
    pub fn faces(&self, q: usize, idx: usize) -> &[(usize, i8)] {
        &self.faces[q][idx]
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of `q`-cubes of weight `≤ level`.
    pub fn count_at(&self, q: usize, level: i64) -> usize {
        self.cubes(q).partition_point(|c| c.weight <= level)
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.cubes.first().and_then(|v| v.first()).map(|c| c.weight)
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.cubes.iter().filter_map(|v| v.last()).map(|c| c.weight).max()
    }

    /// Cubes of dimension `q` in `S_level` outside `rel`.
    fn active(&self, q: usize, level: i64, rel: Option<&Subcomplex>) -> Vec<usize> {
        let n = self.count_at(q, level);
        (0..n).filter(|&i| rel.is_none_or(|r| !r.contains(q, i))).collect()
    }

    /// Coboundary `δ_q : C^q → C^{q+1}` of the pair `(S_level, rel)`, rows
    /// indexed by the active `(q+1)`-cubes, columns by the active `q`-cubes.
    pub fn coboundary(&self, q: usize, level: i64, rel: Option<&Subcomplex>) -> (SparseMatrix, Vec<usize>, Vec<usize>) {
        let cols = self.active(q, level, rel);
        let rows = if q + 1 < self.cubes.len() {
            self.active(q + 1, level, rel)
        } else {
            Vec::new()
        };
        let mut col_pos = HashMap::with_capacity(cols.len());
        for (i, &c) in cols.iter().enumerate() {
            col_pos.insert(c, i);
        }
        let mut m = SparseMatrix::new(rows.len(), cols.len());
        for (r, &cube) in rows.iter().enumerate() {
            let mut row: Vec<(usize, i128)> = self.faces[q + 1][cube]
                .iter()
                .filter_map(|&(f, sg)| col_pos.get(&f).map(|&c| (c, sg as i128)))
                .collect();
            row.sort_unstable_by_key(|e| e.0);
            m.rows[r] = row;
        }
        (m, rows, cols)
    }

    /// Connected components of `S_level`: `(total, not meeting rel)`.
    pub fn components(&self, level: i64, rel: Option<&Subcomplex>) -> (usize, usize) {
        let labels = self.component_labels(level);
        let n = labels.len();
        let total = labels.iter().enumerate().filter(|(i, &l)| l == *i).count();
        let mut touched = vec![false; n];
        if let Some(r) = rel {
            for i in 0..n {
                if r.contains(0, i) {
                    touched[labels[i]] = true;
                }
            }
        }
        let free = labels
            .iter()
            .enumerate()
            .filter(|(i, &l)| l == *i && !touched[l])
            .count();
        (total, free)
    }

    /// Root label per point of `S_level` (points are the first
    /// `count_at(0, level)` 0-cubes).
    pub fn component_labels(&self, level: i64) -> Vec<usize> {
        let n = self.count_at(0, level);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in 0..self.count_at(1, level) {
            let f = &self.faces[1][e];
            let (a, b) = (find(&mut parent, f[0].0), find(&mut parent, f[1].0));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    }

    /// Integral cohomology of `S_level`, or of the pair `(S_level, rel)`.
    pub fn cohomology(&self, level: i64, rel: Option<&Subcomplex>) -> CohomologyGroup {
        let top = self.max_dim();
        if self.is_empty() || self.count_at(0, level) == 0 {
            return CohomologyGroup {
                degrees: vec![GroupData::default(); top + 1],
            };
        }
        let (_, h0) = self.components(level, rel);
        // rank δ_0 = n_0 - h0 (the incidence matrix is totally unimodular)
        let counts: Vec<usize> = (0..=top).map(|q| self.active(q, level, rel).len()).collect();
        let inv: Vec<crate::sparse::Invariants> = (1..top)
            .into_par_iter()
            .map(|q| self.coboundary(q, level, rel).0.invariants())
            .collect();
        let rank_delta = |q: usize| -> usize {
            if q == 0 {
                counts[0] - h0
            } else if q >= top {
                0
            } else {
                inv[q - 1].rank
            }
        };
        let degrees = (0..=top)
            .map(|q| {
                let below = if q == 0 { 0 } else { rank_delta(q - 1) };
                let rank = counts[q] - rank_delta(q) - below;
                let torsion = if q >= 2 { inv[q - 2].torsion.clone() } else { Vec::new() };
                GroupData { rank, torsion }
            })
            .collect();
        CohomologyGroup { degrees }
    }

    /// Alternating cube count of `(S_level, rel)`.
    pub fn euler_count(&self, level: i64, rel: Option<&Subcomplex>) -> i64 {
        (0..=self.max_dim())
            .map(|q| {
                let n = self.active(q, level, rel).len() as i64;
                if q % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// `δ_{q+1} δ_q = 0` on the full complex.
    pub fn check_delta_squared(&self) -> bool {
        let top = self.max_dim();
        let level = self.max_weight().unwrap_or(0);
        (0..top.saturating_sub(1)).all(|q| {
            let (a, _, _) = self.coboundary(q, level, None);
            let (b, _, _) = self.coboundary(q + 1, level, None);
            b.mul(&a).is_zero()
        })
    }

    /// Face closure check: every stored face index points at a cube whose
    /// weight does not exceed the cube's own.
    pub fn check_face_closure(&self) -> bool {
        (1..self.cubes.len()).all(|q| {
            self.cubes[q].iter().enumerate().all(|(i, c)| {
                self.faces[q][i].len() == 2 * q
                    && self.faces[q][i].iter().all(|&(f, _)| self.cubes[q - 1][f].weight <= c.weight)
            })
        })
    }

    /// Dense integral basis of the free part of `H^q(S_level, rel)`; `None`
    /// when the cochain space exceeds [`DENSE_LIMIT`].
    pub fn free_basis(&self, q: usize, level: i64, rel: Option<&Subcomplex>) -> Option<FreeBasis> {
        let cols = self.active(q, level, rel);
        let n = cols.len();
        if n > DENSE_LIMIT {
            return None;
        }
        let (d, rows_up, _) = self.coboundary(q, level, rel);
        let dt = linalg::transpose(&d.to_dense(), n);
        let ech = linalg::row_echelon(&dt, rows_up.len());
        let r = ech.rank;
        let k = n - r;
        // image of δ_{q-1} in kernel coordinates
        let image: IntMatrix = if q == 0 {
            Vec::new()
        } else {
            let (e, _, _) = self.coboundary(q - 1, level, rel);
            let ncols = e.ncols;
            let dense = e.to_dense();
            let mut x = vec![vec![0i128; ncols]; k];
            for c in 0..ncols {
                for j in 0..k {
                    let mut acc = 0i128;
                    for i in 0..n {
                        if dense[i][c] != 0 {
                            acc += dense[i][c] * ech.u_inv[i][r + j];
                        }
                    }
                    x[j][c] = acc;
                }
            }
            x
        };
        let ncols_img = image.first().map_or(0, Vec::len);
        let (p, rank_image, torsion) = if k == 0 {
            (Vec::new(), 0, Vec::new())
        } else if ncols_img == 0 {
            (linalg::identity(k), 0, Vec::new())
        } else {
            let sm = linalg::smith(&image, ncols_img);
            let rk = sm.rank();
            let t = sm.torsion();
            (sm.u, rk, t)
        };
        let (det, adj) = linalg::adjugate(&p).expect("unimodular");
        let reps = (rank_image..k)
            .map(|col| {
                // c = P^{-1} e_col, cocycle = Σ c_j z_j
                let c: Vec<i128> = (0..k).map(|i| adj[i][col] * det).collect();
                let mut v = vec![0i128; n];
                for (j, &cj) in c.iter().enumerate() {
                    if cj == 0 {
                        continue;
                    }
                    for (t, x) in v.iter_mut().enumerate() {
                        *x += cj * ech.u[r + j][t];
                    }
                }
                v
            })
            .collect();
        Some(FreeBasis {
            cubes: cols,
            rank_delta: r,
            u_inv: ech.u_inv,
            p,
            rank_image,
            reps,
            torsion,
        })
    }

    /// Matrix of the restriction `H^q(S_from) → H^q(S_to)` on free parts
    /// (columns: generators at `from`), `from ≥ to`.
    pub fn restriction_map(&self, q: usize, from: i64, to: i64, rel: Option<&Subcomplex>) -> Result<Option<IntMatrix>> {
        if to > from {
            return Err(Error::Precondition("restriction goes from a higher level to a lower one".into()));
        }
        let (Some(hi), Some(lo)) = (self.free_basis(q, from, rel), self.free_basis(q, to, rel)) else {
            return Ok(None);
        };
        Ok(Some(restrict_between(&hi, &lo)))
    }
}

/// Restriction of the free generators of `hi` into the coordinates of `lo`,
/// where `lo.cubes ⊆ hi.cubes`.
pub fn restrict_between(hi: &FreeBasis, lo: &FreeBasis) -> IntMatrix {
    let pos: HashMap<usize, usize> = hi.cubes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut m = vec![vec![0i128; hi.rank()]; lo.rank()];
    for (g, rep) in hi.reps.iter().enumerate() {
        let v: Vec<i128> = lo.cubes.iter().map(|c| rep[pos[c]]).collect();
        let y = lo.coords(&v).expect("restriction of a cocycle is a cocycle");
        for (i, yi) in y.into_iter().enumerate() {
            m[i][g] = yi;
        }
    }
    m
}

/// Exact-mode weight of a cube `(k, I)`: max of `q` over its vertices.
pub fn cube_weight(lat: &Lattice, k: &CharElement, dirs: &[usize]) -> Rational {
    let s = lat.s();
    let mut best: Option<Rational> = None;
    for sel in 0..1u64 << dirs.len() {
        let mut l = vec![0i64; s];
        for (t, &j) in dirs.iter().enumerate() {
            if sel >> t & 1 == 1 {
                l[j] += 1;
            }
        }
        let w = lat.weight(&lat.shift(k, &l));
        best = Some(best.map_or(w, |b: Rational| b.max(w)));
    }
    best.expect("at least one vertex")
}

/// Integer box (in `E`-coordinates relative to `k`) containing every `l`
/// with `q(k + 2l) ≤ r`. Empty when `r` is below the class minimum.
pub fn ellipsoid_box(lat: &Lattice, k: &CharElement, r: Rational) -> Result<BoxBounds> {
    lat.check_char(k)?;
    let t = (r - lat.weight(k)).floor().to_integer();
    let t = i64::try_from(t).map_err(|_| Error::Overflow("ellipsoid_box"))?;
    let form = lat.form();
    raw_ellipsoid_box(form.matrix(), lat.definiteness(), |i, j| form.inv(i, j), &k.a, t)
}

/// Complex of all cubes of the class of `k` with `q ≤ q(k) + top`, in
/// `E`-coordinates relative to `k`, weights `χ_k`.
pub fn build_exact(lat: &Lattice, k: &CharElement, top: i64) -> Result<CubeComplex> {
    build_exact_capped(lat, k, top, usize::MAX)?.ok_or(Error::Overflow("build_exact"))
}

/// As `build_exact`, or `None` when `S_top` has more than `cap` points.
pub fn build_exact_capped(lat: &Lattice, k: &CharElement, top: i64, cap: usize) -> Result<Option<CubeComplex>> {
    lat.check_char(k)?;
    lat.form().require_negative_definite()?;
    let e = crate::enumerate::Ellipsoid::new(lat.form().matrix(), &k.a)?;
    let Some(points) = e.points_capped(2 * top, cap) else {
        return Ok(None);
    };
    let weights = points.iter().map(|l| e.two_chi(l) / 2).collect();
    Ok(Some(CubeComplex::from_points(lat.s(), points, weights)))
}

/// Complex of all cubes inside `bounds` (relative to `k`), weights `χ_k`.
pub fn build_box(lat: &Lattice, k: &CharElement, bounds: &BoxBounds) -> Result<CubeComplex> {
    lat.check_char(k)?;
    let s = lat.s();
    let mut points = Vec::new();
    if !bounds.is_empty() {
        let mut l = bounds.lo.clone();
        'outer: loop {
            points.push(l.clone());
            for i in (0..s).rev() {
                if l[i] < bounds.hi[i] {
                    l[i] += 1;
                    continue 'outer;
                }
                l[i] = bounds.lo[i];
            }
            break;
        }
    }
    let weights = points
        .iter()
        .map(|l| lat.chi(k, l).to_integer() as i64)
        .collect();
    Ok(CubeComplex::from_points(s, points, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlumbingGraph;
    use proptest::prelude::*;

    fn flat(points: &[&[i64]]) -> CubeComplex {
        let pts: Vec<Vec<i64>> = points.iter().map(|p| p.to_vec()).collect();
        let w = vec![0; pts.len()];
        CubeComplex::from_points(pts[0].len(), pts, w)
    }

    fn ranks(c: &CohomologyGroup) -> Vec<usize> {
        c.degrees.iter().map(|g| g.rank).collect()
    }

    #[test]
    fn hand_complexes() {
        assert_eq!(ranks(&flat(&[&[0, 0]]).cohomology(0, None)), vec![1]);
        assert_eq!(ranks(&flat(&[&[0, 0], &[3, 3]]).cohomology(0, None)), vec![2]);
        // four edges around a unit square, no 2-cell
        let sq = CubeComplex::from_cubes(
            2,
            &[
                (vec![0, 0], vec![0]),
                (vec![0, 0], vec![1]),
                (vec![1, 0], vec![1]),
                (vec![0, 1], vec![0]),
            ],
        );
        assert_eq!(ranks(&sq.cohomology(0, None)), vec![1, 1]);
        let solid = flat(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(ranks(&solid.cohomology(0, None)), vec![1, 0, 0]);
        // 3x3 block of squares without the middle one
        let mut cubes = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                if (x, y) != (1, 1) {
                    cubes.push((vec![x, y], vec![0, 1]));
                }
            }
        }
        let ann = CubeComplex::from_cubes(2, &cubes);
        assert_eq!(ranks(&ann.cohomology(0, None)), vec![1, 1, 0]);
        assert!(ann.check_delta_squared());
        assert!(ann.check_face_closure());
    }

    #[test]
    fn relative_pairs() {
        // interval rel endpoints: H^1 = Z
        let c = flat(&[&[0], &[1], &[2]]);
        let b = Subcomplex::box_boundary(&c, &BoxBounds { lo: vec![0], hi: vec![2] });
        assert_eq!(ranks(&c.cohomology(0, Some(&b))), vec![0, 1]);
        // interval rel one endpoint: zero
        let one = Subcomplex::hyperplane(&c, 0, 0);
        assert_eq!(ranks(&c.cohomology(0, Some(&one))), vec![0, 0]);
    }

    #[test]
    fn restriction_maps_on_a_filtration() {
        // a circle appears at level 1 and gets filled at level 2
        let pts: Vec<Vec<i64>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 0], vec![2, 1]];
        let w = vec![0, 0, 0, 1, 2, 2];
        let c = CubeComplex::from_points(2, pts, w);
        assert_eq!(ranks(&c.cohomology(0, None)), vec![1, 0, 0]);
        let id = c.restriction_map(0, 2, 1, None).unwrap().unwrap();
        assert_eq!(id, vec![vec![1]]);
        let same = c.restriction_map(0, 1, 1, None).unwrap().unwrap();
        assert_eq!(same, vec![vec![1]]);
        assert!(c.restriction_map(0, 0, 1, None).is_err());
    }

    #[test]
    fn exact_minus_two() {
        let g = PlumbingGraph::from_decorations(&[-2], &[]).unwrap();
        let lat = Lattice::new(&g).unwrap();
        let k = CharElement::new(vec![0]);
        let bx = ellipsoid_box(&lat, &k, Rational::new(-1, 8)).unwrap();
        assert_eq!(bx, BoxBounds { lo: vec![0], hi: vec![0] });
        assert!(ellipsoid_box(&lat, &k, Rational::new(-2, 8)).unwrap().is_empty());
        let c = build_exact(&lat, &k, 0).unwrap();
        assert_eq!(c.points().len(), 1);
        assert_eq!(c.cubes(1).len(), 0);
        // weights on both vertices of the 1-cube
        let w = cube_weight(&lat, &k, &[0]);
        assert_eq!(w, lat.weight(&k).max(lat.weight(&lat.shift(&k, &[1]))));
    }

    #[test]
    fn box_plus_one() {
        let g = PlumbingGraph::from_decorations(&[1], &[]).unwrap();
        let lat = Lattice::new(&g).unwrap();
        let k = lat.canonical();
        let bounds = BoxBounds { lo: vec![-3], hi: vec![5] };
        let c = build_box(&lat, &k, &bounds).unwrap();
        let b = Subcomplex::box_boundary(&c, &bounds);
        assert_eq!(ranks(&c.cohomology(1, Some(&b))), vec![0, 1]);
        assert_eq!(ranks(&c.cohomology(0, Some(&b))), vec![0, 0]);
        let m = c.restriction_map(1, 1, 1, Some(&b)).unwrap().unwrap();
        assert_eq!(m, vec![vec![1]]);
    }

    proptest! {
        #[test]
        fn random_point_sets(bits in proptest::collection::vec(any::<bool>(), 27), lvl in proptest::collection::vec(0i64..3, 27)) {
            let mut pts = Vec::new();
            let mut w = Vec::new();
            for (i, &b) in bits.iter().enumerate() {
                if b {
                    pts.push(vec![(i % 3) as i64, (i / 3 % 3) as i64, (i / 9) as i64]);
                    w.push(lvl[i]);
                }
            }
            prop_assume!(!pts.is_empty());
            let c = CubeComplex::from_points(3, pts, w);
            prop_assert!(c.check_delta_squared());
            prop_assert!(c.check_face_closure());
            for level in 0..3 {
                let h = c.cohomology(level, None);
                prop_assert_eq!(h.euler(), c.euler_count(level, None));
                let (comps, _) = c.components(level, None);
                prop_assert_eq!(h.get(0).rank, comps);
                // composition of restriction maps
                for q in 0..=c.max_dim() {
                    if level == 0 {
                        let a = c.restriction_map(q, 2, 1, None).unwrap().unwrap();
                        let b = c.restriction_map(q, 1, 0, None).unwrap().unwrap();
                        let ab = c.restriction_map(q, 2, 0, None).unwrap().unwrap();
                        let prod: Vec<Vec<i128>> = (0..ab.len())
                            .map(|i| {
                                (0..ab[i].len())
                                    .map(|j| (0..a.len()).map(|t| b[i][t] * a[t][j]).sum())
                                    .collect()
                            })
                            .collect();
                        prop_assert_eq!(prod, ab);
                    }
                }
            }
        }
    }
}
