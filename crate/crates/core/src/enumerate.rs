//! Exact enumeration of lattice points under a positive definite quadratic.
//!
//! For a negative definite form, `P = -M` is positive definite and
//! `2 χ_k(l) = lᵀ P l + aᵀ l` with `a` the `E*`-coefficients of `k`. The set
//! `{χ_k ≤ t}` is an ellipsoid; it is walked coordinate by coordinate
//! (Fincke–Pohst) with rational arithmetic, scanning integers outward from
//! each conditional centre, so nothing is missed or rounded.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::Definiteness;
use crate::Rational;

/// `{ l : lᵀ P l + aᵀ l ≤ 2t }` for integral positive definite `P`.
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    p: Vec<Vec<i64>>,
    a: Vec<i64>,
    /// Fincke–Pohst coefficients: diagonal in `q[i][i]`, `μ` above it.
    q: Vec<Vec<Rational>>,
    center: Vec<Rational>,
    /// `x*ᵀ P x*`, so that `lᵀPl + aᵀl = (l-x*)ᵀP(l-x*) - offset`.
    offset: Rational,
}

/// Per-coordinate integer bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxBounds {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl BoxBounds {
    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn contains(&self, l: &[i64]) -> bool {
        l.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }
}

fn floor(x: Rational) -> i64 {
    x.floor().to_integer() as i64
}

impl Ellipsoid {
    /// `m` is the intersection matrix (negative definite), `a` the linear term.
    pub fn new(m: &[Vec<i64>], a: &[i64]) -> Result<Ellipsoid> {
        let s = m.len();
        let p: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let mut q: Vec<Vec<Rational>> = p
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from(x as i128)).collect())
            .collect();
        for i in 0..s {
            if q[i][i] <= Rational::zero() {
                return Err(Error::NotNegativeDefinite);
            }
            for j in i + 1..s {
                q[j][i] = q[i][j];
                q[i][j] = q[i][j] / q[i][i];
            }
            for k in i + 1..s {
                for l in k..s {
                    let d = q[k][i] * q[i][l];
                    q[k][l] -= d;
                }
            }
        }
        // centre x* = -P⁻¹ a / 2, solved through the same factorisation:
        // P = Rᵀ D R with R unit upper triangular (R_ij = q[i][j], j > i).
        let mut z = vec![Rational::zero(); s];
        for i in 0..s {
            // Rᵀ z = -a/2
            let mut v = Rational::new(-(a[i] as i128), 2);
            for j in 0..i {
                v -= q[j][i] * z[j];
            }
            z[i] = v;
        }
        for i in 0..s {
            z[i] /= q[i][i];
        }
        let mut x = vec![Rational::zero(); s];
        for i in (0..s).rev() {
            let mut v = z[i];
            for j in i + 1..s {
                v -= q[i][j] * x[j];
            }
            x[i] = v;
        }
        let mut offset = Rational::zero();
        for i in 0..s {
            for j in 0..s {
                offset += x[i] * Rational::from(p[i][j] as i128) * x[j];
            }
        }
        Ok(Ellipsoid {
            p,
            a: a.to_vec(),
            q,
            center: x,
            offset,
        })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn center(&self) -> &[Rational] {
        &self.center
    }

    /// `2χ(l) = lᵀPl + aᵀl`.
    pub fn two_chi(&self, l: &[i64]) -> i64 {
        let s = self.dim();
        let mut acc = 0;
        for i in 0..s {
            if l[i] == 0 {
                continue;
            }
            acc += self.a[i] * l[i];
            for j in 0..s {
                acc += l[i] * self.p[i][j] * l[j];
            }
        }
        acc
    }

    /// Minimum of `lᵀPl + aᵀl` over the reals.
    pub fn real_minimum(&self) -> Rational {
        -self.offset
    }

    /// All integral `l` with `lᵀPl + aᵀl ≤ bound`, in lexicographic order.
    pub fn points(&self, bound: i64) -> Vec<Vec<i64>> {
        self.points_capped(bound, usize::MAX).expect("no cap")
    }

    /// As `points`, or `None` once more than `cap` points turn up.
    pub fn points_capped(&self, bound: i64, cap: usize) -> Option<Vec<Vec<i64>>> {
        let s = self.dim();
        let budget = Rational::from(bound as i128) + self.offset;
        let mut out = Vec::new();
        if budget < Rational::zero() {
            return Some(out);
        }
        if s == 0 {
            out.push(Vec::new());
            return Some(out);
        }
        let mut l = vec![0i64; s];
        self.walk(s - 1, budget, &mut l, &mut out, cap);
        if out.len() > cap {
            return None;
        }
        out.sort();
        Some(out)
    }

    fn walk(&self, i: usize, rem: Rational, l: &mut Vec<i64>, out: &mut Vec<Vec<i64>>, cap: usize) {
        let s = self.dim();
        // conditional centre of coordinate i
        let mut c = self.center[i];
        for j in i + 1..s {
            c -= self.q[i][j] * (Rational::from(l[j] as i128) - self.center[j]);
        }
        let d = self.q[i][i];
        let visit = |v: i64, l: &mut Vec<i64>, out: &mut Vec<Vec<i64>>| -> bool {
            let y = Rational::from(v as i128) - c;
            let used = d * y * y;
            if used > rem || out.len() > cap {
                return false;
            }
            l[i] = v;
            if i == 0 {
                out.push(l.clone());
            } else {
                self.walk(i - 1, rem - used, l, out, cap);
            }
            true
        };
        let f = floor(c);
        let mut v = f;
        while visit(v, l, out) {
            v -= 1;
        }
        let mut v = f + 1;
        while visit(v, l, out) {
            v += 1;
        }
        l[i] = 0;
    }

    /// Exact per-coordinate bounds of `{lᵀPl + aᵀl ≤ bound}`:
    /// `|l_i - x*_i|² ≤ (bound + offset)·(P⁻¹)_ii`.
    pub fn bounds(&self, bound: i64, p_inv_diag: &[Rational]) -> BoxBounds {
        let s = self.dim();
        let budget = Rational::from(bound as i128) + self.offset;
        if budget < Rational::zero() {
            return BoxBounds {
                lo: vec![1; s],
                hi: vec![0; s],
            };
        }
        let mut lo = Vec::with_capacity(s);
        let mut hi = Vec::with_capacity(s);
        for i in 0..s {
            let r2 = budget * p_inv_diag[i];
            let c = self.center[i];
            let fits = |v: i64| {
                let y = Rational::from(v as i128) - c;
                y * y <= r2
            };
            let mut h = floor(c);
            while fits(h + 1) {
                h += 1;
            }
            while h > floor(c) - 1 && !fits(h) {
                h -= 1;
            }
            let mut lw = floor(c) + 1;
            while fits(lw - 1) {
                lw -= 1;
            }
            while lw < floor(c) + 2 && !fits(lw) {
                lw += 1;
            }
            lo.push(lw);
            hi.push(h);
        }
        BoxBounds { lo, hi }
    }
}

/// Ellipsoid of `{χ_k ≤ t}` with bounding box, for the class of `k`.
pub fn ellipsoid_box(
    m: &[Vec<i64>],
    definiteness: Definiteness,
    inv: impl Fn(usize, usize) -> Rational,
    a: &[i64],
    t: i64,
) -> Result<BoxBounds> {
    if definiteness != Definiteness::NegativeDefinite {
        return Err(Error::NotNegativeDefinite);
    }
    let e = Ellipsoid::new(m, a)?;
    // P⁻¹ = -M⁻¹
    let diag: Vec<Rational> = (0..m.len()).map(|i| -inv(i, i)).collect();
    Ok(e.bounds(2 * t, &diag))
}

/// Brute-force oracle for small dimensions: scan a cube `[-r, r]^s`.
pub fn brute_force_points(m: &[Vec<i64>], a: &[i64], bound: i64, r: i64) -> Vec<Vec<i64>> {
    let s = m.len();
    let mut out = Vec::new();
    let mut l = vec![-r; s];
    if s == 0 {
        return vec![Vec::new()];
    }
    loop {
        let mut v = 0;
        for i in 0..s {
            v += a[i] * l[i];
            for j in 0..s {
                v -= l[i] * m[i][j] * l[j];
            }
        }
        if v <= bound {
            out.push(l.clone());
        }
        let mut i = s;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if l[i] < r {
                l[i] += 1;
                for x in l.iter_mut().skip(i + 1) {
                    *x = -r;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_vertex_line() {
        // M = [-2], a = 0: 2χ(l) = 2 l²
        let e = Ellipsoid::new(&[vec![-2]], &[0]).unwrap();
        assert_eq!(e.points(0), vec![vec![0]]);
        assert_eq!(e.points(2), vec![vec![-1], vec![0], vec![1]]);
        assert!(e.points(-1).is_empty());
        assert_eq!(e.real_minimum(), Rational::zero());
    }

    #[test]
    fn shifted_centre() {
        // a = 2: 2χ = 2l² + 2l, minimum at l ∈ {-1, 0}
        let e = Ellipsoid::new(&[vec![-2]], &[2]).unwrap();
        assert_eq!(e.points(0), vec![vec![-1], vec![0]]);
        assert_eq!(e.center()[0], Rational::new(-1, 2));
    }

    #[test]
    fn bounds_contain_points() {
        let m = vec![vec![-2, 1, 0], vec![1, -3, 1], vec![0, 1, -2]];
        let inv = crate::graph::IntersectionForm::new(m.clone());
        let a = vec![1, -3, 2];
        let b = ellipsoid_box(&m, Definiteness::NegativeDefinite, |i, j| inv.inv(i, j), &a, 4).unwrap();
        let e = Ellipsoid::new(&m, &a).unwrap();
        for p in e.points(8) {
            assert!(b.contains(&p));
        }
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            d in proptest::collection::vec(-5i64..=-2, 3),
            edges in proptest::collection::vec(any::<bool>(), 3),
            a in proptest::collection::vec(-4i64..=4, 3),
            bound in -2i64..12,
        ) {
            let mut m = vec![vec![0i64; 3]; 3];
            for i in 0..3 { m[i][i] = d[i]; }
            let pairs = [(0, 1), (1, 2), (0, 2)];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if edges[k] { m[i][j] = 1; m[j][i] = 1; }
            }
            let f = crate::graph::IntersectionForm::new(m.clone());
            prop_assume!(f.classify() == Definiteness::NegativeDefinite);
            let e = Ellipsoid::new(&m, &a).unwrap();
            let pts = e.points(bound);
            // radius + 2 box around the bounds
            let diag: Vec<Rational> = (0..3).map(|i| -f.inv(i, i)).collect();
            let bx = e.bounds(bound, &diag);
            let r = bx.lo.iter().chain(&bx.hi).map(|x| x.abs()).max().unwrap_or(0) + 2;
            prop_assert_eq!(pts, brute_force_points(&m, &a, bound, r));
        }
    }
}
