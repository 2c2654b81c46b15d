//! Characteristic elements, their classes modulo `2L`, and weights.
//!
//! A characteristic element `k` is stored by its `E*`-coefficients `a_j`,
//! which are integers with `a_j ≡ e_j (mod 2)`. The class of `k` is the class
//! of `(k - K)/2` in `L'/L = Z^s / M Z^s`, read off from the Smith form of `M`.

use serde::{Deserialize, Serialize};

use crate::enumerate::Ellipsoid;
use crate::error::{Error, Result};
use crate::graph::{Definiteness, IntersectionForm, PlumbingGraph};
use crate::linalg::{self, IntMatrix};
use crate::Rational;

/// A characteristic element given by its `E*`-coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharElement {
    pub a: Vec<i64>,
}

impl CharElement {
    pub fn new(a: Vec<i64>) -> Self {
        CharElement { a }
    }
}

/// An orbit `k + 2L` with its id and a representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharClass {
    pub id: usize,
    pub rep: CharElement,
}

/// Minimal weight representative of a class and `d[k] = 2 min q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMin {
    pub k: CharElement,
    pub weight: Rational,
    pub d: Rational,
}

/// A non-degenerate plumbing lattice with the data needed for classes.
#[derive(Debug, Clone)]
pub struct Lattice {
    graph: PlumbingGraph,
    form: IntersectionForm,
    canonical: Vec<i64>,
    /// `u` of the Smith form `u M v = diag`.
    snf_u: IntMatrix,
    snf_u_inv: IntMatrix,
    snf_diag: Vec<i128>,
}

impl Lattice {
    pub fn new(graph: &PlumbingGraph) -> Result<Lattice> {
        let form = graph.intersection_form();
        form.require_nondegenerate()?;
        let s = graph.len();
        let smith = linalg::smith(&linalg::from_i64(form.matrix()), s);
        let (det_u, adj_u) = linalg::adjugate(&smith.u).expect("unimodular transform");
        let snf_u_inv = adj_u
            .iter()
            .map(|row| row.iter().map(|&x| x * det_u).collect())
            .collect();
        let canonical = graph.decorations().iter().map(|&e| e + 2).collect();
        Ok(Lattice {
            graph: graph.clone(),
            form,
            canonical,
            snf_u: smith.u,
            snf_u_inv,
            snf_diag: smith.diag,
        })
    }

    pub fn graph(&self) -> &PlumbingGraph {
        &self.graph
    }

    pub fn form(&self) -> &IntersectionForm {
        &self.form
    }

    pub fn s(&self) -> usize {
        self.graph.len()
    }

    pub fn definiteness(&self) -> Definiteness {
        self.form.classify()
    }

    /// `K` with `(K, E_j) = -e_j - 2`, i.e. `a_j = e_j + 2`.
    pub fn canonical(&self) -> CharElement {
        CharElement::new(self.canonical.clone())
    }

    pub fn is_characteristic(&self, a: &[i64]) -> bool {
        a.len() == self.s() && a.iter().zip(self.graph.decorations()).all(|(x, e)| (x - e).rem_euclid(2) == 0)
    }

    pub fn check_char(&self, k: &CharElement) -> Result<()> {
        if k.a.len() != self.s() {
            return Err(Error::DimensionMismatch {
                expected: self.s(),
                got: k.a.len(),
            });
        }
        if !self.is_characteristic(&k.a) {
            return Err(Error::NotCharacteristic);
        }
        Ok(())
    }

    /// `q(k) = -(k² + s)/8`.
    pub fn weight(&self, k: &CharElement) -> Rational {
        -(self.form.dual_square(&k.a) + Rational::from(self.s() as i128)) / Rational::from(8)
    }

    /// `χ_k(l) = -(k + l, l)/2` for a lattice vector `l`.
    pub fn chi(&self, k: &CharElement, l: &[i64]) -> Rational {
        let kl: i64 = -k.a.iter().zip(l).map(|(a, x)| a * x).sum::<i64>();
        let ll = self.form.lattice_pair(l, l);
        Rational::new(-(kl + ll) as i128, 2)
    }

    /// `k + 2l` in `E*`-coefficients.
    pub fn shift(&self, k: &CharElement, l: &[i64]) -> CharElement {
        let d = self.form.lattice_to_dual(l);
        CharElement::new(k.a.iter().zip(&d).map(|(a, x)| a + 2 * x).collect())
    }

    pub fn num_classes(&self) -> usize {
        self.snf_diag.iter().product::<i128>().unsigned_abs() as usize
    }

    fn radices(&self) -> Vec<i128> {
        self.snf_diag.iter().map(|d| d.abs()).collect()
    }

    /// Class id of the dual vector with `E*`-coefficients `x` in `L'/L`.
    pub fn dual_class_id(&self, x: &[i64]) -> usize {
        let wide: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        let y = linalg::mat_vec(&self.snf_u, &wide);
        let mut id = 0i128;
        let mut place = 1i128;
        for (yi, d) in y.iter().zip(self.radices()) {
            id += yi.rem_euclid(d) * place;
            place *= d;
        }
        id as usize
    }

    /// Class id of a characteristic element: the class of `(k - K)/2`.
    pub fn class_id(&self, k: &CharElement) -> Result<usize> {
        self.check_char(k)?;
        let x: Vec<i64> = k.a.iter().zip(&self.canonical).map(|(a, c)| (a - c) / 2).collect();
        Ok(self.dual_class_id(&x))
    }

    /// Dual vector (in `E*`-coefficients) representing class `id` of `L'/L`.
    pub fn dual_class_rep(&self, id: usize) -> Vec<i64> {
        let mut rest = id as i128;
        let digits: Vec<i128> = self
            .radices()
            .iter()
            .map(|&d| {
                let digit = rest % d;
                rest /= d;
                digit
            })
            .collect();
        linalg::mat_vec(&self.snf_u_inv, &digits).iter().map(|&v| v as i64).collect()
    }

    pub fn class_rep(&self, id: usize) -> CharElement {
        let x = self.dual_class_rep(id);
        CharElement::new(self.canonical.iter().zip(&x).map(|(c, v)| c + 2 * v).collect())
    }

    pub fn classes(&self) -> Vec<CharClass> {
        (0..self.num_classes())
            .map(|id| CharClass {
                id,
                rep: self.class_rep(id),
            })
            .collect()
    }

    pub fn same_class(&self, k1: &CharElement, k2: &CharElement) -> bool {
        let d: Vec<i64> = k1.a.iter().zip(&k2.a).map(|(x, y)| x - y).collect();
        d.iter().all(|v| v % 2 == 0)
            && self
                .form
                .dual_to_lattice_integral(&d.iter().map(|v| v / 2).collect::<Vec<_>>())
                .is_some()
    }

    /// Minimiser of `q` over the class of `k0`, by exhaustive search of an
    /// ellipsoid `{q(k1 + 2l) ≤ q(k1)}` around the real minimiser. Ties go to the lexicographically
    /// smallest `E*`-coefficient vector.
    pub fn class_min(&self, k0: &CharElement) -> Result<ClassMin> {
        self.check_char(k0)?;
        self.form.require_negative_definite()?;
        // Start from the lattice point nearest the real minimiser so the
        // searched ellipsoid stays small.
        let near: Vec<i64> = Ellipsoid::new(self.form.matrix(), &k0.a)?
            .center()
            .iter()
            .map(|c| c.round().to_integer() as i64)
            .collect();
        let k0 = &self.shift(k0, &near);
        let e = Ellipsoid::new(self.form.matrix(), &k0.a)?;
        let mut best: Option<(i64, CharElement)> = None;
        for l in e.points(0) {
            let v = e.two_chi(&l);
            let k = self.shift(k0, &l);
            let better = match &best {
                None => true,
                Some((bv, bk)) => v < *bv || (v == *bv && k.a < bk.a),
            };
            if better {
                best = Some((v, k));
            }
        }
        let (_, k) = best.expect("the ellipsoid contains l = 0");
        let weight = self.weight(&k);
        Ok(ClassMin {
            k,
            weight,
            d: weight * Rational::from(2),
        })
    }

    /// Lattice vector `l` with `k2 = k1 + 2l`, when both lie in one class.
    pub fn difference(&self, k1: &CharElement, k2: &CharElement) -> Option<Vec<i64>> {
        let d: Vec<i64> = k2.a.iter().zip(&k1.a).map(|(x, y)| x - y).collect();
        if d.iter().any(|v| v % 2 != 0) {
            return None;
        }
        self.form.dual_to_lattice_integral(&d.iter().map(|v| v / 2).collect::<Vec<_>>())
    }
}

/// `R`: drop the `j0` coefficient.
pub fn restrict(k: &CharElement, j0: usize) -> CharElement {
    let mut a = k.a.clone();
    a.remove(j0);
    CharElement::new(a)
}

/// `b`: insert a zero `j0` coefficient (coefficient-wise inclusion).
pub fn b_map(a: &[i64], j0: usize) -> Vec<i64> {
    let mut out = a.to_vec();
    out.insert(j0, 0);
    out
}

/// `R(E_{j0})` in `E*`-coefficients of `Γ∖j0`: minus the edge multiplicities.
pub fn restricted_e_j0(g: &PlumbingGraph, j0: usize) -> Vec<i64> {
    let mut out = vec![0i64; g.len()];
    for (j, m) in g.neighbours(j0) {
        out[j] = -m;
    }
    out.remove(j0);
    out
}

/// `(E_{j0}, i(x))_Γ` for `x ∈ L'(Γ∖j0)` given by `E*`-coefficients.
pub fn pair_with_e_j0(sub: &IntersectionForm, g: &PlumbingGraph, j0: usize, x: &[i64]) -> Rational {
    if sub.dim() == 0 {
        return Rational::from(0);
    }
    sub.dual_pair(&restricted_e_j0(g, j0), x)
}
