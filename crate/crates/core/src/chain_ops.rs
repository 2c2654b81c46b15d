//! Chain-level operators on the `Char`-indexed cube complex.
//!
//! A cube `(k, I)` has vertices `k + 2 Σ_{j∈I'} E_j` for `I' ⊆ I`; `k` is
//! stored by its `E*`-coefficients. Chains are finite `Z`-combinations of
//! `U^m (k, I)`. The operators of the blow-up (`π_*^h`, `c^h`, `K`), the
//! vertex deletion (`B`, `B̄`, `B_rel`) and the surgery (`A = π_*^h ∘ B`) act
//! on single cubes and extend linearly. `B`, `B̄` and `A` are infinite sums;
//! they are evaluated on a window of the `E*_{j0}`-coefficient (or up to a
//! `U`-cutoff) together with the sub-window on which the result is exact.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charlat::{pair_with_e_j0, restrict, restricted_e_j0, CharElement, Lattice};
use crate::error::{Error, Result};
use crate::graph::{Definiteness, PlumbingGraph};
use crate::sample;
use crate::Rational;

/// A cube `(k, I)`: base point in `E*`-coefficients and direction mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharCube {
    pub a: Vec<i64>,
    pub mask: u64,
}

impl CharCube {
    pub fn new(a: Vec<i64>, mask: u64) -> Self {
        CharCube { a, mask }
    }

    pub fn dim(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn dirs(&self) -> Vec<usize> {
        (0..64).filter(|&j| self.mask >> j & 1 == 1).collect()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.mask >> j & 1 == 1
    }
}

impl std::fmt::Display for CharCube {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.a, self.dirs())
    }
}

fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// A non-degenerate lattice with `E_j` cached in `E*`-coefficients.
#[derive(Debug, Clone)]
pub struct CubeLattice {
    lat: Lattice,
    steps: Vec<Vec<i64>>,
}

impl CubeLattice {
    pub fn new(g: &PlumbingGraph) -> Result<Self> {
        let lat = Lattice::new(g)?;
        let s = g.len();
        let steps = (0..s)
            .map(|j| {
                let mut e = vec![0i64; s];
                e[j] = 1;
                lat.form().lattice_to_dual(&e)
            })
            .collect();
        Ok(CubeLattice { lat, steps })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn graph(&self) -> &PlumbingGraph {
        self.lat.graph()
    }

    pub fn s(&self) -> usize {
        self.lat.s()
    }

    /// `E_j` in `E*`-coefficients.
    pub fn step(&self, j: usize) -> &[i64] {
        &self.steps[j]
    }

    /// `a + 2 Σ_{j∈sub} E_j`.
    pub fn vertex(&self, a: &[i64], sub: u64) -> Vec<i64> {
        let mut v = a.to_vec();
        for j in 0..self.s() {
            if sub >> j & 1 == 1 {
                for (x, e) in v.iter_mut().zip(&self.steps[j]) {
                    *x += 2 * e;
                }
            }
        }
        v
    }

    pub fn q(&self, a: &[i64]) -> Rational {
        self.lat.weight(&CharElement::new(a.to_vec()))
    }

    /// `w(k, I)`: the largest vertex weight.
    pub fn weight(&self, c: &CharCube) -> Rational {
        submasks(c.mask)
            .map(|sub| self.q(&self.vertex(&c.a, sub)))
            .max()
            .expect("a cube has a vertex")
    }

    pub fn check(&self, c: &CharCube) -> Result<()> {
        if c.a.len() != self.s() {
            return Err(Error::DimensionMismatch {
                expected: self.s(),
                got: c.a.len(),
            });
        }
        if self.s() < 64 && c.mask >> self.s() != 0 {
            return Err(Error::Precondition(format!("cube directions {:?} out of range", c.dirs())));
        }
        self.lat.check_char(&CharElement::new(c.a.clone()))
    }
}

/// `U`-exponent `hi - lo`, which must be a non-negative integer.
fn exponent(hi: Rational, lo: Rational) -> Result<i64> {
    let d = hi - lo;
    if !d.is_integer() || d.is_negative() {
        return Err(Error::Precondition(format!("U-exponent {d} is not a non-negative integer")));
    }
    d.to_integer().to_i64().ok_or(Error::Overflow("U-exponent"))
}

/// A finite `Z`-combination of `U^m (k, I)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteChain {
    terms: BTreeMap<(i64, CharCube), i64>,
}

/// One term of a chain, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTerm {
    pub coef: i64,
    pub u: i64,
    pub cube: CharCube,
}

impl FiniteChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(coef: i64, u: i64, cube: CharCube) -> Self {
        let mut c = Self::new();
        c.add_term(coef, u, cube);
        c
    }

    pub fn add_term(&mut self, coef: i64, u: i64, cube: CharCube) {
        if coef == 0 {
            return;
        }
        let key = (u, cube);
        let v = self.terms.entry(key.clone()).or_insert(0);
        *v += coef;
        if *v == 0 {
            self.terms.remove(&key);
        }
    }

    /// `self += scale · U^shift · other`.
    pub fn add_chain(&mut self, other: &FiniteChain, scale: i64, shift: i64) {
        for ((u, cube), coef) in &other.terms {
            self.add_term(scale * coef, u + shift, cube.clone());
        }
    }

    pub fn sub(&self, other: &FiniteChain) -> FiniteChain {
        let mut out = self.clone();
        out.add_chain(other, -1, 0);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &CharCube, i64)> {
        self.terms.iter().map(|((u, c), coef)| (*u, c, *coef))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, u: i64, cube: &CharCube) -> i64 {
        self.terms.get(&(u, cube.clone())).copied().unwrap_or(0)
    }

    /// Reduction modulo `U^{max_u + 1}`.
    pub fn truncate(&self, max_u: i64) -> FiniteChain {
        self.filter(|u, _| u <= max_u)
    }

    pub fn filter(&self, keep: impl Fn(i64, &CharCube) -> bool) -> FiniteChain {
        FiniteChain {
            terms: self
                .terms
                .iter()
                .filter(|((u, c), _)| keep(*u, c))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    pub fn to_terms(&self) -> Vec<ChainTerm> {
        self.iter()
            .map(|(u, cube, coef)| ChainTerm {
                coef,
                u,
                cube: cube.clone(),
            })
            .collect()
    }

    /// Linear extension of a cube operator.
    pub fn map(&self, f: impl Fn(&CharCube) -> Result<FiniteChain>) -> Result<FiniteChain> {
        let mut out = FiniteChain::new();
        for (u, cube, coef) in self.iter() {
            out.add_chain(&f(cube)?, coef, u);
        }
        Ok(out)
    }
}

impl std::fmt::Display for FiniteChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(u, c, coef)| format!("{coef}·U^{u}{c}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `∂(k, I) = Σ_t (-1)^t (U^· (k, I∖j_t) - U^· (k + 2E_{j_t}, I∖j_t))`, `t` counted from 1.
pub fn boundary(cl: &CubeLattice, cube: &CharCube) -> Result<FiniteChain> {
    cl.check(cube)?;
    let w = cl.weight(cube);
    let mut out = FiniteChain::new();
    for (t, j) in cube.dirs().into_iter().enumerate() {
        let sign = if t % 2 == 0 { -1 } else { 1 };
        let rest = cube.mask & !(1 << j);
        let near = CharCube::new(cube.a.clone(), rest);
        let far = CharCube::new(cl.vertex(&cube.a, 1 << j), rest);
        let en = exponent(w, cl.weight(&near))?;
        let ef = exponent(w, cl.weight(&far))?;
        out.add_term(sign, en, near);
        out.add_term(-sign, ef, far);
    }
    Ok(out)
}

pub fn boundary_chain(cl: &CubeLattice, chain: &FiniteChain) -> Result<FiniteChain> {
    chain.map(|c| boundary(cl, c))
}

/// The blow-up pair `Γ' = blow_up(Γ, j0)`; the new vertex is the last index of `Γ'`.
#[derive(Debug, Clone)]
pub struct BlowUp {
    pub base: CubeLattice,
    pub blown: CubeLattice,
    pub j0: usize,
}

impl BlowUp {
    pub fn new(g: &PlumbingGraph, j0: usize) -> Result<Self> {
        let blown = g.blow_up(j0)?;
        Ok(BlowUp {
            base: CubeLattice::new(g)?,
            blown: CubeLattice::new(&blown)?,
            j0,
        })
    }

    pub fn new_vertex(&self) -> usize {
        self.base.s()
    }

    /// `π_*` on `E*`-coefficients: the new coefficient is added to `j0`.
    pub fn pi_star(&self, a: &[i64]) -> Vec<i64> {
        let n = self.new_vertex();
        let mut out = a[..n].to_vec();
        out[self.j0] += a[n];
        out
    }

    /// `c(k) = π*(k) + E_new`.
    pub fn c_map(&self, a: &[i64]) -> Vec<i64> {
        let mut out = a.to_vec();
        out[self.j0] -= 1;
        out.push(1);
        out
    }

    pub fn pi_star_h(&self, cube: &CharCube) -> Result<FiniteChain> {
        self.blown.check(cube)?;
        if cube.contains(self.new_vertex()) {
            return Ok(FiniteChain::new());
        }
        let image = CharCube::new(self.pi_star(&cube.a), cube.mask);
        let e = exponent(self.blown.weight(cube), self.base.weight(&image))?;
        Ok(FiniteChain::monomial(1, e, image))
    }

    /// Sign of the second term of `c^h`: the position of the new direction
    /// relative to `j0` among the directions of `I₀`.
    fn c_h_sign(&self, mask0: u64) -> i64 {
        let after = (mask0 >> (self.j0 + 1)).count_ones();
        if after % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn c_h(&self, cube: &CharCube) -> Result<FiniteChain> {
        self.base.check(cube)?;
        let ck = self.c_map(&cube.a);
        let w = self.base.weight(cube);
        let first = CharCube::new(ck.clone(), cube.mask);
        let mut out = FiniteChain::monomial(1, exponent(w, self.blown.weight(&first))?, first);
        if cube.contains(self.j0) {
            let mask0 = cube.mask & !(1 << self.j0);
            let far = CharCube::new(self.base.vertex(&cube.a, 1 << self.j0), mask0);
            let second = CharCube::new(self.blown.vertex(&ck, 1 << self.j0), mask0 | 1 << self.new_vertex());
            let e = exponent(w, self.base.weight(&far))?;
            out.add_term(self.c_h_sign(mask0), e, second);
        }
        Ok(out)
    }

    /// The homotopy `K`. On `q`-cubes `∂K - K∂ = (-1)^q (id - c^h π_*^h)`,
    /// so `(-1)^q K` is a chain homotopy in the usual sense.
    pub fn homotopy_k(&self, cube: &CharCube) -> Result<FiniteChain> {
        self.blown.check(cube)?;
        let n = self.new_vertex();
        if cube.contains(n) {
            return Ok(FiniteChain::new());
        }
        let a = (cube.a[n] - 1) / 2;
        if a == 0 {
            return Ok(FiniteChain::new());
        }
        let base = self.c_map(&self.pi_star(&cube.a));
        let sign = a.signum();
        let range = if a > 0 { 0..a } else { a..0 };
        let w = self.blown.weight(cube);
        let step = self.blown.step(n).to_vec();
        let mut out = FiniteChain::new();
        for l in range {
            let pt: Vec<i64> = base.iter().zip(&step).map(|(x, e)| x + 2 * l * e).collect();
            let c = CharCube::new(pt, cube.mask | 1 << n);
            out.add_term(sign, exponent(w, self.blown.weight(&c))?, c);
        }
        Ok(out)
    }
}

/// Range of the `E*_{j0}`-coefficient and the tracked `U`-exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationWindow {
    pub a_lo: i64,
    pub a_hi: i64,
    pub u_cutoff: i64,
}

impl TruncationWindow {
    pub fn around(center: i64, radius: i64, u_cutoff: i64) -> Self {
        TruncationWindow {
            a_lo: center - radius,
            a_hi: center + radius,
            u_cutoff,
        }
    }

    pub fn contains(&self, a: i64) -> bool {
        self.a_lo <= a && a <= self.a_hi
    }

    pub fn is_empty(&self) -> bool {
        self.a_lo > self.a_hi
    }
}

/// A windowed evaluation of an infinite sum. Terms whose `E*_{j0}`-coefficient
/// lies in `exact` agree with the untruncated operator after one boundary step.
#[derive(Debug, Clone)]
pub struct Windowed {
    pub chain: FiniteChain,
    pub window: TruncationWindow,
    pub exact: (i64, i64),
}

/// Representatives `r_[k]` of the classes of `Γ∖j0`, used for the signs of `B̄`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ClassRepTable {
    pub reps: BTreeMap<usize, CharElement>,
}

impl ClassRepTable {
    /// Class-minimum representatives for negative definite lattices,
    /// Smith-form representatives otherwise.
    pub fn default_for(lat: &Lattice) -> Result<Self> {
        let mut reps = BTreeMap::new();
        let negdef = lat.definiteness() == Definiteness::NegativeDefinite;
        for cls in lat.classes() {
            let rep = if negdef && lat.s() > 0 {
                lat.class_min(&cls.rep)?.k
            } else {
                cls.rep
            };
            reps.insert(cls.id, rep);
        }
        Ok(ClassRepTable { reps })
    }

    /// Replace the representative of the class of `k` by `k`.
    pub fn set(&mut self, lat: &Lattice, k: CharElement) -> Result<()> {
        let id = lat.class_id(&k)?;
        self.reps.insert(id, k);
        Ok(())
    }

    pub fn rep(&self, lat: &Lattice, k: &CharElement) -> Result<&CharElement> {
        let id = lat.class_id(k)?;
        let r = self
            .reps
            .get(&id)
            .ok_or_else(|| Error::ClassMismatch(format!("no representative for class {id}")))?;
        if !lat.same_class(r, k) {
            return Err(Error::ClassMismatch(format!("representative {:?} is not in class {id}", r.a)));
        }
        Ok(r)
    }
}

/// The deletion pair `(Γ, Γ∖j0)` and, when `Γ⁺` is non-degenerate, the
/// blow-up `Γ^b = blow_up(Γ⁺, j0)` through which `A` factors.
#[derive(Debug, Clone)]
pub struct SurgeryOps {
    pub full: CubeLattice,
    pub sub: CubeLattice,
    pub j0: usize,
    pub plus: Option<BlowUp>,
}

impl SurgeryOps {
    pub fn new(g: &PlumbingGraph, j0: usize) -> Result<Self> {
        let full = CubeLattice::new(g)?;
        let sub = CubeLattice::new(&g.delete_vertex(j0)?)?;
        let plus_graph = g.bump_decoration(j0)?;
        let plus = if plus_graph.intersection_form().is_degenerate() {
            None
        } else {
            Some(BlowUp::new(&plus_graph, j0)?)
        };
        Ok(SurgeryOps { full, sub, j0, plus })
    }

    /// Directions of `Γ∖j0` as directions of `Γ`.
    pub fn lift_mask(&self, mask: u64) -> u64 {
        let low = mask & ((1u64 << self.j0) - 1);
        let high = mask >> self.j0;
        low | high << (self.j0 + 1)
    }

    /// Directions of `Γ` not containing `j0` as directions of `Γ∖j0`.
    pub fn drop_mask(&self, mask: u64) -> Option<u64> {
        if mask >> self.j0 & 1 == 1 {
            return None;
        }
        let low = mask & ((1u64 << self.j0) - 1);
        let high = mask >> (self.j0 + 1);
        Some(low | high << self.j0)
    }

    /// `(b(k) + x E*_{j0}, I)` as a cube of `Γ`.
    pub fn b_cube(&self, cube: &CharCube, x: i64) -> CharCube {
        let mut a = cube.a.clone();
        a.insert(self.j0, x);
        CharCube::new(a, self.lift_mask(cube.mask))
    }

    fn multiplicity(&self, j_full: usize) -> i64 {
        self.full.graph().matrix()[self.j0][j_full]
    }

    /// Shift of the `E*_{j0}`-coefficient along the faces of the image cube.
    pub fn pad(&self, cube: &CharCube) -> i64 {
        let lifted = self.lift_mask(cube.mask);
        (0..self.full.s())
            .filter(|&j| lifted >> j & 1 == 1)
            .map(|j| 2 * self.multiplicity(j).abs())
            .max()
            .unwrap_or(0)
    }

    fn parity_start(&self, lo: i64) -> i64 {
        let e = self.full.graph().decorations()[self.j0];
        if (lo - e).rem_euclid(2) == 0 {
            lo
        } else {
            lo + 1
        }
    }

    fn windowed(&self, cube: &CharCube, win: TruncationWindow, sign: impl Fn(i64) -> Result<i64>) -> Result<Windowed> {
        self.sub.check(cube)?;
        let mut chain = FiniteChain::new();
        let mut x = self.parity_start(win.a_lo);
        while x <= win.a_hi {
            chain.add_term(sign(x)?, 0, self.b_cube(cube, x));
            x += 2;
        }
        let pad = self.pad(cube);
        Ok(Windowed {
            chain,
            window: win,
            exact: (win.a_lo + pad, win.a_hi - pad),
        })
    }

    /// `B(k, I) = Σ_{x ≡ e_{j0}} (b(k) + x E*_{j0}, I)` over the window.
    pub fn b_op(&self, cube: &CharCube, win: TruncationWindow) -> Result<Windowed> {
        self.windowed(cube, win, |_| Ok(1))
    }

    /// `(-1)^{n/2}` with `n = (k - r_[k], R(E_{j0})) + x + e_{j0}`.
    pub fn bbar_sign(&self, k: &CharElement, x: i64, reps: &ClassRepTable) -> Result<i64> {
        let lat = self.sub.lattice();
        let r = reps.rep(lat, k)?;
        let diff: Vec<i64> = k.a.iter().zip(&r.a).map(|(p, q)| p - q).collect();
        let pairing = if lat.s() == 0 {
            Rational::zero()
        } else {
            lat.form().dual_pair(&diff, &restricted_e_j0(self.full.graph(), self.j0))
        };
        let n = pairing + Rational::from((x + self.full.graph().decorations()[self.j0]) as i128);
        if !n.is_integer() || n.to_integer().rem_euclid(2) != 0 {
            return Err(Error::Precondition(format!("sign exponent n = {n} is not even")));
        }
        Ok(if (n.to_integer() / 2).rem_euclid(2) == 0 { 1 } else { -1 })
    }

    pub fn bbar_op(&self, cube: &CharCube, reps: &ClassRepTable, win: TruncationWindow) -> Result<Windowed> {
        let k = CharElement::new(cube.a.clone());
        self.windowed(cube, win, |x| self.bbar_sign(&k, x, reps))
    }

    /// Window of `x` for which `B(cube)` meets `support`: exactly the
    /// coefficients needed to evaluate a cochain supported there.
    pub fn certify_pairing(&self, cube: &CharCube, support: &[CharCube], u_cutoff: i64) -> TruncationWindow {
        let lifted = self.lift_mask(cube.mask);
        let hits: Vec<i64> = support
            .iter()
            .filter(|c| c.mask == lifted && restrict(&CharElement::new(c.a.clone()), self.j0).a == cube.a)
            .map(|c| c.a[self.j0])
            .collect();
        match (hits.iter().min(), hits.iter().max()) {
            (Some(&lo), Some(&hi)) => TruncationWindow {
                a_lo: lo,
                a_hi: hi,
                u_cutoff,
            },
            _ => TruncationWindow {
                a_lo: 1,
                a_hi: 0,
                u_cutoff,
            },
        }
    }

    fn plus(&self) -> Result<&BlowUp> {
        self.plus
            .as_ref()
            .ok_or_else(|| Error::Precondition("Γ⁺ is degenerate".into()))
    }

    /// Largest `|a|` (new-vertex coefficient in `Γ^b`) that can contribute
    /// to `A` below the cutoff.
    pub fn a_reach(u_cutoff: i64) -> i64 {
        let mut m = 1;
        while ((m + 2) * (m + 2) - 1) / 8 <= u_cutoff {
            m += 2;
        }
        m + 2
    }

    /// `A = π_*^h ∘ B` into `Γ⁺`, exact modulo `U^{u_cutoff + 1}`.
    pub fn a_op(&self, cube: &CharCube, u_cutoff: i64) -> Result<FiniteChain> {
        self.full.check(cube)?;
        let plus = self.plus()?;
        let reach = Self::a_reach(u_cutoff);
        let mut out = FiniteChain::new();
        let mut a = -reach;
        while a <= reach {
            let mut pt = cube.a.clone();
            pt.push(a);
            out.add_chain(&plus.pi_star_h(&CharCube::new(pt, cube.mask))?, 1, 0);
            a += 2;
        }
        Ok(out.truncate(u_cutoff))
    }

    pub fn a_chain(&self, chain: &FiniteChain, u_cutoff: i64) -> Result<FiniteChain> {
        Ok(chain.map(|c| self.a_op(c, u_cutoff))?.truncate(u_cutoff))
    }

    /// `r0` with `r0 E*_{j0} = kbar - i R(kbar)`.
    pub fn r0(&self, kbar: &CharElement) -> Result<Rational> {
        self.full.lattice().check_char(kbar)?;
        let rk = restrict(kbar, self.j0);
        Ok(Rational::from(kbar.a[self.j0] as i128) + self.pair_e_j0(&rk.a))
    }

    fn pair_e_j0(&self, x: &[i64]) -> Rational {
        pair_with_e_j0(self.sub.lattice().form(), self.full.graph(), self.j0, x)
    }

    /// `B_rel(k', I) = (i(k') + r0 E*_{j0}, I)` for `k'` in the class of `R(kbar)`.
    pub fn b_rel(&self, cube: &CharCube, kbar: &CharElement) -> Result<CharCube> {
        self.sub.check(cube)?;
        let rk = restrict(kbar, self.j0);
        let k = CharElement::new(cube.a.clone());
        if !self.sub.lattice().same_class(&k, &rk) {
            return Err(Error::ClassMismatch("cube is not in the class of R(kbar)".into()));
        }
        let x = self.r0(kbar)? - self.pair_e_j0(&cube.a);
        if !x.is_integer() {
            return Err(Error::Precondition(format!("E*_j0 coefficient {x} is not integral")));
        }
        let x = x.to_integer() as i64;
        let out = self.b_cube(cube, x);
        self.full.check(&out)?;
        Ok(out)
    }
}

/// Parameters of an identity-check run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityConfig {
    pub seed: u64,
    pub cases: usize,
    pub max_vertices: usize,
    /// Half-width of the compared inner window for `B`, `B̄` and `A∘B̄`.
    pub window: i64,
    pub u_cutoff: i64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        IdentityConfig {
            seed: 0,
            cases: 100,
            max_vertices: 5,
            window: 4,
            u_cutoff: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub config: IdentityConfig,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&IdentityOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

type Check = fn(&mut rand_chacha::ChaCha8Rng, &IdentityConfig) -> Result<Option<String>>;

/// Names of the checked identities, in report order.
pub const IDENTITIES: [&str; 10] = [
    "boundary_squared",
    "pi_star_chain_map",
    "c_h_chain_map",
    "pi_c_identity",
    "homotopy",
    "b_chain_map",
    "bbar_chain_map",
    "a_bbar_zero",
    "surjectivity_witness",
    "preimage_display",
];

/// Run every identity on `config.cases` seeded random instances each.
pub fn check_identities(config: &IdentityConfig) -> IdentityReport {
    let checks: [Check; 10] = [
        check_boundary_squared,
        check_pi_chain_map,
        check_c_chain_map,
        check_pi_c,
        check_homotopy,
        check_b_chain_map,
        check_bbar_chain_map,
        check_a_bbar,
        check_witness,
        check_display,
    ];
    let outcomes = IDENTITIES
        .iter()
        .zip(checks)
        .enumerate()
        .map(|(which, (name, check))| {
            let results: Vec<Option<String>> = (0..config.cases)
                .into_par_iter()
                .map(|i| {
                    let mut rng = sample::case_rng(config.seed, (which as u64) << 32 | i as u64);
                    match check(&mut rng, config) {
                        Ok(r) => r,
                        Err(e) => Some(format!("error: {e}")),
                    }
                })
                .collect();
            IdentityOutcome {
                name: name.to_string(),
                cases: config.cases,
                failures: results.iter().filter(|r| r.is_some()).count(),
                counterexample: results.into_iter().flatten().next(),
            }
        })
        .collect();
    IdentityReport {
        config: *config,
        outcomes,
    }
}

fn describe(g: &PlumbingGraph, j0: Option<usize>, cube: &CharCube, lhs: &FiniteChain, rhs: &FiniteChain) -> String {
    let at = j0.map(|j| format!(" j0={j}")).unwrap_or_default();
    format!(
        "graph {:?} edges {:?}{at} cube {cube}: {lhs} != {rhs}",
        g.decorations(),
        g.edges()
    )
}

fn verdict(g: &PlumbingGraph, j0: Option<usize>, cube: &CharCube, lhs: FiniteChain, rhs: FiniteChain) -> Option<String> {
    (lhs != rhs).then(|| describe(g, j0, cube, &lhs, &rhs))
}

fn any_graph<R: Rng>(rng: &mut R, cfg: &IdentityConfig, min_s: usize) -> PlumbingGraph {
    let max_s = cfg.max_vertices.max(min_s);
    if rng.gen_bool(0.7) {
        loop {
            let g = sample::random_negative_definite(rng, max_s, -5);
            if g.len() >= min_s {
                return g;
            }
        }
    } else {
        sample::random_nondegenerate(rng, min_s, max_s)
    }
}

fn random_cube<R: Rng>(rng: &mut R, cl: &CubeLattice, max_dim: usize, spread: i64) -> CharCube {
    let k = sample::random_char(rng, cl.lattice(), spread);
    CharCube::new(k.a, sample::random_mask(rng, cl.s(), max_dim))
}

fn check_boundary_squared(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let g = any_graph(rng, cfg, 2);
    let cl = CubeLattice::new(&g)?;
    let mut cube = random_cube(rng, &cl, 3, 6);
    while cube.dim() < 2 {
        cube.mask |= 1 << rng.gen_range(0..cl.s());
    }
    let dd = boundary_chain(&cl, &boundary(&cl, &cube)?)?;
    Ok(verdict(&g, None, &cube, dd, FiniteChain::new()))
}

fn blow_up_case<R: Rng>(rng: &mut R, cfg: &IdentityConfig) -> Result<(PlumbingGraph, BlowUp)> {
    let g = any_graph(rng, cfg, 1);
    let j0 = rng.gen_range(0..g.len());
    let bu = BlowUp::new(&g, j0)?;
    Ok((g, bu))
}

fn check_pi_chain_map(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, bu) = blow_up_case(rng, cfg)?;
    let cube = random_cube(rng, &bu.blown, 3, 7);
    let lhs = bu.pi_star_h(&cube)?.map(|c| boundary(&bu.base, c))?;
    let rhs = boundary(&bu.blown, &cube)?.map(|c| bu.pi_star_h(c))?;
    Ok(verdict(&g, Some(bu.j0), &cube, lhs, rhs))
}

fn check_c_chain_map(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, bu) = blow_up_case(rng, cfg)?;
    let mut cube = random_cube(rng, &bu.base, 3, 6);
    if rng.gen_bool(0.6) {
        cube.mask |= 1 << bu.j0;
    }
    let lhs = bu.c_h(&cube)?.map(|c| boundary(&bu.blown, c))?;
    let rhs = boundary(&bu.base, &cube)?.map(|c| bu.c_h(c))?;
    Ok(verdict(&g, Some(bu.j0), &cube, lhs, rhs))
}

fn check_pi_c(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, bu) = blow_up_case(rng, cfg)?;
    let cube = random_cube(rng, &bu.base, 3, 6);
    let w = bu.base.weight(&cube);
    let w_c = bu.blown.weight(&CharCube::new(bu.c_map(&cube.a), cube.mask));
    if w != w_c {
        return Ok(Some(format!("weights differ on {cube}: {w} vs {w_c}")));
    }
    let lhs = bu.c_h(&cube)?.map(|c| bu.pi_star_h(c))?;
    Ok(verdict(&g, Some(bu.j0), &cube, lhs, FiniteChain::monomial(1, 0, cube.clone())))
}

fn check_homotopy(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, bu) = blow_up_case(rng, cfg)?;
    let cube = random_cube(rng, &bu.blown, 3, 7);
    let dk = bu.homotopy_k(&cube)?.map(|c| boundary(&bu.blown, c))?;
    let kd = boundary(&bu.blown, &cube)?.map(|c| bu.homotopy_k(c))?;
    let lhs = dk.sub(&kd);
    let cp = bu.pi_star_h(&cube)?.map(|c| bu.c_h(c))?;
    let sign = if cube.dim() % 2 == 0 { 1 } else { -1 };
    let mut rhs = FiniteChain::monomial(sign, 0, cube.clone());
    rhs.add_chain(&cp, -sign, 0);
    Ok(verdict(&g, Some(bu.j0), &cube, lhs, rhs))
}

fn deletion_case<R: Rng>(rng: &mut R, cfg: &IdentityConfig, need_plus: bool) -> Result<(PlumbingGraph, SurgeryOps)> {
    loop {
        let g = any_graph(rng, cfg, 2);
        let j0 = rng.gen_range(0..g.len());
        let sub = g.delete_vertex(j0)?;
        if sub.intersection_form().is_degenerate() {
            continue;
        }
        let ops = SurgeryOps::new(&g, j0)?;
        if need_plus && ops.plus.is_none() {
            continue;
        }
        return Ok((g, ops));
    }
}

/// Compare `∂T` and `T∂` for a windowed operator on the certified sub-window.
fn windowed_chain_map<F>(ops: &SurgeryOps, cube: &CharCube, cfg: &IdentityConfig, op: F) -> Result<(FiniteChain, FiniteChain)>
where
    F: Fn(&CharCube, TruncationWindow) -> Result<Windowed>,
{
    let pad = ops.pad(cube);
    let win = TruncationWindow::around(0, cfg.window + pad, 0);
    let img = op(cube, win)?;
    let (lo, hi) = img.exact;
    let j0 = ops.j0;
    let inner = |_: i64, c: &CharCube| lo <= c.a[j0] && c.a[j0] <= hi;
    let lhs = boundary_chain(&ops.full, &img.chain)?.filter(inner);
    let rhs = boundary(&ops.sub, cube)?
        .map(|c| op(c, win).map(|w| w.chain))?
        .filter(inner);
    Ok((lhs, rhs))
}

fn check_b_chain_map(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, ops) = deletion_case(rng, cfg, false)?;
    let cube = random_cube(rng, &ops.sub, 3, 5);
    let (lhs, rhs) = windowed_chain_map(&ops, &cube, cfg, |c, w| ops.b_op(c, w))?;
    Ok(verdict(&g, Some(ops.j0), &cube, lhs, rhs))
}

fn check_bbar_chain_map(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, ops) = deletion_case(rng, cfg, false)?;
    let reps = ClassRepTable::default_for(ops.sub.lattice())?;
    let cube = random_cube(rng, &ops.sub, 3, 5);
    let (lhs, rhs) = windowed_chain_map(&ops, &cube, cfg, |c, w| ops.bbar_op(c, &reps, w))?;
    Ok(verdict(&g, Some(ops.j0), &cube, lhs, rhs))
}

fn check_a_bbar(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, ops) = deletion_case(rng, cfg, true)?;
    let reps = ClassRepTable::default_for(ops.sub.lattice())?;
    let cube = random_cube(rng, &ops.sub, 1, 5);
    let reach = SurgeryOps::a_reach(cfg.u_cutoff);
    let win = TruncationWindow::around(0, cfg.window + reach, cfg.u_cutoff);
    let bbar = ops.bbar_op(&cube, &reps, win)?;
    let composite = ops.a_chain(&bbar.chain, cfg.u_cutoff)?;
    let (lo, hi) = (win.a_lo + reach, win.a_hi - reach);
    let j0 = ops.j0;
    let inner = composite.filter(|_, c| lo <= c.a[j0] && c.a[j0] <= hi);
    Ok(verdict(&g, Some(j0), &cube, inner, FiniteChain::new()))
}

fn check_witness(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, ops) = deletion_case(rng, cfg, false)?;
    let reps = ClassRepTable::default_for(ops.sub.lattice())?;
    let cube = random_cube(rng, &ops.sub, 3, 5);
    let e = g.decorations()[ops.j0];
    let x = 2 * rng.gen_range(-4..=4) + e.rem_euclid(2);
    let target = ops.b_cube(&cube, x);
    // Pair the dual of `target` with B̄ of the cube itself and of its neighbours.
    let mut others = vec![cube.clone()];
    for j in 0..ops.sub.s() {
        others.push(CharCube::new(ops.sub.vertex(&cube.a, 1 << j), cube.mask));
        others.push(CharCube::new(cube.a.clone(), cube.mask ^ 1 << j));
    }
    for other in &others {
        let win = ops.certify_pairing(other, std::slice::from_ref(&target), 0);
        let value = if win.is_empty() {
            0
        } else {
            let img = ops.bbar_op(other, &reps, win)?;
            if img.chain.len() != 1 {
                return Ok(Some(format!("certified window gave {} terms for {other}", img.chain.len())));
            }
            img.chain.coefficient(0, &target)
        };
        let expected_unit = other == &cube;
        if expected_unit != (value.abs() == 1) || (!expected_unit && value != 0) {
            return Ok(Some(format!(
                "graph {:?} j0={} target {target}: pairing with {other} is {value}",
                g.decorations(),
                ops.j0
            )));
        }
    }
    Ok(None)
}

/// Whether the maximum of `Σ_{I'} a_j - (E_{I'}, E_{I'})` over `I' ⊆ I` is
/// attained with `j0 ∈ I'` and without it.
fn realizations(ops: &SurgeryOps, a: &[i64], mask: u64) -> (bool, bool) {
    let s = ops.full.s();
    let form = ops.full.lattice().form();
    let values: Vec<(u64, i64)> = submasks(mask)
        .map(|sub| {
            let l: Vec<i64> = (0..s).map(|j| (sub >> j & 1) as i64).collect();
            let lin: i64 = (0..s).filter(|&j| sub >> j & 1 == 1).map(|j| a[j]).sum();
            (sub, lin - form.lattice_pair(&l, &l))
        })
        .collect();
    let best = values.iter().map(|v| v.1).max().expect("non-empty");
    let with = values.iter().any(|&(sub, v)| v == best && sub >> ops.j0 & 1 == 1);
    let without = values.iter().any(|&(sub, v)| v == best && sub >> ops.j0 & 1 == 0);
    (with, without)
}

/// `k̄(i)`: the coefficients of `k` with `j0`-coefficient `a_{j0} + 1 + 2i`, on `Γ⁺`.
fn k_bar(ops: &SurgeryOps, a: &[i64], i: i64) -> Vec<i64> {
    let mut out = a.to_vec();
    out[ops.j0] += 1 + 2 * i;
    out
}

fn check_display(rng: &mut rand_chacha::ChaCha8Rng, cfg: &IdentityConfig) -> Result<Option<String>> {
    let (g, ops) = deletion_case(rng, cfg, true)?;
    let j0 = ops.j0;
    let k = sample::random_char(rng, ops.full.lattice(), 5);
    let mut mask = sample::random_mask(rng, ops.full.s(), 3);
    let with_j0 = rng.gen_bool(0.7);
    if with_j0 {
        mask |= 1 << j0;
    } else {
        mask &= !(1 << j0);
    }
    let term = |a: Vec<i64>| FiniteChain::monomial(1, 0, CharCube::new(a, mask));
    let k_at = |i: i64| {
        let mut a = k.a.clone();
        a[j0] += 2 * i;
        a
    };
    if !with_j0 {
        let cube = CharCube::new(k.a.clone(), mask);
        let lhs = ops.a_op(&cube, 0)?;
        let mut rhs = term(k_bar(&ops, &k.a, -1));
        rhs.add_chain(&term(k_bar(&ops, &k.a, 0)), 1, 0);
        return Ok(verdict(&g, Some(j0), &cube, lhs, rhs));
    }
    let bound = 40 + 4 * k.a.iter().map(|x| x.abs()).sum::<i64>();
    let i0 = (-bound..=bound)
        .find(|&i| realizations(&ops, &k_at(i), mask).0)
        .ok_or_else(|| Error::Precondition("threshold i0 not found".into()))?;
    for i in i0 - 2..=i0 + 2 {
        let cube = CharCube::new(k_at(i), mask);
        let lhs = ops.a_op(&cube, 0)?;
        let mut rhs = FiniteChain::new();
        let offsets: &[i64] = match i.cmp(&i0) {
            std::cmp::Ordering::Less => &[-1, 0],
            std::cmp::Ordering::Equal => &[-1, 0, 1],
            std::cmp::Ordering::Greater => &[0, 1],
        };
        for &o in offsets {
            rhs.add_chain(&term(k_bar(&ops, &k.a, i + o)), 1, 0);
        }
        if lhs != rhs {
            return Ok(Some(format!("i0={i0} i={i}: {}", describe(&g, Some(j0), &cube, &lhs, &rhs))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(decs: &[i64], edges: &[(usize, usize)]) -> PlumbingGraph {
        PlumbingGraph::from_decorations(decs, edges).unwrap()
    }

    #[test]
    fn boundary_of_points_and_segments() {
        let cl = CubeLattice::new(&g(&[-2, -2], &[(0, 1)])).unwrap();
        assert!(boundary(&cl, &CharCube::new(vec![0, 0], 0)).unwrap().is_zero());
        // Both vertices of this segment have the same weight.
        let a = vec![-2, 0];
        let far = cl.vertex(&a, 1);
        assert_eq!(cl.q(&a), cl.q(&far));
        let d = boundary(&cl, &CharCube::new(a.clone(), 1)).unwrap();
        let mut expected = FiniteChain::monomial(-1, 0, CharCube::new(a, 0));
        expected.add_term(1, 0, CharCube::new(far, 0));
        assert_eq!(d, expected);
    }

    #[test]
    fn pi_star_exponents() {
        let bu = BlowUp::new(&g(&[-2], &[]), 0).unwrap();
        // k' = (a_j0, a_new); the new coefficient is a.
        let cube = CharCube::new(vec![-1, 1], 0);
        let img = bu.pi_star_h(&cube).unwrap();
        assert_eq!(img, FiniteChain::monomial(1, 0, CharCube::new(vec![0], 0)));
        let cube = CharCube::new(vec![-1, 3], 0);
        let img = bu.pi_star_h(&cube).unwrap();
        assert_eq!(img, FiniteChain::monomial(1, 1, CharCube::new(vec![2], 0)));
        assert!(bu.pi_star_h(&CharCube::new(vec![-1, 3], 0b10)).unwrap().is_zero());
    }

    #[test]
    fn c_h_terms_and_k_ranges() {
        let bu = BlowUp::new(&g(&[-2, -3], &[(0, 1)]), 0).unwrap();
        assert_eq!(bu.c_h(&CharCube::new(vec![0, 1], 0b10)).unwrap().len(), 1);
        assert_eq!(bu.c_h(&CharCube::new(vec![0, 1], 0b01)).unwrap().len(), 2);
        // a = 0, a = 1 and a = -3
        assert!(bu.homotopy_k(&CharCube::new(vec![1, 1, 1], 0)).unwrap().is_zero());
        assert_eq!(bu.homotopy_k(&CharCube::new(vec![1, 1, 3], 0)).unwrap().len(), 1);
        assert_eq!(bu.homotopy_k(&CharCube::new(vec![1, 1, -5], 0)).unwrap().len(), 3);
    }

    #[test]
    fn bbar_signs_alternate() {
        let ops = SurgeryOps::new(&g(&[-2, -3, -2], &[(0, 1), (1, 2)]), 1).unwrap();
        let reps = ClassRepTable::default_for(ops.sub.lattice()).unwrap();
        let r = reps.reps.values().next().unwrap().clone();
        let e = -3;
        // k = r and x = e: n = 2e.
        assert_eq!(ops.bbar_sign(&r, e, &reps).unwrap(), if e % 2 == 0 { 1 } else { -1 });
        let s0 = ops.bbar_sign(&r, 1, &reps).unwrap();
        let s1 = ops.bbar_sign(&r, 3, &reps).unwrap();
        assert_eq!(s0, -s1);
    }

    #[test]
    fn single_window_b() {
        let ops = SurgeryOps::new(&g(&[-2, -3], &[(0, 1)]), 1).unwrap();
        let cube = CharCube::new(vec![0], 1);
        let w = ops.b_op(&cube, TruncationWindow::around(1, 0, 0)).unwrap();
        assert_eq!(w.chain, FiniteChain::monomial(1, 0, CharCube::new(vec![0, 1], 1)));
    }

    #[test]
    fn a_mod_u_keeps_plus_minus_one() {
        let ops = SurgeryOps::new(&g(&[-2, -3], &[(0, 1)]), 1).unwrap();
        let cube = CharCube::new(vec![0, 1], 0b01);
        let a = ops.a_op(&cube, 0).unwrap();
        let mut expected = FiniteChain::monomial(1, 0, CharCube::new(vec![0, 0], 0b01));
        expected.add_term(1, 0, CharCube::new(vec![0, 2], 0b01));
        assert_eq!(a, expected);
    }

    #[test]
    fn b_rel_on_example() {
        let gr = PlumbingGraph::parse(crate::fixtures::E8_TAIL).unwrap();
        let j0 = gr.index_of("j0").unwrap();
        let ops = SurgeryOps::new(&gr, j0).unwrap();
        let k = ops.full.lattice().canonical();
        for lj in 0..4i64 {
            // kbar = K + 2 l' with l' = lj E*_{j0}
            let mut kbar = k.clone();
            kbar.a[j0] += 2 * lj;
            assert_eq!(ops.r0(&kbar).unwrap(), Rational::from((2 * lj - 1) as i128));
            let rk = restrict(&kbar, j0);
            let out = ops.b_rel(&CharCube::new(rk.a.clone(), 0), &kbar).unwrap();
            assert_eq!(out.a, kbar.a);
            assert_eq!(restrict(&CharElement::new(out.a), j0), rk);
        }
    }

    #[test]
    fn identities_hold_on_seeded_cases() {
        let report = check_identities(&IdentityConfig {
            cases: 40,
            ..IdentityConfig::default()
        });
        for o in &report.outcomes {
            assert!(o.passed(), "{}: {:?}", o.name, o.counterexample);
        }
    }
}
