//! Graded `Z[U]`-modules assembled from sublevel towers.
//!
//! `ℍ^q(Γ, [k]) = ⊕_t H^q(S_t)` with `U` acting by restriction
//! `H^q(S_{t+1}) → H^q(S_t)`. A level `t` sits at weight `w_0 + t` and
//! homogeneous degree `2(w_0 + t)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charlat::{CharElement, ClassMin, Lattice};
use crate::cubes::{self, CohomologyGroup, CubeComplex, GroupData, Subcomplex};
use crate::enumerate::BoxBounds;
use crate::error::{Error, Result};
use crate::graph::Definiteness;
use crate::linalg::IntMatrix;
use crate::Rational;

/// How weights are offset before they are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `q(k) = -(k² + s)/8` as is.
    #[default]
    Absolute,
    /// Shifted by `-q(K)`, i.e. weights are `χ_K`-values.
    Canonical,
}

impl Normalization {
    pub fn shift(self, lat: &Lattice) -> Rational {
        match self {
            Normalization::Absolute => Rational::from(0),
            Normalization::Canonical => -lat.weight(&lat.canonical()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Negative definite: every `S_t` is finite and computed in full.
    Exact,
    /// Indefinite: `H^*(S_t ∩ B, S_t ∩ ∂B)` for a box `B`.
    Box,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stabilization {
    /// The reduced part vanished on the last `stable_levels` levels.
    Heuristic { stable_levels: usize },
    /// The level range was fixed by the caller.
    Override { levels: i64 },
    /// Radii `radius`, `radius + 2`, `radius + 4` gave identical data.
    BoxStabilized { radius: i64 },
    /// The box radius was fixed by the caller.
    FixedBox { radius: i64 },
    /// Derived from other towers: every group vanishes above `top`.
    Bounded { top: i64 },
    NotStabilized { reason: String },
}

impl Stabilization {
    pub fn is_stable(&self) -> bool {
        !matches!(self, Stabilization::NotStabilized { .. })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerOptions {
    pub normalization: Normalization,
    /// Fixed top level (exact mode), skipping the stabilisation search.
    pub levels: Option<i64>,
    /// Consecutive vanishing levels required by the stopping rule.
    pub stable_levels: usize,
    pub max_level: i64,
    pub max_points: usize,
    /// Point limit for relative (pair) complexes.
    pub max_pair_points: usize,
    /// Fixed box radius (box mode).
    pub box_radius: Option<i64>,
    pub max_box_radius: i64,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            normalization: Normalization::Absolute,
            levels: None,
            stable_levels: 3,
            max_level: 64,
            max_points: 400_000,
            max_pair_points: 40_000,
            box_radius: None,
            max_box_radius: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelData {
    pub level: i64,
    pub groups: CohomologyGroup,
    /// Components of `S_t` (all of them, ignoring any relative part).
    pub components: usize,
}

/// Cohomology of `(S_t, rel)` for every `t` in `range`, in order.
pub fn compute_levels(c: &CubeComplex, rel: Option<&Subcomplex>, range: std::ops::RangeInclusive<i64>) -> Vec<LevelData> {
    let levels: Vec<i64> = range.collect();
    levels
        .par_iter()
        .map(|&t| LevelData {
            level: t,
            groups: c.cohomology(t, rel),
            components: c.components(t, None).0,
        })
        .collect()
}

/// A computed tower `t ↦ H^*(S_t)` for one class.
#[derive(Debug, Clone)]
pub struct Tower {
    pub class_id: usize,
    /// Level 0 is this characteristic element.
    pub base: CharElement,
    /// Absolute `q(base)`.
    pub base_weight: Rational,
    pub shift: Rational,
    pub normalization: Normalization,
    pub mode: Mode,
    pub levels: Vec<LevelData>,
    pub status: Stabilization,
    pub complex: CubeComplex,
    /// Box boundary in box mode.
    pub rel: Option<Subcomplex>,
    pub box_bounds: Option<BoxBounds>,
    pub min: Option<ClassMin>,
}

impl Tower {
    pub fn weight(&self, level: i64) -> Rational {
        self.base_weight + Rational::from(level as i128) + self.shift
    }

    pub fn degree(&self, level: i64) -> Rational {
        self.weight(level) * Rational::from(2)
    }

    pub fn top_level(&self) -> i64 {
        self.levels.last().map_or(0, |l| l.level)
    }

    pub fn bottom_level(&self) -> i64 {
        self.levels.first().map_or(0, |l| l.level)
    }

    pub fn level(&self, t: i64) -> Option<&LevelData> {
        let lo = self.bottom_level();
        if t < lo {
            return None;
        }
        self.levels.get((t - lo) as usize)
    }

    /// Highest computed level whose sublevel set is not acyclic, or -1.
    pub fn last_reduced_level(&self) -> i64 {
        self.levels
            .iter()
            .filter(|l| !reduced_is_zero(l))
            .map(|l| l.level)
            .max()
            .unwrap_or(-1)
    }

    /// `Σ_q (-1)^q rank H^q(S_t)`, using the top group above the computed range
    /// and 0 below the bottom.
    pub fn euler_at(&self, t: i64) -> i64 {
        if t < self.bottom_level() || self.levels.is_empty() {
            return 0;
        }
        let l = self.level(t).unwrap_or_else(|| self.levels.last().unwrap());
        l.groups.euler()
    }

    /// `U : H^q(S_{t+1}) → H^q(S_t)` on free parts. Degree 0 of an
    /// absolute tower uses component indicators; other degrees use the
    /// dense basis and give `None` above the size limit.
    pub fn u_map(&self, q: usize, t: i64) -> Result<Option<IntMatrix>> {
        if q == 0 && self.rel.is_none() {
            let lo = self.complex.component_labels(t);
            let hi = self.complex.component_labels(t + 1);
            let roots_lo: Vec<usize> = (0..lo.len()).filter(|&i| lo[i] == i).collect();
            let roots_hi: Vec<usize> = (0..hi.len()).filter(|&i| hi[i] == i).collect();
            let m = roots_lo
                .iter()
                .map(|&r| roots_hi.iter().map(|&h| i128::from(hi[r] == h)).collect())
                .collect();
            return Ok(Some(m));
        }
        self.complex.restriction_map(q, t + 1, t, self.rel.as_ref())
    }
}

fn reduced_is_zero(l: &LevelData) -> bool {
    l.components <= 1 && l.groups.degrees.iter().skip(1).all(GroupData::is_zero)
}

/// Exact tower of a class of a negative definite graph, rebased at the
/// class minimiser.
pub fn exact_tower(lat: &Lattice, class_id: usize, opts: &TowerOptions) -> Result<Tower> {
    lat.form().require_negative_definite()?;
    if class_id >= lat.num_classes() {
        return Err(Error::ClassMismatch(format!("class id {class_id} out of range")));
    }
    let cm = lat.class_min(&lat.class_rep(class_id))?;
    let c = opts.stable_levels.max(1) as i64;
    let mut top = opts.levels.unwrap_or(c);
    let mut previous: Option<(CubeComplex, Vec<LevelData>, i64)> = None;
    loop {
        let Some(complex) = cubes::build_exact_capped(lat, &cm.k, top, opts.max_points)? else {
            let Some((complex, levels, last)) = previous else {
                return Err(Error::Precondition(format!(
                    "S_{top} has more than {} points",
                    opts.max_points
                )));
            };
            let status = Stabilization::NotStabilized {
                reason: format!("point limit reached above level {last}"),
            };
            return Ok(exact_result(lat, class_id, opts, &cm, complex, levels, status));
        };
        let levels = compute_levels(&complex, None, 0..=top);
        let status = if let Some(l) = opts.levels {
            Some(Stabilization::Override { levels: l })
        } else if levels.len() >= c as usize && levels.iter().rev().take(c as usize).all(reduced_is_zero) {
            Some(Stabilization::Heuristic {
                stable_levels: c as usize,
            })
        } else if top >= opts.max_level {
            Some(Stabilization::NotStabilized {
                reason: format!("reduced part still nonzero near level {top}"),
            })
        } else {
            None
        };
        if let Some(status) = status {
            return Ok(exact_result(lat, class_id, opts, &cm, complex, levels, status));
        }
        previous = Some((complex, levels, top));
        top = (top + (top / 2).max(1)).min(opts.max_level);
    }
}

fn exact_result(
    lat: &Lattice,
    class_id: usize,
    opts: &TowerOptions,
    cm: &ClassMin,
    complex: CubeComplex,
    levels: Vec<LevelData>,
    status: Stabilization,
) -> Tower {
    Tower {
        class_id,
        base: cm.k.clone(),
        base_weight: cm.weight,
        shift: opts.normalization.shift(lat),
        normalization: opts.normalization,
        mode: Mode::Exact,
        levels,
        status,
        complex,
        rel: None,
        box_bounds: None,
        min: Some(cm.clone()),
    }
}

/// Box around the critical point of `χ_k`, of the given radius.
pub fn centred_box(lat: &Lattice, k: &CharElement, radius: i64) -> BoxBounds {
    // χ_k is critical at l = M⁻¹a/2, the negative half of the E-coordinates
    let e = lat.form().dual_to_lattice(&k.a);
    let centre: Vec<i64> = e
        .iter()
        .map(|x| (-*x / Rational::from(2)).round().to_integer() as i64)
        .collect();
    BoxBounds {
        lo: centre.iter().map(|c| c - radius).collect(),
        hi: centre.iter().map(|c| c + radius).collect(),
    }
}

type BoxSignature = (Vec<(i64, CohomologyGroup)>, CohomologyGroup);

fn box_signature(levels: &[LevelData]) -> BoxSignature {
    let (tail, body) = levels.split_last().expect("nonempty box");
    (
        body.iter()
            .filter(|l| !l.groups.is_zero())
            .map(|l| (l.level, l.groups.clone()))
            .collect(),
        tail.groups.clone(),
    )
}

fn box_levels(lat: &Lattice, k: &CharElement, radius: i64) -> Result<(CubeComplex, Subcomplex, BoxBounds, Vec<LevelData>)> {
    let bounds = centred_box(lat, k, radius);
    let complex = cubes::build_box(lat, k, &bounds)?;
    let rel = Subcomplex::box_boundary(&complex, &bounds);
    let lo = complex.min_weight().unwrap_or(0);
    let hi = complex.max_weight().unwrap_or(0);
    let levels = compute_levels(&complex, Some(&rel), lo..=hi);
    Ok((complex, rel, bounds, levels))
}

/// Box-mode tower for a non-degenerate graph, based at the class
/// representative. Stabilised when three radii two apart agree.
pub fn box_tower(lat: &Lattice, class_id: usize, opts: &TowerOptions) -> Result<Tower> {
    lat.form().require_nondegenerate()?;
    if class_id >= lat.num_classes() {
        return Err(Error::ClassMismatch(format!("class id {class_id} out of range")));
    }
    let k = lat.class_rep(class_id);
    let build = |complex: CubeComplex, rel, bounds, levels, status| Tower {
        class_id,
        base: k.clone(),
        base_weight: lat.weight(&k),
        shift: opts.normalization.shift(lat),
        normalization: opts.normalization,
        mode: Mode::Box,
        levels,
        status,
        complex,
        rel: Some(rel),
        box_bounds: Some(bounds),
        min: None,
    };
    if let Some(r) = opts.box_radius {
        let (c, rel, b, levels) = box_levels(lat, &k, r)?;
        return Ok(build(c, rel, b, levels, Stabilization::FixedBox { radius: r }));
    }
    let mut radius = 2;
    let mut runs = vec![box_levels(lat, &k, radius)?, box_levels(lat, &k, radius + 2)?];
    loop {
        let next = box_levels(lat, &k, radius + 4)?;
        let sigs: Vec<BoxSignature> = runs.iter().chain(std::iter::once(&next)).map(|r| box_signature(&r.3)).collect();
        if sigs[0] == sigs[1] && sigs[1] == sigs[2] {
            let (c, rel, b, levels) = runs.swap_remove(0);
            return Ok(build(c, rel, b, levels, Stabilization::BoxStabilized { radius }));
        }
        if radius + 4 >= opts.max_box_radius {
            let r = radius + 4;
            let (c, rel, b, levels) = next;
            return Ok(build(
                c,
                rel,
                b,
                levels,
                Stabilization::NotStabilized {
                    reason: format!("box data still changing at radius {r}"),
                },
            ));
        }
        runs.remove(0);
        runs.push(next);
        radius += 2;
    }
}

/// Tower in the mode the graph allows.
pub fn tower(lat: &Lattice, class_id: usize, opts: &TowerOptions) -> Result<Tower> {
    match lat.definiteness() {
        Definiteness::NegativeDefinite => exact_tower(lat, class_id, opts),
        Definiteness::NonDegenerateOther => box_tower(lat, class_id, opts),
        Definiteness::Degenerate => Err(Error::DegenerateForm),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub level: i64,
    pub weight: Rational,
    pub degree: Rational,
    pub rank: usize,
    pub torsion: Vec<i128>,
    pub reduced_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePart {
    pub q: usize,
    /// Computed levels with nonzero groups.
    pub entries: Vec<LevelEntry>,
    /// Group at the top computed level, repeated above it.
    pub tail: GroupData,
    /// Degree where the `T⁺` summand starts, if this degree carries it.
    pub tower_start: Option<Rational>,
    pub reduced_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedZUModule {
    pub class_id: usize,
    pub representative: CharElement,
    pub normalization: Normalization,
    pub mode: Mode,
    /// `d[k]`, the start of the `T⁺` summand in degree 0.
    pub d: Option<Rational>,
    pub parts: Vec<DegreePart>,
    pub status: Stabilization,
}

/// `T⁺_d` descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TPlus {
    pub start_degree: Rational,
}

/// Start level of the tower generated by the rank-one tail in degree `q`,
/// found by restricting the tail generator downwards.
fn detect_tower(t: &Tower, q: usize) -> Result<Option<i64>> {
    let top = t.top_level();
    let rel = t.rel.as_ref();
    let Some(hi) = t.complex.free_basis(q, top, rel) else {
        return Err(Error::Precondition(format!("degree {q} exceeds the dense basis limit")));
    };
    if hi.rank() != 1 {
        return Ok(None);
    }
    let mut start = top;
    for lv in (t.bottom_level()..top).rev() {
        let lo = t
            .complex
            .free_basis(q, lv, rel)
            .ok_or_else(|| Error::Precondition(format!("degree {q} exceeds the dense basis limit")))?;
        let m = cubes::restrict_between(&hi, &lo);
        let col: Vec<i128> = m.iter().map(|r| r[0]).collect();
        if col.iter().all(|&x| x == 0) {
            break;
        }
        let g = col.iter().fold(0i128, |a, &b| num_integer::gcd(a, b));
        if g != 1 {
            return Err(Error::NonSplitTower(format!(
                "tail generator in degree {q} is divisible by {g} at level {lv}"
            )));
        }
        start = lv;
    }
    Ok(Some(start))
}

/// Graded module of a tower, with the `T⁺` summand split off.
pub fn assemble(t: &Tower) -> Result<GradedZUModule> {
    if t.levels.is_empty() {
        return Err(Error::InconsistentTower("no levels".into()));
    }
    let ndeg = t.levels.iter().map(|l| l.groups.degrees.len()).max().unwrap_or(1);
    if t.levels.iter().any(|l| l.groups.degrees.len() != ndeg) {
        return Err(Error::InconsistentTower("levels disagree on the top degree".into()));
    }
    let top = t.levels.last().unwrap();
    let mut parts = Vec::with_capacity(ndeg);
    let mut d = None;
    for q in 0..ndeg {
        let tail = top.groups.get(q);
        let start = match t.mode {
            Mode::Exact if q == 0 => {
                // constants generate the tower from the minimum level on
                if t.levels[0].groups.get(0).rank == 0 {
                    return Err(Error::InconsistentTower("minimum level is empty".into()));
                }
                if tail.rank != 1 && t.status.is_stable() {
                    return Err(Error::NonSplitTower(format!("degree 0 tail has rank {}", tail.rank)));
                }
                Some(t.bottom_level())
            }
            Mode::Exact => None,
            Mode::Box if tail.rank == 1 => detect_tower(t, q)?,
            Mode::Box => None,
        };
        let mut entries = Vec::new();
        let mut reduced_rank = 0;
        for l in &t.levels {
            let g = l.groups.get(q);
            let in_tower = start.is_some_and(|s| l.level >= s);
            let red = match (t.mode, q) {
                (Mode::Exact, 0) => l.components.saturating_sub(1),
                _ => g.rank - usize::from(in_tower),
            };
            reduced_rank += red;
            if !g.is_zero() {
                entries.push(LevelEntry {
                    level: l.level,
                    weight: t.weight(l.level),
                    degree: t.degree(l.level),
                    rank: g.rank,
                    torsion: g.torsion,
                    reduced_rank: red,
                });
            }
        }
        let tower_start = start.map(|s| t.degree(s));
        if q == 0 {
            d = tower_start;
        }
        if t.mode == Mode::Exact && q == 0 {
            if let Some(cm) = &t.min {
                let want = cm.d + t.shift * Rational::from(2);
                if tower_start != Some(want) {
                    return Err(Error::InconsistentTower(format!(
                        "tower starts at {:?}, class minimum gives {want}",
                        tower_start
                    )));
                }
            }
        }
        parts.push(DegreePart {
            q,
            entries,
            tail,
            tower_start,
            reduced_rank,
        });
    }
    Ok(GradedZUModule {
        class_id: t.class_id,
        representative: t.base.clone(),
        normalization: t.normalization,
        mode: t.mode,
        d,
        parts,
        status: t.status.clone(),
    })
}

impl GradedZUModule {
    pub fn part(&self, q: usize) -> Option<&DegreePart> {
        self.parts.get(q)
    }

    /// `Σ_t rank ℍ^q_red` at degree `q`.
    pub fn reduced_rank(&self, q: usize) -> usize {
        self.part(q).map_or(0, |p| p.reduced_rank)
    }

    /// Nonzero reduced pieces `(q, degree, rank)`.
    pub fn reduced(&self) -> Vec<(usize, Rational, usize)> {
        self.parts
            .iter()
            .flat_map(|p| {
                p.entries
                    .iter()
                    .filter(|e| e.reduced_rank > 0)
                    .map(move |e| (p.q, e.degree, e.reduced_rank))
            })
            .collect()
    }

    /// Torsion anywhere in the module.
    pub fn has_torsion(&self) -> bool {
        self.parts.iter().any(|p| p.entries.iter().any(|e| !e.torsion.is_empty()))
    }
}

/// `ℍ⁰ = T⁺_{d} ⊕ ℍ⁰_red`: the tower and the reduced pieces
/// `(degree, rank)`.
pub fn decompose_h0(m: &GradedZUModule) -> Result<(TPlus, Vec<(Rational, usize)>)> {
    let p = m.part(0).ok_or_else(|| Error::InconsistentTower("no degree 0".into()))?;
    let start = p
        .tower_start
        .ok_or_else(|| Error::NonSplitTower("degree 0 has no T⁺ summand".into()))?;
    let reduced = p
        .entries
        .iter()
        .filter(|e| e.reduced_rank > 0)
        .map(|e| (e.degree, e.reduced_rank))
        .collect();
    Ok((TPlus { start_degree: start }, reduced))
}

/// `eu = -d/2 + Σ_q (-1)^q rank ℍ^q_red`.
pub fn euler_characteristic(m: &GradedZUModule) -> Result<Rational> {
    let d = m
        .d
        .ok_or_else(|| Error::Precondition("d[k] is undefined for this module".into()))?;
    let mut eu = -d / Rational::from(2);
    for p in &m.parts {
        let r = Rational::from(p.reduced_rank as i128);
        if p.q % 2 == 0 {
            eu += r;
        } else {
            eu -= r;
        }
    }
    Ok(eu)
}

/// Module of one class in the mode the graph allows.
pub fn module(lat: &Lattice, class_id: usize, opts: &TowerOptions) -> Result<GradedZUModule> {
    assemble(&tower(lat, class_id, opts)?)
}

/// Seiberg–Witten invariant of `-M(Γ)` at the class, read as `eu`.
pub fn sw_invariant(lat: &Lattice, class_id: usize, opts: &TowerOptions) -> Result<Rational> {
    lat.form().require_negative_definite()?;
    euler_characteristic(&module(lat, class_id, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlumbingGraph;

    fn lat(text: &str) -> Lattice {
        Lattice::new(&PlumbingGraph::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn minus_two_vertex() {
        let l = lat(crate::fixtures::MINUS_TWO);
        let k0 = CharElement::new(vec![0]);
        let id = l.class_id(&k0).unwrap();
        let m = module(&l, id, &TowerOptions::default()).unwrap();
        let (tp, red) = decompose_h0(&m).unwrap();
        assert_eq!(tp.start_degree, Rational::new(-1, 4));
        assert!(red.is_empty());
        assert_eq!(euler_characteristic(&m).unwrap(), Rational::new(1, 8));
        // hand enumeration on the line: S_t = {|l| ≤ ..} is an interval
        let t = exact_tower(&l, id, &TowerOptions::default()).unwrap();
        for lv in &t.levels {
            assert_eq!(lv.groups.get(0).rank, 1);
            assert!(lv.groups.degrees.iter().skip(1).all(GroupData::is_zero));
        }
    }

    #[test]
    fn minus_one_vertex() {
        let l = lat(crate::fixtures::MINUS_ONE);
        let m = module(&l, 0, &TowerOptions::default()).unwrap();
        assert_eq!(m.d, Some(Rational::from(0)));
        assert_eq!(m.reduced_rank(0), 0);
        let t = exact_tower(&l, 0, &TowerOptions::default()).unwrap();
        for lv in t.bottom_level()..t.top_level() {
            assert_eq!(t.u_map(0, lv).unwrap().unwrap(), vec![vec![1]]);
        }
    }

    #[test]
    fn plus_one_vertex_box() {
        let l = lat(crate::fixtures::PLUS_ONE);
        let m = module(&l, 0, &TowerOptions::default()).unwrap();
        assert!(matches!(m.status, Stabilization::BoxStabilized { radius } if radius <= 8));
        assert_eq!(m.parts[0].entries.len(), 0);
        assert_eq!(m.parts[1].tower_start, Some(Rational::new(-1, 2)));
        assert_eq!(m.parts[1].reduced_rank, 0);
    }

    #[test]
    fn empty_graph() {
        let l = Lattice::new(&PlumbingGraph::empty()).unwrap();
        let m = module(&l, 0, &TowerOptions::default()).unwrap();
        assert_eq!(m.d, Some(Rational::from(0)));
        assert_eq!(euler_characteristic(&m).unwrap(), Rational::from(0));
    }

    #[test]
    fn e8_and_example() {
        let opts = TowerOptions {
            normalization: Normalization::Canonical,
            ..Default::default()
        };
        let e8 = lat(crate::fixtures::E8);
        let m = module(&e8, 0, &opts).unwrap();
        assert_eq!(m.d, Some(Rational::from(0)));
        assert!(m.reduced().is_empty());
        assert_eq!(euler_characteristic(&m).unwrap(), Rational::from(0));
        let g = lat(crate::fixtures::E8_TAIL);
        let m = module(&g, 0, &opts).unwrap();
        assert_eq!(m.d, Some(Rational::from(0)));
        assert_eq!(m.reduced(), vec![(0, Rational::from(0), 1)]);
        assert_eq!(euler_characteristic(&m).unwrap(), Rational::from(1));
    }
}
