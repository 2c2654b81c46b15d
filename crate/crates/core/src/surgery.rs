//! The surgery triple `(Γ⁺, Γ, Γ∖j0)`, relative lattice cohomology, bad
//! vertices and the vanishing statement.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain_ops::{CharCube, SurgeryOps};
use crate::charlat::{restrict, CharElement, Lattice};
use crate::cubes::{self, CohomologyGroup, GroupData, Subcomplex};
use crate::error::{Error, Result};
use crate::graph::{Definiteness, PlumbingGraph};
use crate::zu_module::{self, compute_levels, exact_tower, GradedZUModule, LevelData, Normalization, Stabilization, Tower, TowerOptions};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Plus,
    Gamma,
    Minus,
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Role::Plus => "gamma_plus",
            Role::Gamma => "gamma",
            Role::Minus => "gamma_minus",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub role: Role,
    pub graph: PlumbingGraph,
    pub definiteness: Definiteness,
    /// `det(-M)`; 1 for the empty graph.
    pub determinant: i128,
}

impl Member {
    fn new(role: Role, graph: PlumbingGraph) -> Self {
        let form = graph.intersection_form();
        Member {
            role,
            definiteness: form.classify(),
            determinant: form.determinant(),
            graph,
        }
    }

    /// Whether the cohomology of this member can be computed: exactly when
    /// negative definite, in box mode for a single indefinite vertex.
    pub fn computable(&self) -> bool {
        match self.definiteness {
            Definiteness::NegativeDefinite => true,
            Definiteness::NonDegenerateOther => self.graph.len() == 1,
            Definiteness::Degenerate => false,
        }
    }
}

/// Determinant facts relating the three members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantCheck {
    /// `det Γ⁺ = det Γ - det Γ∖j0` (expansion along `j0`).
    pub det_identity: bool,
    /// For negative definite Γ: Γ⁺ negative definite iff `det Γ > det Γ∖j0`.
    pub equivalence: Option<bool>,
    /// `(E*_{j0})²` in Γ.
    pub e_star_square: Option<Rational>,
    /// For negative definite Γ⁺: `-(E*_{j0})² = det(Γ∖j0)/det(Γ)` and is not an integer.
    pub e_star_check: Option<bool>,
}

impl DeterminantCheck {
    pub fn passed(&self) -> bool {
        self.det_identity && self.equivalence != Some(false) && self.e_star_check != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryTriple {
    pub j0: usize,
    pub plus: Member,
    pub gamma: Member,
    pub minus: Member,
    pub determinants: DeterminantCheck,
}

impl SurgeryTriple {
    pub fn members(&self) -> [&Member; 3] {
        [&self.plus, &self.gamma, &self.minus]
    }
}

/// `(E*_j)²` for a non-degenerate graph.
pub fn dual_square_of_vertex(g: &PlumbingGraph, j: usize) -> Result<Rational> {
    let form = g.intersection_form();
    form.require_nondegenerate()?;
    let mut e = vec![0i64; g.len()];
    e[j] = 1;
    Ok(form.dual_square(&e))
}

pub fn make_triple(g: &PlumbingGraph, j0: usize) -> Result<SurgeryTriple> {
    g.intersection_form().require_nondegenerate()?;
    let gamma = Member::new(Role::Gamma, g.clone());
    let plus = Member::new(Role::Plus, g.bump_decoration(j0)?);
    let minus = Member::new(Role::Minus, g.delete_vertex(j0)?);
    let neg = |m: &Member| m.definiteness == Definiteness::NegativeDefinite;
    let e2 = dual_square_of_vertex(g, j0)?;
    let equivalence = neg(&gamma).then(|| neg(&plus) == (gamma.determinant > minus.determinant));
    let e_star_check = (neg(&gamma) && neg(&plus)).then(|| {
        let want = Rational::new(minus.determinant, gamma.determinant);
        -e2 == want && !e2.is_integer()
    });
    let determinants = DeterminantCheck {
        det_identity: plus.determinant == gamma.determinant - minus.determinant,
        equivalence,
        e_star_square: Some(e2),
        e_star_check,
    };
    Ok(SurgeryTriple {
        j0,
        plus,
        gamma,
        minus,
        determinants,
    })
}

/// Graded modules of every class, ordered by class id.
pub fn full_cohomology(g: &PlumbingGraph, opts: &TowerOptions) -> Result<Vec<GradedZUModule>> {
    let lat = Lattice::new(g)?;
    (0..lat.num_classes())
        .into_par_iter()
        .map(|c| zu_module::module(&lat, c, opts))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub class_id: usize,
    pub representative: Vec<i64>,
    pub d: Option<Rational>,
    /// `rank ℍ^q_red` for `q = 0, 1, …`.
    pub reduced: Vec<usize>,
    pub eu: Option<Rational>,
    pub status: Stabilization,
}

impl ClassSummary {
    pub fn of(m: &GradedZUModule) -> Self {
        ClassSummary {
            class_id: m.class_id,
            representative: m.representative.a.clone(),
            d: m.d,
            reduced: m.parts.iter().map(|p| p.reduced_rank).collect(),
            eu: zu_module::euler_characteristic(m).ok(),
            status: m.status.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberReport {
    pub role: Role,
    pub graph: String,
    pub definiteness: Definiteness,
    pub determinant: i128,
    pub included: bool,
    pub note: Option<String>,
    pub classes: Vec<ClassSummary>,
}

impl MemberReport {
    /// `Σ_classes rank ℍ^q_red`.
    pub fn reduced_total(&self, q: usize) -> usize {
        self.classes.iter().map(|c| c.reduced.get(q).copied().unwrap_or(0)).sum()
    }

    fn max_degree(&self) -> usize {
        self.classes.iter().map(|c| c.reduced.len()).max().unwrap_or(0)
    }

    fn exact_and_stable(&self) -> bool {
        self.included
            && self.definiteness == Definiteness::NegativeDefinite
            && self.classes.iter().all(|c| c.status.is_stable())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingLevel {
    Pass,
    Info,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub level: FindingLevel,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryReport {
    pub j0: usize,
    pub determinants: DeterminantCheck,
    pub members: Vec<MemberReport>,
    pub findings: Vec<Finding>,
}

impl SurgeryReport {
    pub fn member(&self, role: Role) -> &MemberReport {
        self.members.iter().find(|m| m.role == role).expect("all roles present")
    }

    pub fn failed(&self) -> bool {
        self.findings.iter().any(|f| f.level == FindingLevel::Fail)
    }
}

fn member_report(m: &Member, opts: &TowerOptions) -> MemberReport {
    let mut out = MemberReport {
        role: m.role,
        graph: m.graph.serialize(),
        definiteness: m.definiteness,
        determinant: m.determinant,
        included: false,
        note: None,
        classes: Vec::new(),
    };
    if !m.computable() {
        out.note = Some(match m.definiteness {
            Definiteness::Degenerate => "excluded: degenerate".into(),
            _ => "excluded: indefinite with more than one vertex".into(),
        });
        return out;
    }
    match full_cohomology(&m.graph, opts) {
        Ok(mods) => {
            out.included = true;
            out.classes = mods.iter().map(ClassSummary::of).collect();
        }
        Err(e) => out.note = Some(format!("excluded: {e}")),
    }
    out
}

/// Rank bookkeeping that any exact sequence
/// `ℍ^q(Γ⁺) → ℍ^q(Γ) → ℍ^q(Γ∖j0) → ℍ^{q+1}(Γ⁺)` with `C⁰|𝕥 = 0` must satisfy.
/// In degrees `q ≥ 1` all groups are finite and reduced; the image of `C⁰`
/// has rank `c0` with `0 ≤ c0 ≤ rank ℍ⁰_red(Γ∖j0)`.
fn exactness_findings(plus: &MemberReport, gamma: &MemberReport, minus: &MemberReport) -> Vec<Finding> {
    let mut out = Vec::new();
    if ![plus, gamma, minus].iter().all(|m| m.exact_and_stable()) {
        let missing: Vec<String> = [plus, gamma, minus]
            .iter()
            .filter(|m| !m.exact_and_stable())
            .map(|m| m.role.to_string())
            .collect();
        out.push(Finding {
            level: FindingLevel::Info,
            message: format!("rank bookkeeping inconclusive: {} not exact and stabilised", missing.join(", ")),
        });
        return out;
    }
    let top = plus.max_degree().max(gamma.max_degree()).max(minus.max_degree()) + 1;
    let r = |m: &MemberReport, q: usize| m.reduced_total(q) as i64;
    let mut push = |ok: bool, message: String| {
        out.push(Finding {
            level: if ok { FindingLevel::Pass } else { FindingLevel::Fail },
            message,
        })
    };
    for q in 1..top {
        let (p, g, m) = (r(plus, q), r(gamma, q), r(minus, q));
        push(g <= p + m, format!("at H^{q}(gamma): {g} <= {p} + {m}"));
        let p1 = r(plus, q + 1);
        push(m <= g + p1, format!("at H^{q}(gamma_minus): {m} <= {g} + {p1}"));
        let prev = if q == 1 { r(minus, 0) } else { r(minus, q - 1) };
        push(p <= prev + g, format!("at H^{q}(gamma_plus): {p} <= {prev} + {g}"));
    }
    let c0: i64 = (1..top)
        .map(|q| {
            let v = r(plus, q) - r(gamma, q) + r(minus, q);
            if q % 2 == 1 {
                v
            } else {
                -v
            }
        })
        .sum();
    let bound = r(minus, 0);
    push(
        (0..=bound).contains(&c0),
        format!("rank of im C^0 is {c0}, must lie in [0, {bound}] since C^0 kills the tower"),
    );
    out
}

/// All three cohomologies with per-graph tables and exactness bookkeeping.
pub fn surgery_report(t: &SurgeryTriple, opts: &TowerOptions) -> SurgeryReport {
    let members: Vec<MemberReport> = t.members().par_iter().map(|m| member_report(m, opts)).collect();
    let mut findings = vec![Finding {
        level: if t.determinants.passed() { FindingLevel::Pass } else { FindingLevel::Fail },
        message: format!(
            "determinants {} = {} - {}; definiteness and E* checks {:?}/{:?}",
            t.plus.determinant, t.gamma.determinant, t.minus.determinant, t.determinants.equivalence, t.determinants.e_star_check
        ),
    }];
    for m in &members {
        if let Some(note) = &m.note {
            findings.push(Finding {
                level: FindingLevel::Info,
                message: format!("{}: {note}", m.role),
            });
        }
    }
    findings.extend(exactness_findings(&members[0], &members[1], &members[2]));
    SurgeryReport {
        j0: t.j0,
        determinants: t.determinants.clone(),
        members,
        findings,
    }
}

/// `χ(l) = -(l, l + K)/2` for `l` in E-coordinates.
pub fn chi_canonical(g: &PlumbingGraph, l: &[i64]) -> i64 {
    let m = g.matrix();
    let ll: i64 = (0..l.len()).map(|i| (0..l.len()).map(|j| l[i] * m[i][j] * l[j]).sum::<i64>()).sum();
    let lk: i64 = l.iter().zip(g.decorations()).map(|(x, e)| x * (e + 2)).sum();
    (lk - ll) / 2
}

/// Minimal cycle `Z_min` by the computation sequence: start from `Σ E_j`
/// and add `E_j` while `(Z, E_j) > 0`.
pub fn minimal_cycle(g: &PlumbingGraph) -> Result<Vec<i64>> {
    g.intersection_form().require_negative_definite()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = g.matrix();
    let s = g.len();
    let mut z = vec![1i64; s];
    for _ in 0..1_000_000 {
        let bad = (0..s).find(|&j| (0..s).map(|i| z[i] * m[i][j]).sum::<i64>() > 0);
        match bad {
            Some(j) => z[j] += 1,
            None => return Ok(z),
        }
    }
    Err(Error::Overflow("minimal_cycle"))
}

/// Rationality via `χ(Z_min) = 1`.
pub fn is_rational(g: &PlumbingGraph) -> Result<bool> {
    if g.is_empty() {
        return Ok(true);
    }
    let z = minimal_cycle(g)?;
    Ok(chi_canonical(g, &z) == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadVertices {
    pub n: usize,
    pub witness: Vec<usize>,
    pub decrement: i64,
    /// The count agreed when the decrement was doubled.
    pub stable: bool,
}

fn subsets(s: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, s: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for j in start..s {
            cur.push(j);
            go(j + 1, s, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, s, n, &mut Vec::new(), &mut out);
    out
}

fn min_bad(g: &PlumbingGraph, decrement: i64) -> Result<(usize, Vec<usize>)> {
    for n in 0..=g.len() {
        for set in subsets(g.len(), n) {
            let mut h = g.clone();
            for &j in &set {
                h = h.with_decoration_delta(j, -decrement)?;
            }
            if is_rational(&h)? {
                return Ok((n, set));
            }
        }
    }
    unreachable!("a graph with every decoration lowered far enough is rational")
}

/// Smallest vertex set whose decorations can be lowered to make the graph
/// rational. Disconnected graphs are handled component by component.
pub fn bad_vertex_count(g: &PlumbingGraph) -> Result<BadVertices> {
    g.intersection_form().require_negative_definite()?;
    let mut total = BadVertices {
        n: 0,
        witness: Vec::new(),
        decrement: 0,
        stable: true,
    };
    for comp in g.components() {
        let h = g.induced(&comp);
        let max_val = (0..h.len()).map(|j| h.valency(j)).max().unwrap_or(0).max(1) as i64;
        let max_e = h.decorations().iter().map(|e| e.abs()).max().unwrap_or(1).max(1);
        let d = max_val * max_e * h.len() as i64 + 1;
        let (n, set) = min_bad(&h, d)?;
        let (n2, _) = min_bad(&h, 2 * d)?;
        total.n += n;
        total.witness.extend(set.iter().map(|&j| comp[j]));
        total.decrement = total.decrement.max(d);
        total.stable &= n == n2;
    }
    total.witness.sort_unstable();
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub bad: BadVertices,
    pub classes: Vec<ClassSummary>,
    /// `(class, q, rank)` with `q ≥ n` and nonzero reduced rank.
    pub violations: Vec<(usize, usize, usize)>,
    pub all_stable: bool,
    pub passed: bool,
}

/// `ℍ^q_red = 0` for `q ≥` the number of bad vertices, on every class.
pub fn vanishing_check(g: &PlumbingGraph, opts: &TowerOptions) -> Result<VanishingReport> {
    let bad = bad_vertex_count(g)?;
    let classes: Vec<ClassSummary> = full_cohomology(g, opts)?.iter().map(ClassSummary::of).collect();
    let violations: Vec<(usize, usize, usize)> = classes
        .iter()
        .flat_map(|c| {
            c.reduced
                .iter()
                .enumerate()
                .filter(|&(q, &r)| q >= bad.n && r > 0)
                .map(|(q, &r)| (c.class_id, q, r))
                .collect::<Vec<_>>()
        })
        .collect();
    let all_stable = classes.iter().all(|c| c.status.is_stable());
    Ok(VanishingReport {
        passed: violations.is_empty(),
        bad,
        classes,
        violations,
        all_stable,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeEntry {
    pub level: i64,
    pub degree: Rational,
    pub rank: usize,
    pub torsion: Vec<i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeDegree {
    pub q: usize,
    pub entries: Vec<RelativeEntry>,
    pub rank: usize,
}

/// `ℍ*_rel(Γ, j0, kbar)`, computed as `⊕_t H^*(S_t, S_t ∩ H)` where `H` is
/// the image of `B_rel`, the affine slice `kbar + 2·span{E_j : j ≠ j0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeCohomology {
    pub j0: usize,
    pub kbar: CharElement,
    pub r0: Rational,
    pub class_id: usize,
    pub sub_class_id: usize,
    /// Class minimiser of `[kbar]`; level `t` has weight `q(base) + t`.
    pub base: CharElement,
    pub base_weight: Rational,
    /// Class minimiser of `[R(kbar)]` in `Γ∖j0`.
    pub sub_min: CharElement,
    /// `E_{j0}`-coordinate of the slice, relative to `base`.
    pub slice: i64,
    pub n: i64,
    pub degrees: Vec<RelativeDegree>,
    pub total_rank: usize,
    pub eu: i64,
    pub status: Stabilization,
}

impl RelativeCohomology {
    pub fn rank(&self, q: usize) -> usize {
        self.degrees.get(q).map_or(0, |d| d.rank)
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|d| d.entries.iter().any(|e| !e.torsion.is_empty()))
    }
}

struct RelSetup {
    class_id: usize,
    sub_class_id: usize,
    base: CharElement,
    base_weight: Rational,
    sub_min: CharElement,
    slice: i64,
    n: i64,
    r0: Rational,
}

/// The two absolute towers behind a relative computation.
struct RelTowers {
    gamma: Arc<Tower>,
    minus: Arc<Tower>,
    /// Pair groups vanish above this level.
    top: i64,
    status: Stabilization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeEuler {
    pub r0: Rational,
    pub n: i64,
    pub top: i64,
    pub eu: i64,
    pub status: Stabilization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuRelReport {
    pub relative: RelativeCohomology,
    pub eu_gamma: Rational,
    pub eu_minus: Rational,
    pub d_gamma: Rational,
    pub d_minus: Rational,
    pub e_star_square: Rational,
    /// `(1 + r0² (E*_{j0})²)/8`.
    pub correction: Rational,
    /// `eu(Γ,[kbar]) - eu(Γ∖j0,[R kbar]) - correction`.
    pub rhs_difference: Rational,
    /// `eu(Γ,[kbar]) + q(kbar) - eu(Γ∖j0,[R kbar]) - q(R kbar)`.
    pub rhs_weights: Rational,
    /// `n + d[kbar]/2` and `d[R kbar]/2 - correction`.
    pub n_lhs: Rational,
    pub n_rhs: Rational,
    /// `eu(ℍ*_rel)` from the absolute towers alone.
    pub eu_additive: i64,
    pub passed: bool,
}

/// Relative computations for a fixed `(Γ, j0)`. Absolute towers are
/// computed once per class (with absolute weights) and shared.
pub struct RelativeContext {
    ops: SurgeryOps,
    opts: TowerOptions,
    towers: Mutex<HashMap<(bool, usize), Arc<Tower>>>,
}

impl RelativeContext {
    pub fn new(g: &PlumbingGraph, j0: usize, opts: &TowerOptions) -> Result<Self> {
        g.intersection_form().require_negative_definite()?;
        Ok(RelativeContext {
            ops: SurgeryOps::new(g, j0)?,
            opts: TowerOptions {
                normalization: Normalization::Absolute,
                ..opts.clone()
            },
            towers: Mutex::new(HashMap::new()),
        })
    }

    pub fn j0(&self) -> usize {
        self.ops.j0
    }

    pub fn lattice(&self) -> &Lattice {
        self.ops.full.lattice()
    }

    pub fn sub_lattice(&self) -> &Lattice {
        self.ops.sub.lattice()
    }

    fn tower(&self, sub: bool, class_id: usize) -> Result<Arc<Tower>> {
        if let Some(t) = self.towers.lock().unwrap().get(&(sub, class_id)) {
            return Ok(t.clone());
        }
        let lat = if sub { self.sub_lattice() } else { self.lattice() };
        let opts = TowerOptions {
            levels: None,
            ..self.opts.clone()
        };
        let t = Arc::new(exact_tower(lat, class_id, &opts)?);
        self.towers.lock().unwrap().insert((sub, class_id), t.clone());
        Ok(t)
    }

    fn setup(&self, kbar: &CharElement) -> Result<RelSetup> {
        let j0 = self.ops.j0;
        let lat = self.lattice();
        lat.check_char(kbar)?;
        let class_id = lat.class_id(kbar)?;
        let cm = lat.class_min(kbar)?;
        let lb = lat
            .difference(&cm.k, kbar)
            .ok_or_else(|| Error::ClassMismatch("kbar is not in the class of its minimiser".into()))?;
        let r0 = self.ops.r0(kbar)?;
        let sub_lat = self.sub_lattice();
        let rk = restrict(kbar, j0);
        let sub_class_id = sub_lat.class_id(&rk)?;
        let sub_min = sub_lat.class_min(&rk)?;
        let image = self.ops.b_rel(&CharCube::new(sub_min.k.a.clone(), 0), kbar)?;
        let image = CharElement::new(image.a);
        let offset = lat
            .difference(&cm.k, &image)
            .ok_or_else(|| Error::InconsistentTower("B_rel image left the class of kbar".into()))?;
        if offset[j0] != lb[j0] {
            return Err(Error::InconsistentTower("B_rel image is off the slice of kbar".into()));
        }
        let n = lat.weight(&image) - cm.weight;
        if !n.is_integer() || n < Rational::from(0) {
            return Err(Error::InconsistentTower(format!("n = {n} is not a non-negative integer")));
        }
        Ok(RelSetup {
            class_id,
            sub_class_id,
            base: cm.k,
            base_weight: cm.weight,
            sub_min: sub_min.k,
            slice: lb[j0],
            n: n.to_integer() as i64,
            r0,
        })
    }

    /// Above `top` both `S_t` and `S_t ∩ H ≅ S'_{t-n}` are nonempty and
    /// acyclic, so the pair groups vanish there.
    fn rel_towers(&self, st: &RelSetup) -> Result<RelTowers> {
        let (gamma, minus) = rayon::join(|| self.tower(false, st.class_id), || self.tower(true, st.sub_class_id));
        let (gamma, minus) = (gamma?, minus?);
        if gamma.base_weight != st.base_weight || minus.base_weight != self.sub_lattice().weight(&st.sub_min) {
            return Err(Error::InconsistentTower("tower bases disagree with the class minima".into()));
        }
        let bound = gamma.last_reduced_level().max(st.n + minus.last_reduced_level()).max(0);
        let (top, status) = match (self.opts.levels, &gamma.status, &minus.status) {
            (Some(l), _, _) => (l, Stabilization::Override { levels: l }),
            (None, Stabilization::NotStabilized { reason }, _) | (None, _, Stabilization::NotStabilized { reason }) => {
                (bound, Stabilization::NotStabilized { reason: reason.clone() })
            }
            (None, _, _) => (bound, Stabilization::Bounded { top: bound }),
        };
        Ok(RelTowers {
            gamma,
            minus,
            top,
            status,
        })
    }

    fn pair_levels(&self, st: &RelSetup, top: i64) -> Result<Vec<LevelData>> {
        let cap = self.opts.max_pair_points;
        let Some(complex) = cubes::build_exact_capped(self.lattice(), &st.base, top, cap)? else {
            return Err(Error::Precondition(format!(
                "pair complex up to level {top} has more than {cap} points"
            )));
        };
        let rel = Subcomplex::hyperplane(&complex, self.ops.j0, st.slice);
        Ok(compute_levels(&complex, Some(&rel), 0..=top))
    }

    /// Relative lattice cohomology as the pair cohomology
    /// `⊕_t H^*(S_t, S_t ∩ H)`. The level range comes from the absolute
    /// towers of `[kbar]` and `[R(kbar)]`.
    pub fn cohomology(&self, kbar: &CharElement) -> Result<RelativeCohomology> {
        let st = self.setup(kbar)?;
        let towers = self.rel_towers(&st)?;
        let levels = self.pair_levels(&st, towers.top)?;
        Ok(relative_from(self.ops.j0, kbar, st, levels, towers.status))
    }

    /// `eu(ℍ*_rel)` without building the pair complex:
    /// `Σ_t χ(S_t) - χ(S'_{t-n})`, the Euler characteristic of each pair
    /// being the difference of the absolute ones.
    pub fn euler(&self, kbar: &CharElement) -> Result<RelativeEuler> {
        let st = self.setup(kbar)?;
        let towers = self.rel_towers(&st)?;
        Ok(euler_from(&st, &towers))
    }

    /// The tower count, plus the pair cohomology when the pair complex
    /// stays under `max_pair_points`.
    pub fn both(&self, kbar: &CharElement) -> Result<(RelativeEuler, Option<RelativeCohomology>)> {
        let st = self.setup(kbar)?;
        let towers = self.rel_towers(&st)?;
        let euler = euler_from(&st, &towers);
        let direct = match self.pair_levels(&st, towers.top) {
            Ok(levels) => Some(relative_from(self.ops.j0, kbar, st, levels, towers.status)),
            Err(Error::Precondition(_)) => None,
            Err(e) => return Err(e),
        };
        Ok((euler, direct))
    }

    /// Pair cohomology `H^*(S_t, S_t ∩ H)` at a single level.
    pub fn level(&self, kbar: &CharElement, level: i64) -> Result<CohomologyGroup> {
        let st = self.setup(kbar)?;
        let complex = cubes::build_exact(self.lattice(), &st.base, level)?;
        let rel = Subcomplex::hyperplane(&complex, self.ops.j0, st.slice);
        Ok(complex.cohomology(level, Some(&rel)))
    }

    /// Both Euler characteristic formulas for `ℍ*_rel` and the `n`
    /// bookkeeping, with absolute weights throughout.
    pub fn eu_rel_check(&self, kbar: &CharElement) -> Result<EuRelReport> {
        let j0 = self.ops.j0;
        let st = self.setup(kbar)?;
        let towers = self.rel_towers(&st)?;
        let eu_additive = euler_from(&st, &towers).eu;
        let levels = self.pair_levels(&st, towers.top)?;
        let relative = relative_from(j0, kbar, st, levels, towers.status.clone());
        let mg = zu_module::assemble(&towers.gamma)?;
        let ms = zu_module::assemble(&towers.minus)?;
        let eu_gamma = zu_module::euler_characteristic(&mg)?;
        let eu_minus = zu_module::euler_characteristic(&ms)?;
        let missing = || Error::InconsistentTower("module without d".into());
        let d_gamma = mg.d.ok_or_else(missing)?;
        let d_minus = ms.d.ok_or_else(missing)?;
        let e_star_square = dual_square_of_vertex(self.ops.full.graph(), j0)?;
        let correction = (Rational::from(1) + relative.r0 * relative.r0 * e_star_square) / Rational::from(8);
        let rhs_difference = eu_gamma - eu_minus - correction;
        let rk = restrict(kbar, j0);
        let rhs_weights = eu_gamma + self.lattice().weight(kbar) - eu_minus - self.sub_lattice().weight(&rk);
        let two = Rational::from(2);
        let n_lhs = Rational::from(relative.n as i128) + d_gamma / two;
        let n_rhs = d_minus / two - correction;
        let eu = Rational::from(relative.eu as i128);
        let passed = relative.status.is_stable()
            && relative.n >= 0
            && eu_additive == relative.eu
            && eu == rhs_difference
            && eu == rhs_weights
            && n_lhs == n_rhs;
        Ok(EuRelReport {
            relative,
            eu_gamma,
            eu_minus,
            d_gamma,
            d_minus,
            e_star_square,
            correction,
            rhs_difference,
            rhs_weights,
            n_lhs,
            n_rhs,
            eu_additive,
            passed,
        })
    }
}

fn relative_from(j0: usize, kbar: &CharElement, st: RelSetup, levels: Vec<LevelData>, status: Stabilization) -> RelativeCohomology {
    let ndeg = levels.iter().map(|l| l.groups.degrees.len()).max().unwrap_or(1);
    let degree = |t: i64| (st.base_weight + Rational::from(t as i128)) * Rational::from(2);
    let degrees: Vec<RelativeDegree> = (0..ndeg)
        .map(|q| {
            let entries: Vec<RelativeEntry> = levels
                .iter()
                .filter_map(|l| {
                    let gd: GroupData = l.groups.get(q);
                    (!gd.is_zero()).then(|| RelativeEntry {
                        level: l.level,
                        degree: degree(l.level),
                        rank: gd.rank,
                        torsion: gd.torsion,
                    })
                })
                .collect();
            RelativeDegree {
                q,
                rank: entries.iter().map(|e| e.rank).sum(),
                entries,
            }
        })
        .collect();
    let total_rank = degrees.iter().map(|d| d.rank).sum();
    let eu = degrees
        .iter()
        .map(|d| if d.q % 2 == 0 { d.rank as i64 } else { -(d.rank as i64) })
        .sum();
    RelativeCohomology {
        j0,
        kbar: kbar.clone(),
        r0: st.r0,
        class_id: st.class_id,
        sub_class_id: st.sub_class_id,
        base: st.base,
        base_weight: st.base_weight,
        sub_min: st.sub_min,
        slice: st.slice,
        n: st.n,
        degrees,
        total_rank,
        eu,
        status,
    }
}

fn euler_from(st: &RelSetup, towers: &RelTowers) -> RelativeEuler {
    let eu = (0..=towers.top)
        .map(|t| towers.gamma.euler_at(t) - towers.minus.euler_at(t - st.n))
        .sum();
    RelativeEuler {
        r0: st.r0,
        n: st.n,
        top: towers.top,
        eu,
        status: towers.status.clone(),
    }
}

/// Relative lattice cohomology of `(Γ, j0, kbar)`; see [`RelativeContext::cohomology`].
pub fn relative_cohomology(g: &PlumbingGraph, j0: usize, kbar: &CharElement, opts: &TowerOptions) -> Result<RelativeCohomology> {
    RelativeContext::new(g, j0, opts)?.cohomology(kbar)
}

/// See [`RelativeContext::euler`].
pub fn relative_euler(g: &PlumbingGraph, j0: usize, kbar: &CharElement, opts: &TowerOptions) -> Result<RelativeEuler> {
    RelativeContext::new(g, j0, opts)?.euler(kbar)
}

/// See [`RelativeContext::eu_rel_check`].
pub fn eu_rel_check(g: &PlumbingGraph, j0: usize, kbar: &CharElement, opts: &TowerOptions) -> Result<EuRelReport> {
    RelativeContext::new(g, j0, opts)?.eu_rel_check(kbar)
}

/// `K + 2l'` for `l' = Σ c_j E*_j` given by integer `E*`-coefficients.
pub fn k_plus_two(lat: &Lattice, c: &[i64]) -> CharElement {
    let k = lat.canonical();
    CharElement::new(k.a.iter().zip(c).map(|(a, x)| a + 2 * x).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn e8_tail() -> PlumbingGraph {
        PlumbingGraph::parse(fixtures::E8_TAIL).unwrap()
    }

    fn j0(g: &PlumbingGraph) -> usize {
        g.index_of("j0").unwrap()
    }

    #[test]
    fn triples() {
        let g = e8_tail();
        let t = make_triple(&g, j0(&g)).unwrap();
        assert_eq!(t.plus.definiteness, Definiteness::Degenerate);
        assert_eq!((t.gamma.determinant, t.minus.determinant), (1, 1));
        assert!(t.determinants.passed());
        let g = PlumbingGraph::parse(fixtures::MINUS_TWO).unwrap();
        let t = make_triple(&g, 0).unwrap();
        assert_eq!(t.plus.definiteness, Definiteness::NegativeDefinite);
        assert!(t.minus.graph.is_empty());
        assert_eq!(t.determinants.e_star_check, Some(true));
    }

    #[test]
    fn rationality() {
        assert!(is_rational(&PlumbingGraph::parse(fixtures::E8).unwrap()).unwrap());
        assert!(!is_rational(&e8_tail()).unwrap());
        assert!(is_rational(&PlumbingGraph::parse(fixtures::MINUS_TWO).unwrap()).unwrap());
        let b = bad_vertex_count(&e8_tail()).unwrap();
        assert_eq!(b.n, 1);
        assert!(b.stable);
        let star = PlumbingGraph::parse(fixtures::STAR_2_3_7).unwrap();
        assert!(bad_vertex_count(&star).unwrap().n <= 1);
    }

    #[test]
    fn example_relative_ranks() {
        let g = e8_tail();
        let j = j0(&g);
        let lat = Lattice::new(&g).unwrap();
        let opts = TowerOptions::default();
        for (lj, want) in [(0i64, 1usize), (1, 1), (2, 2), (3, 4)] {
            let mut c = vec![0i64; g.len()];
            c[j] = lj;
            let kbar = k_plus_two(&lat, &c);
            let r = eu_rel_check(&g, j, &kbar, &opts).unwrap();
            assert_eq!(r.relative.rank(0), want, "l'_j0 = {lj}");
            assert_eq!(r.relative.total_rank, want);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn single_vertex_relative() {
        let g = PlumbingGraph::parse(fixtures::MINUS_TWO).unwrap();
        let r = eu_rel_check(&g, 0, &CharElement::new(vec![0]), &TowerOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.eu_minus, Rational::from(0));
    }

    #[test]
    fn surgery_on_a2() {
        let g = PlumbingGraph::from_decorations(&[-2, -2], &[(0, 1)]).unwrap();
        let rep = surgery_report(&make_triple(&g, 1).unwrap(), &TowerOptions::default());
        assert!(!rep.failed(), "{:?}", rep.findings);
        for m in &rep.members {
            assert!(m.included);
            assert!(m.classes.iter().all(|c| c.reduced.iter().all(|&r| r == 0)));
        }
    }
}
