//! Plumbing graphs, their intersection forms and the graph surgeries.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::Rational;

/// A plumbing graph with genus-zero vertices.
///
/// Vertex order is the order of declaration and is used everywhere as the
/// order of the basis `E_j`. Edges form a multiset; parallel edges add up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlumbingGraph {
    ids: Vec<String>,
    decorations: Vec<i64>,
    edges: Vec<(usize, usize)>,
}

/// Sign pattern of the intersection form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definiteness {
    NegativeDefinite,
    NonDegenerateOther,
    Degenerate,
}

#[derive(Serialize, Deserialize)]
struct JsonVertex {
    id: String,
    e: i64,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    edges: Vec<(String, String)>,
}

impl PlumbingGraph {
    pub fn empty() -> Self {
        PlumbingGraph {
            ids: Vec::new(),
            decorations: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Builds a graph from ids, decorations and index pairs.
    pub fn new(ids: Vec<String>, decorations: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if ids.len() != decorations.len() {
            return Err(Error::DimensionMismatch {
                expected: ids.len(),
                got: decorations.len(),
            });
        }
        let mut seen = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if seen.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= ids.len() {
                return Err(Error::UnknownVertex(a.to_string()));
            }
            if b >= ids.len() {
                return Err(Error::UnknownVertex(b.to_string()));
            }
            if a == b {
                return Err(Error::SelfLoop(ids[a].clone()));
            }
            norm.push((a.min(b), a.max(b)));
        }
        Ok(PlumbingGraph {
            ids,
            decorations,
            edges: norm,
        })
    }

    /// Convenience constructor with ids `v0, v1, ...`.
    pub fn from_decorations(decorations: &[i64], edges: &[(usize, usize)]) -> Result<Self> {
        let ids = (0..decorations.len()).map(|i| format!("v{i}")).collect();
        Self::new(ids, decorations.to_vec(), edges.to_vec())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn decorations(&self) -> &[i64] {
        &self.decorations
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Number of edge ends at `j`, counted with multiplicity.
    pub fn valency(&self, j: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == j || b == j).count()
    }

    /// Neighbours of `j` with edge multiplicities, in vertex order.
    pub fn neighbours(&self, j: usize) -> Vec<(usize, i64)> {
        let mut mult = vec![0i64; self.len()];
        for &(a, b) in &self.edges {
            if a == j {
                mult[b] += 1;
            } else if b == j {
                mult[a] += 1;
            }
        }
        mult.iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i, m))
            .collect()
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let s = self.len();
        let mut m = vec![vec![0i64; s]; s];
        for (j, &e) in self.decorations.iter().enumerate() {
            m[j][j] = e;
        }
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            m[b][a] += 1;
        }
        m
    }

    pub fn intersection_form(&self) -> IntersectionForm {
        IntersectionForm::new(self.matrix())
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let s = self.len();
        let mut comp = vec![usize::MAX; s];
        let mut out = Vec::new();
        for start in 0..s {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            comp[start] = id;
            let mut members = vec![];
            while let Some(v) = stack.pop() {
                members.push(v);
                for (w, _) in self.neighbours(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Induced subgraph on `keep` (kept in the given order).
    pub fn induced(&self, keep: &[usize]) -> PlumbingGraph {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        PlumbingGraph {
            ids: keep.iter().map(|&v| self.ids[v].clone()).collect(),
            decorations: keep.iter().map(|&v| self.decorations[v]).collect(),
            edges: self
                .edges
                .iter()
                .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
                .map(|&(a, b)| (pos[a].min(pos[b]), pos[a].max(pos[b])))
                .collect(),
        }
    }

    /// `Γ∖j0`: drop the vertex and its edges, keep the order of the rest.
    pub fn delete_vertex(&self, j0: usize) -> Result<PlumbingGraph> {
        self.check_vertex(j0)?;
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != j0).collect();
        Ok(self.induced(&keep))
    }

    /// `Γ⁺`: the decoration of `j0` raised by one.
    pub fn bump_decoration(&self, j0: usize) -> Result<PlumbingGraph> {
        self.with_decoration_delta(j0, 1)
    }

    pub fn with_decoration_delta(&self, j0: usize, delta: i64) -> Result<PlumbingGraph> {
        self.check_vertex(j0)?;
        let mut g = self.clone();
        g.decorations[j0] += delta;
        Ok(g)
    }

    /// Blow up `j0`: its decoration drops by one and a new `-1` vertex is
    /// appended and joined to it.
    pub fn blow_up(&self, j0: usize) -> Result<PlumbingGraph> {
        self.check_vertex(j0)?;
        let mut g = self.clone();
        g.decorations[j0] -= 1;
        let mut id = format!("{}_new", self.ids[j0]);
        while g.ids.contains(&id) {
            id.push('\'');
        }
        g.ids.push(id);
        g.decorations.push(-1);
        let n = g.ids.len() - 1;
        g.edges.push((j0, n));
        Ok(g)
    }

    /// Attach a new vertex with the given decoration to `j0`.
    pub fn attach_leaf(&self, j0: usize, decoration: i64) -> Result<PlumbingGraph> {
        let mut g = self.blow_up(j0)?;
        g.decorations[j0] += 1;
        let n = g.len() - 1;
        g.decorations[n] = decoration;
        Ok(g)
    }

    fn check_vertex(&self, j: usize) -> Result<()> {
        if j < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(j.to_string()))
        }
    }

    /// Parses the text format: `id: e` lines, a line `edges:`, then `a b` lines.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<PlumbingGraph> {
        let mut ids: Vec<String> = Vec::new();
        let mut decorations = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut in_edges = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            if content.trim().is_empty() {
                continue;
            }
            let col_of = |needle: &str| raw.find(needle).map_or(1, |p| p + 1);
            if content.trim() == "edges:" {
                if in_edges {
                    return Err(syntax(line_no, col_of("edges"), "repeated `edges:` section"));
                }
                in_edges = true;
                continue;
            }
            if !in_edges {
                let Some(colon) = content.find(':') else {
                    return Err(syntax(line_no, col_of(content.trim()), "expected `id: decoration`"));
                };
                let id = content[..colon].trim();
                if id.is_empty() || id.contains(char::is_whitespace) {
                    return Err(syntax(line_no, 1, "vertex id must be a single non-empty token"));
                }
                let value = content[colon + 1..].trim();
                let e: i64 = value.parse().map_err(|_| {
                    syntax(line_no, colon + 2 + (content[colon + 1..].len() - content[colon + 1..].trim_start().len()), &format!("invalid decoration `{value}`"))
                })?;
                if index.insert(id.to_string(), ids.len()).is_some() {
                    return Err(Error::DuplicateVertex(id.to_string()));
                }
                ids.push(id.to_string());
                decorations.push(e);
            } else {
                let tokens: Vec<&str> = content.split_whitespace().collect();
                if tokens.len() != 2 {
                    return Err(syntax(line_no, col_of(content.trim()), "expected an edge `idA idB`"));
                }
                let a = *index.get(tokens[0]).ok_or_else(|| Error::UnknownVertex(tokens[0].to_string()))?;
                let b = *index.get(tokens[1]).ok_or_else(|| Error::UnknownVertex(tokens[1].to_string()))?;
                if a == b {
                    return Err(Error::SelfLoop(tokens[0].to_string()));
                }
                edges.push((a, b));
            }
        }
        PlumbingGraph::new(ids, decorations, edges)
    }

    pub fn parse_json(text: &str) -> Result<PlumbingGraph> {
        let raw: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let ids: Vec<String> = raw.vertices.iter().map(|v| v.id.clone()).collect();
        let decorations = raw.vertices.iter().map(|v| v.e).collect();
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let mut edges = Vec::new();
        for (a, b) in &raw.edges {
            let ia = *index.get(a).ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if ia == ib {
                return Err(Error::SelfLoop(a.clone()));
            }
            edges.push((ia, ib));
        }
        PlumbingGraph::new(ids, decorations, edges)
    }

    /// Reads a graph file; `.json` files use the JSON layout.
    pub fn load(path: &std::path::Path) -> Result<PlumbingGraph> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|x| x == "json") {
            Self::parse_json(&text)
        } else {
            Self::parse(&text)
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (id, e) in self.ids.iter().zip(&self.decorations) {
            let _ = writeln!(out, "{id}: {e}");
        }
        out.push_str("edges:\n");
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{} {}", self.ids[a], self.ids[b]);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let raw = JsonGraph {
            vertices: self
                .ids
                .iter()
                .zip(&self.decorations)
                .map(|(id, &e)| JsonVertex { id: id.clone(), e })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
        };
        serde_json::to_string(&raw).expect("graph serializes")
    }
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

/// The intersection matrix `M` together with its exact inverse data.
///
/// Dual vectors are stored by their integer coefficients `a_j` in the basis
/// `E*_j`; lattice vectors by coefficients `l_j` in the basis `E_j`. With
/// these conventions `E_j = -Σ_i M_ji E*_i`, `(E*_i, E*_j) = (M⁻¹)_ij` and
/// `(l, a) = -Σ l_j a_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    m: Vec<Vec<i64>>,
    det_m: i128,
    /// Adjugate of `M`; `M⁻¹ = adj / det_m` when `det_m != 0`.
    adj: IntMatrix,
}

impl IntersectionForm {
    pub fn new(m: Vec<Vec<i64>>) -> Self {
        let wide = linalg::from_i64(&m);
        let (det_m, adj) = linalg::adjugate(&wide).unwrap_or_else(|| (0, vec![vec![0; m.len()]; m.len()]));
        IntersectionForm { m, det_m, adj }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.m
    }

    /// `det M`.
    pub fn det_m(&self) -> i128 {
        self.det_m
    }

    /// `det(-M)`, the determinant of the graph.
    pub fn determinant(&self) -> i128 {
        if self.dim() % 2 == 0 {
            self.det_m
        } else {
            -self.det_m
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.det_m == 0
    }

    pub fn adjugate(&self) -> &IntMatrix {
        &self.adj
    }

    pub fn classify(&self) -> Definiteness {
        if self.det_m == 0 {
            return Definiteness::Degenerate;
        }
        let s = self.dim();
        for k in 1..=s {
            let minor: IntMatrix = (0..k)
                .map(|i| (0..k).map(|j| -(self.m[i][j] as i128)).collect())
                .collect();
            if linalg::determinant(&minor) <= 0 {
                return Definiteness::NonDegenerateOther;
            }
        }
        Definiteness::NegativeDefinite
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateForm)
        } else {
            Ok(())
        }
    }

    pub fn require_negative_definite(&self) -> Result<()> {
        match self.classify() {
            Definiteness::NegativeDefinite => Ok(()),
            Definiteness::Degenerate => Err(Error::DegenerateForm),
            Definiteness::NonDegenerateOther => Err(Error::NotNegativeDefinite),
        }
    }

    /// `(M⁻¹)_ij` as an exact rational.
    pub fn inv(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.adj[i][j], self.det_m)
    }

    /// `(x, y)` for dual vectors given by `E*`-coefficients.
    pub fn dual_pair(&self, x: &[i64], y: &[i64]) -> Rational {
        let mut num = 0i128;
        for i in 0..self.dim() {
            if x[i] == 0 {
                continue;
            }
            let mut row = 0i128;
            for j in 0..self.dim() {
                row += self.adj[i][j] * y[j] as i128;
            }
            num += x[i] as i128 * row;
        }
        Rational::new(num, self.det_m)
    }

    pub fn dual_square(&self, x: &[i64]) -> Rational {
        self.dual_pair(x, x)
    }

    /// `(l, l')` for lattice vectors.
    pub fn lattice_pair(&self, l: &[i64], l2: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..self.dim() {
            if l[i] == 0 {
                continue;
            }
            for j in 0..self.dim() {
                acc += l[i] * self.m[i][j] * l2[j];
            }
        }
        acc
    }

    /// `E*`-coefficients of a lattice vector: `-M l`.
    pub fn lattice_to_dual(&self, l: &[i64]) -> Vec<i64> {
        (0..self.dim())
            .map(|i| -(0..self.dim()).map(|j| self.m[i][j] * l[j]).sum::<i64>())
            .collect()
    }

    /// `E`-coordinates of a dual vector: `-M⁻¹ a`.
    pub fn dual_to_lattice(&self, a: &[i64]) -> Vec<Rational> {
        (0..self.dim())
            .map(|i| {
                let num: i128 = (0..self.dim()).map(|j| self.adj[i][j] * a[j] as i128).sum();
                Rational::new(-num, self.det_m)
            })
            .collect()
    }

    /// Integral lattice vector with `E*`-coefficients `a`, if any.
    pub fn dual_to_lattice_integral(&self, a: &[i64]) -> Option<Vec<i64>> {
        self.dual_to_lattice(a)
            .into_iter()
            .map(|x| x.is_integer().then(|| *x.numer() as i64))
            .collect()
    }

    /// `E*_j` in `E`-coordinates: `-(column j of M⁻¹)`.
    pub fn dual_basis(&self) -> Result<Vec<Vec<Rational>>> {
        self.require_nondegenerate()?;
        Ok((0..self.dim())
            .map(|j| (0..self.dim()).map(|i| -self.inv(i, j)).collect())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    const EX71: &str = crate::fixtures::E8_TAIL;

    #[test]
    fn parse_single_vertex() {
        let g = PlumbingGraph::parse("v0: -2\nedges:\n").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.decorations(), &[-2]);
        assert_eq!(g.intersection_form().determinant(), 2);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(PlumbingGraph::parse("v0: -2\nedges:\nv0 v0\n"), Err(Error::SelfLoop(_))));
        assert!(matches!(PlumbingGraph::parse("v0: -2\nv0: -3\n"), Err(Error::DuplicateVertex(_))));
        assert!(matches!(PlumbingGraph::parse("v0: -2\nedges:\nv0 v1\n"), Err(Error::UnknownVertex(_))));
        match PlumbingGraph::parse("v0: -2\nv1 -3\n") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match PlumbingGraph::parse("v0: x2\n") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn example_graph_determinants() {
        let g = PlumbingGraph::parse(EX71).unwrap();
        let f = g.intersection_form();
        assert_eq!(f.determinant(), 1);
        assert_eq!(f.classify(), Definiteness::NegativeDefinite);
        let j0 = g.index_of("j0").unwrap();
        let e8 = g.delete_vertex(j0).unwrap();
        assert_eq!(e8.intersection_form().determinant(), 1);
        assert_eq!(e8.intersection_form().classify(), Definiteness::NegativeDefinite);
        let plus = g.bump_decoration(j0).unwrap();
        assert_eq!(plus.intersection_form().determinant(), 0);
        assert_eq!(plus.intersection_form().classify(), Definiteness::Degenerate);
        let mut ej0 = vec![0; 9];
        ej0[j0] = 1;
        assert_eq!(f.dual_square(&ej0), -Rational::one());
    }

    #[test]
    fn small_forms() {
        let g = PlumbingGraph::from_decorations(&[-2, -2], &[(0, 1)]).unwrap();
        assert_eq!(g.matrix(), vec![vec![-2, 1], vec![1, -2]]);
        let plus = PlumbingGraph::from_decorations(&[1], &[]).unwrap();
        assert_eq!(plus.intersection_form().classify(), Definiteness::NonDegenerateOther);
        let one = PlumbingGraph::from_decorations(&[-2], &[]).unwrap();
        let f = one.intersection_form();
        let basis = f.dual_basis().unwrap();
        assert_eq!(basis[0][0], Rational::new(1, 2));
        assert_eq!(f.dual_square(&[1]), Rational::new(-1, 2));
    }

    #[test]
    fn dual_basis_pairs_to_minus_delta() {
        let g = PlumbingGraph::parse(EX71).unwrap();
        let f = g.intersection_form();
        let basis = f.dual_basis().unwrap();
        for (j, ej) in basis.iter().enumerate() {
            for i in 0..9 {
                let mut v = Rational::zero();
                for t in 0..9 {
                    v += ej[t] * Rational::from(f.matrix()[t][i] as i128);
                }
                let want = if i == j { -Rational::one() } else { Rational::zero() };
                assert_eq!(v, want);
            }
        }
    }

    #[test]
    fn surgeries() {
        let path = PlumbingGraph::from_decorations(&[-2, -3, -2], &[(0, 1), (1, 2)]).unwrap();
        let d = path.delete_vertex(1).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.edges().is_empty());
        assert_eq!(d.components().len(), 2);
        let single = PlumbingGraph::from_decorations(&[-2], &[]).unwrap();
        assert!(single.delete_vertex(0).unwrap().is_empty());
        let b = single.blow_up(0).unwrap();
        assert_eq!(b.decorations(), &[-3, -1]);
        assert_eq!(b.edges(), &[(0, 1)]);
        let back = b.delete_vertex(1).unwrap().bump_decoration(0).unwrap();
        assert_eq!(back, single);
    }

    #[test]
    fn round_trip() {
        let g = PlumbingGraph::parse(EX71).unwrap();
        assert_eq!(PlumbingGraph::parse(&g.serialize()).unwrap(), g);
        assert_eq!(PlumbingGraph::parse_json(&g.to_json()).unwrap(), g);
        let multi = PlumbingGraph::parse("x: -3\ny: -3\nedges:\nx y\ny x\n").unwrap();
        assert_eq!(multi.matrix()[0][1], 2);
        assert_eq!(multi.valency(0), 2);
    }
}
