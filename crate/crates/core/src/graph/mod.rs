//! Finite k-graphs given by a colored skeleton and a complete set of
//! commuting squares.
//!
//! A presentation is accepted only if the square table is a bijection between
//! composable bicolored pairs in increasing color order (tops) and those in
//! decreasing color order (bottoms), and, for rank three or more, every
//! tricolored word has a unique normal form under square rewriting. Those are
//! exactly the conditions under which the rewriting system defines a category
//! with the unique factorization property.

mod generators;
mod path;
mod presentation;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use generators::{make_bouquet, make_cycle, make_flip, make_omega, make_product};
pub use path::{Path, PathError};
pub use presentation::{EdgeSpec, Presentation, SquareSpec};

use crate::degree::Degree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// Zero-based color.
    pub color: usize,
    pub range: VertexId,
    pub source: VertexId,
}

/// One reason a presentation was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InvalidRank,
    DuplicateName {
        name: String,
    },
    DanglingEndpoint {
        edge: String,
        vertex: String,
    },
    InvalidColor {
        edge: String,
        color: usize,
    },
    UnknownEdge {
        square: usize,
        edge: String,
    },
    /// Colors of the square do not follow the `(i, j) / (j, i)` pattern with `i < j`.
    InvalidSquare {
        square: usize,
        reason: String,
    },
    NonComposableSquare {
        square: usize,
        reason: String,
    },
    /// The same composable pair appears on the given side of two squares.
    NonBijectiveSwap {
        side: String,
        pair: [String; 2],
    },
    /// A composable bicolored pair has no square.
    IncompleteSquares {
        pair: [String; 2],
    },
    /// A tricolored word with more than one normal form.
    ConfluenceFailure {
        word: Vec<String>,
        normal_forms: Vec<Vec<String>>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidRank => write!(f, "rank must be at least 1"),
            Violation::DuplicateName { name } => write!(f, "duplicate name `{name}`"),
            Violation::DanglingEndpoint { edge, vertex } => {
                write!(f, "edge `{edge}` refers to undeclared vertex `{vertex}`")
            }
            Violation::InvalidColor { edge, color } => write!(f, "edge `{edge}` has invalid color {color}"),
            Violation::UnknownEdge { square, edge } => write!(f, "square {square} refers to unknown edge `{edge}`"),
            Violation::InvalidSquare { square, reason } => write!(f, "square {square}: {reason}"),
            Violation::NonComposableSquare { square, reason } => write!(f, "square {square}: {reason}"),
            Violation::NonBijectiveSwap { side, pair } => {
                write!(f, "pair ({}, {}) is the {side} of more than one square", pair[0], pair[1])
            }
            Violation::IncompleteSquares { pair } => {
                write!(f, "composable pair ({}, {}) has no square", pair[0], pair[1])
            }
            Violation::ConfluenceFailure { word, normal_forms } => {
                write!(f, "word {} has {} distinct normal forms", word.join(" "), normal_forms.len())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid presentation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("degree {0} has the wrong rank")]
    RankMismatch(Degree),
}

impl GraphError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            GraphError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// A validated finite k-graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct KGraph {
    rank: usize,
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, EdgeId>,
    /// `by_range[v][c]`: color-`c` edges with range `v`, ascending id.
    by_range: Vec<Vec<Vec<EdgeId>>>,
    by_source: Vec<Vec<Vec<EdgeId>>>,
    top_to_bottom: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    bottom_to_top: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    squares: Vec<[EdgeId; 4]>,
    short_names: bool,
    acyclic: bool,
}

impl KGraph {
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Self::validate(&Presentation::from_json(text)?)
    }

    /// Checks a presentation and builds the graph, or returns every violation found.
    pub fn validate(p: &Presentation) -> Result<Self, GraphError> {
        let mut violations = Vec::new();
        if p.rank == 0 {
            return Err(GraphError::Invalid(vec![Violation::InvalidRank]));
        }

        let mut seen = HashSet::new();
        let mut vertex_index = HashMap::new();
        for (i, name) in p.vertices.iter().enumerate() {
            if !seen.insert(name.as_str()) {
                violations.push(Violation::DuplicateName { name: name.clone() });
            } else {
                vertex_index.insert(name.clone(), VertexId(i as u32));
            }
        }

        let mut edges = Vec::with_capacity(p.edges.len());
        let mut edge_index = HashMap::new();
        for e in &p.edges {
            if !seen.insert(e.name.as_str()) {
                violations.push(Violation::DuplicateName { name: e.name.clone() });
                continue;
            }
            if e.color == 0 || e.color > p.rank {
                violations.push(Violation::InvalidColor { edge: e.name.clone(), color: e.color });
                continue;
            }
            let mut endpoint = |v: &String| match vertex_index.get(v) {
                Some(&id) => Some(id),
                None => {
                    violations.push(Violation::DanglingEndpoint { edge: e.name.clone(), vertex: v.clone() });
                    None
                }
            };
            let (range, source) = (endpoint(&e.range), endpoint(&e.source));
            if let (Some(range), Some(source)) = (range, source) {
                edge_index.insert(e.name.clone(), EdgeId(edges.len() as u32));
                edges.push(Edge { name: e.name.clone(), color: e.color - 1, range, source });
            }
        }

        let n = p.vertices.len();
        let mut by_range = vec![vec![Vec::new(); p.rank]; n];
        let mut by_source = vec![vec![Vec::new(); p.rank]; n];
        for (i, e) in edges.iter().enumerate() {
            by_range[e.range.index()][e.color].push(EdgeId(i as u32));
            by_source[e.source.index()][e.color].push(EdgeId(i as u32));
        }

        let mut top_to_bottom = HashMap::new();
        let mut bottom_to_top = HashMap::new();
        let mut squares = Vec::new();
        for (si, sq) in p.squares.iter().enumerate() {
            let mut ids = [EdgeId(0); 4];
            let mut ok = true;
            for (slot, name) in sq.top.iter().chain(sq.bottom.iter()).enumerate() {
                match edge_index.get(name) {
                    Some(&id) => ids[slot] = id,
                    None => {
                        violations.push(Violation::UnknownEdge { square: si, edge: name.clone() });
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let [g, h, hp, gp] = ids.map(|id| &edges[id.index()]);
            if !(g.color == gp.color && h.color == hp.color && g.color < h.color) {
                violations.push(Violation::InvalidSquare {
                    square: si,
                    reason: "expected colors (i, j) on top and (j, i) on the bottom with i < j".into(),
                });
                continue;
            }
            let mut reasons = Vec::new();
            if g.source != h.range {
                reasons.push("top pair is not composable");
            }
            if hp.source != gp.range {
                reasons.push("bottom pair is not composable");
            }
            if g.range != hp.range || h.source != gp.source {
                reasons.push("top and bottom have different endpoints");
            }
            if !reasons.is_empty() {
                violations.push(Violation::NonComposableSquare { square: si, reason: reasons.join(", ") });
                continue;
            }
            let top = (ids[0], ids[1]);
            let bottom = (ids[2], ids[3]);
            if top_to_bottom.insert(top, bottom).is_some() {
                violations.push(Violation::NonBijectiveSwap {
                    side: "top".into(),
                    pair: [sq.top[0].clone(), sq.top[1].clone()],
                });
            }
            if bottom_to_top.insert(bottom, top).is_some() {
                violations.push(Violation::NonBijectiveSwap {
                    side: "bottom".into(),
                    pair: [sq.bottom[0].clone(), sq.bottom[1].clone()],
                });
            }
            squares.push(ids);
        }

        // Every composable bicolored pair must be rewritable.
        for (i, x) in edges.iter().enumerate() {
            for (c, targets) in by_range[x.source.index()].iter().enumerate() {
                if c == x.color {
                    continue;
                }
                for &y in targets {
                    let pair = (EdgeId(i as u32), y);
                    let table = if x.color < c { &top_to_bottom } else { &bottom_to_top };
                    if !table.contains_key(&pair) {
                        violations.push(Violation::IncompleteSquares {
                            pair: [x.name.clone(), edges[y.index()].name.clone()],
                        });
                    }
                }
            }
        }

        let short_names = edges.iter().all(|e| e.name.chars().count() == 1);
        let mut g = KGraph {
            rank: p.rank,
            vertex_names: p.vertices.clone(),
            vertex_index,
            edges,
            edge_index,
            by_range,
            by_source,
            top_to_bottom,
            bottom_to_top,
            squares,
            short_names,
            acyclic: false,
        };
        if violations.is_empty() && g.rank >= 3 {
            violations.extend(g.confluence_violations());
        }
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        g.acyclic = g.compute_acyclic();
        Ok(g)
    }

    /// Explores every rewriting order on every composable word with three
    /// distinct colors and reports words with more than one normal form.
    fn confluence_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for e1 in 0..self.edges.len() {
            let e1 = EdgeId(e1 as u32);
            for c2 in 0..self.rank {
                for &e2 in self.edges_with_range(self.edge(e1).source, c2) {
                    if c2 == self.edge(e1).color {
                        continue;
                    }
                    for c3 in 0..self.rank {
                        if c3 == c2 || c3 == self.edge(e1).color {
                            continue;
                        }
                        for &e3 in self.edges_with_range(self.edge(e2).source, c3) {
                            let word = vec![e1, e2, e3];
                            let forms = self.all_normal_forms(&word);
                            if forms.len() > 1 {
                                out.push(Violation::ConfluenceFailure {
                                    word: self.names(&word),
                                    normal_forms: forms.iter().map(|w| self.names(w)).collect(),
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn all_normal_forms(&self, word: &[EdgeId]) -> BTreeSet<Vec<EdgeId>> {
        let mut forms = BTreeSet::new();
        let mut seen = HashSet::new();
        let mut stack = vec![word.to_vec()];
        while let Some(w) = stack.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            let mut reducible = false;
            for p in 0..w.len().saturating_sub(1) {
                if self.edge(w[p]).color > self.edge(w[p + 1]).color {
                    reducible = true;
                    let mut next = w.clone();
                    let (a, b) = self.bottom_to_top[&(w[p], w[p + 1])];
                    next[p] = a;
                    next[p + 1] = b;
                    stack.push(next);
                }
            }
            if !reducible {
                forms.insert(w);
            }
        }
        forms
    }

    fn compute_acyclic(&self) -> bool {
        // Kahn's algorithm on the 1-skeleton.
        let n = self.vertex_count();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.range.index()] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for per_color in &self.by_source[v] {
                for &e in per_color {
                    let r = self.edge(e).range.index();
                    indeg[r] -= 1;
                    if indeg[r] == 0 {
                        queue.push(r);
                    }
                }
            }
        }
        removed == n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn square_count(&self) -> usize {
        self.squares.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn edges_with_range(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.by_range[v.index()][color]
    }

    pub fn edges_with_source(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.by_source[v.index()][color]
    }

    /// Edges per color, counted on the whole graph.
    pub fn edges_per_color(&self) -> Vec<usize> {
        let mut out = vec![0; self.rank];
        for e in &self.edges {
            out[e.color] += 1;
        }
        out
    }

    /// `g h = h' g'` lookup, keyed by the increasing-color pair `(g, h)`.
    pub fn square_below(&self, top: (EdgeId, EdgeId)) -> Option<(EdgeId, EdgeId)> {
        self.top_to_bottom.get(&top).copied()
    }

    pub fn square_above(&self, bottom: (EdgeId, EdgeId)) -> Option<(EdgeId, EdgeId)> {
        self.bottom_to_top.get(&bottom).copied()
    }

    /// No directed cycle in the skeleton, equivalently finitely many paths.
    pub fn has_finitely_many_paths(&self) -> bool {
        self.acyclic
    }

    /// No vertex receives no edges of some color, i.e. `vΛ^{e_i}` is never empty.
    pub fn has_no_sources(&self) -> bool {
        self.by_range.iter().all(|per_color| per_color.iter().all(|es| !es.is_empty()))
    }

    /// Whenever `v` has edges of colors `i` and `j`, each color-`i` edge with
    /// range `v` can be followed by a color-`j` edge.
    pub fn is_locally_convex(&self) -> bool {
        self.vertices().all(|v| {
            (0..self.rank).all(|i| {
                (0..self.rank).all(|j| {
                    i == j
                        || self.edges_with_range(v, j).is_empty()
                        || self
                            .edges_with_range(v, i)
                            .iter()
                            .all(|&e| !self.edges_with_range(self.edge(e).source, j).is_empty())
                })
            })
        })
    }

    pub(crate) fn names(&self, word: &[EdgeId]) -> Vec<String> {
        word.iter().map(|&e| self.edge(e).name.clone()).collect()
    }

    /// Converts back to the serializable presentation.
    pub fn to_presentation(&self) -> Presentation {
        Presentation {
            rank: self.rank,
            vertices: self.vertex_names.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    name: e.name.clone(),
                    color: e.color + 1,
                    range: self.vertex_name(e.range).to_string(),
                    source: self.vertex_name(e.source).to_string(),
                })
                .collect(),
            squares: self
                .squares
                .iter()
                .map(|ids| {
                    let n = |i: usize| self.edge(ids[i]).name.clone();
                    SquareSpec { top: [n(0), n(1)], bottom: [n(2), n(3)] }
                })
                .collect(),
        }
    }
}
