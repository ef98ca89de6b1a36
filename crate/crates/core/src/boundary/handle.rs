//! Boundary-path handles: a declared degree, a range vertex and a window
//! oracle `(n, m) ↦ x(n, m)`.

use std::fmt;
use std::sync::{Arc, RwLock};

use super::BoundaryError;
use crate::degree::{Degree, ExtDegree};
use crate::graph::{EdgeId, KGraph, Path, VertexId};

/// Where a handle's windows come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Finite,
    PeriodicWord,
    Substitution,
    User,
}

type WindowFn = dyn Fn(&Degree, &Degree) -> Path + Send + Sync;

enum Node {
    Finite(Path),
    /// An infinite word in a 1-graph; position `i` is the `i`-th letter.
    Letters(Letters),
    Shift {
        inner: BoundaryPath,
        by: Degree,
    },
    Extend {
        lambda: Path,
        inner: BoundaryPath,
    },
    User(Box<WindowFn>),
}

pub(crate) enum Letters {
    Periodic(Vec<EdgeId>),
    Substitution(Substitution),
}

impl Letters {
    fn letters(&self, start: usize, end: usize) -> Vec<EdgeId> {
        match self {
            Letters::Periodic(word) => (start..end).map(|i| word[i % word.len()]).collect(),
            Letters::Substitution(s) => s.prefix(end)[start..end].to_vec(),
        }
    }
}

/// Iterates a non-erasing substitution on a seed whose image starts with the
/// seed; prefixes of the fixed point are cached.
pub(crate) struct Substitution {
    rules: Vec<Vec<EdgeId>>,
    cache: RwLock<Vec<EdgeId>>,
}

impl Substitution {
    pub(crate) fn new(rules: Vec<Vec<EdgeId>>, seed: EdgeId) -> Self {
        let start = rules[seed.index()].clone();
        Substitution { rules, cache: RwLock::new(start) }
    }

    fn prefix(&self, len: usize) -> Vec<EdgeId> {
        {
            let cached = self.cache.read().expect("cache lock");
            if cached.len() >= len {
                return cached[..len].to_vec();
            }
        }
        let mut cached = self.cache.write().expect("cache lock");
        while cached.len() < len {
            let next: Vec<EdgeId> = cached.iter().flat_map(|e| self.rules[e.index()].iter().copied()).collect();
            *cached = next;
        }
        cached[..len].to_vec()
    }
}

/// A boundary path given by a window oracle. Cheap to clone.
#[derive(Clone)]
pub struct BoundaryPath {
    graph: Arc<KGraph>,
    node: Arc<Node>,
    degree: ExtDegree,
    range: VertexId,
    provenance: Provenance,
    label: Arc<str>,
}

impl fmt::Debug for BoundaryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryPath")
            .field("label", &self.label)
            .field("degree", &self.degree)
            .field("range", &self.graph.vertex_name(self.range))
            .finish()
    }
}

impl BoundaryPath {
    /// A finite path viewed as a (candidate) boundary path of degree `d(λ)`.
    pub fn finite(graph: Arc<KGraph>, lambda: Path) -> Self {
        let label: Arc<str> = graph.path_name(&lambda).into();
        BoundaryPath {
            degree: ExtDegree::finite(lambda.degree()),
            range: lambda.range(),
            provenance: Provenance::Finite,
            label,
            node: Arc::new(Node::Finite(lambda)),
            graph,
        }
    }

    /// The infinite repetition `www...` of a nonempty word in a 1-graph.
    pub fn periodic(graph: Arc<KGraph>, word: &[EdgeId]) -> Result<Self, BoundaryError> {
        if graph.rank() != 1 {
            return Err(BoundaryError::NotOneGraph);
        }
        let (Some(&first), Some(&last)) = (word.first(), word.last()) else {
            return Err(BoundaryError::InvalidWord("periodic word is empty".into()));
        };
        for pair in word.windows(2).chain(std::iter::once(&[last, first][..])) {
            if graph.edge(pair[0]).source != graph.edge(pair[1]).range {
                return Err(BoundaryError::InvalidWord(format!(
                    "`{}` cannot be followed by `{}`",
                    graph.edge(pair[0]).name,
                    graph.edge(pair[1]).name
                )));
            }
        }
        let label = format!("({})^inf", graph.names(word).join("."));
        Ok(BoundaryPath {
            degree: ExtDegree::infinite(1),
            range: graph.edge(first).range,
            provenance: Provenance::PeriodicWord,
            label: label.into(),
            node: Arc::new(Node::Letters(Letters::Periodic(word.to_vec()))),
            graph,
        })
    }

    pub(crate) fn from_substitution(graph: Arc<KGraph>, subst: Substitution, seed: EdgeId, label: String) -> Self {
        BoundaryPath {
            degree: ExtDegree::infinite(1),
            range: graph.edge(seed).range,
            provenance: Provenance::Substitution,
            label: label.into(),
            node: Arc::new(Node::Letters(Letters::Substitution(subst))),
            graph,
        }
    }

    /// A handle backed by a caller-supplied window function. The function
    /// must be pure and satisfy `x(n,p) = x(n,m) x(m,p)`.
    pub fn user<F>(graph: Arc<KGraph>, range: VertexId, degree: ExtDegree, label: &str, window: F) -> Self
    where
        F: Fn(&Degree, &Degree) -> Path + Send + Sync + 'static,
    {
        BoundaryPath {
            degree,
            range,
            provenance: Provenance::User,
            label: label.into(),
            node: Arc::new(Node::User(Box::new(window))),
            graph,
        }
    }

    pub fn graph(&self) -> &Arc<KGraph> {
        &self.graph
    }

    pub fn degree(&self) -> &ExtDegree {
        &self.degree
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `x(n, m)` for `n <= m <= d(x)`.
    pub fn window(&self, n: &Degree, m: &Degree) -> Result<Path, BoundaryError> {
        if !n.le(m) || !self.degree.contains(m) {
            return Err(BoundaryError::DegreeExceeded { n: n.clone(), m: m.clone(), degree: self.degree.clone() });
        }
        Ok(self.window_unchecked(n, m))
    }

    fn window_unchecked(&self, n: &Degree, m: &Degree) -> Path {
        let g = &self.graph;
        match &*self.node {
            Node::Finite(lambda) => g.segment(lambda, n, m).expect("checked against the degree"),
            Node::Letters(letters) => {
                let (start, end) = (n.get(0) as usize, m.get(0) as usize);
                if start == end {
                    let at = letters.letters(start, start + 1)[0];
                    g.vertex_path(g.edge(at).range)
                } else {
                    g.path_from_word(&letters.letters(start, end)).expect("letters compose")
                }
            }
            Node::Shift { inner, by } => inner.window_unchecked(&by.add(n), &by.add(m)),
            Node::Extend { lambda, inner } => {
                let t = m.saturating_sub(lambda.degree());
                let y = inner.window_unchecked(&Degree::zero(g.rank()), &t);
                let whole = g.compose(lambda, &y).expect("s(λ) = r(x)");
                g.segment(&whole, n, m).expect("segment within λ x(0,t)")
            }
            Node::User(f) => f(n, m),
        }
    }

    /// The vertex `x(n) = x(n, n)`.
    pub fn vertex_at(&self, n: &Degree) -> Result<VertexId, BoundaryError> {
        Ok(self.window(n, n)?.range())
    }

    /// `σ^n(x)`.
    pub fn shift(&self, n: &Degree) -> Result<Self, BoundaryError> {
        let range = self.vertex_at(n)?;
        if n.is_zero() {
            return Ok(self.clone());
        }
        let degree = self.degree.checked_sub(n).expect("n <= d(x)");
        // Collapse nested shifts so repeated shifting stays shallow.
        let (inner, by) = match &*self.node {
            Node::Shift { inner, by } => (inner.clone(), by.add(n)),
            _ => (self.clone(), n.clone()),
        };
        Ok(BoundaryPath {
            graph: self.graph.clone(),
            degree,
            range,
            provenance: self.provenance,
            label: format!("shift({},{})", inner.label, by).into(),
            node: Arc::new(Node::Shift { inner, by }),
        })
    }

    /// `λx`, with `(λx)(0, d(λ)) = λ` and `σ^{d(λ)}(λx) = x`.
    pub fn extend(&self, lambda: &Path) -> Result<Self, BoundaryError> {
        if lambda.source() != self.range {
            return Err(BoundaryError::NotComposable {
                path: self.graph.path_name(lambda),
                handle: self.label.to_string(),
            });
        }
        if lambda.is_vertex() {
            return Ok(self.clone());
        }
        if let Node::Finite(mu) = &*self.node {
            let whole = self.graph.compose(lambda, mu).expect("checked composable");
            let mut out = BoundaryPath::finite(self.graph.clone(), whole);
            out.provenance = self.provenance;
            return Ok(out);
        }
        Ok(BoundaryPath {
            graph: self.graph.clone(),
            degree: self.degree.add(lambda.degree()),
            range: lambda.range(),
            provenance: self.provenance,
            label: format!("{}*{}", self.graph.path_name(lambda), self.label).into(),
            node: Arc::new(Node::Extend { lambda: lambda.clone(), inner: self.clone() }),
        })
    }

    /// The initial window `x(0, W ∧ d(x))`, used as an identity key.
    pub fn head(&self, width: &Degree) -> Path {
        self.window_unchecked(&Degree::zero(self.graph.rank()), &self.degree.clamp(width))
    }

    /// Equality of range, degree and the initial window of width `W`.
    pub fn window_eq(&self, other: &BoundaryPath, width: &Degree) -> bool {
        self.range == other.range && self.degree == other.degree && self.head(width) == other.head(width)
    }
}
