//! Concrete isometry families: the path-space (Fock) model and the boundary
//! model on a finite set of boundary-path handles.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::matrix::{Basis, OperatorMatrix};
use super::RepError;
use crate::boundary::BoundaryPath;
use crate::degree::{Degree, ExtDegree};
use crate::graph::{KGraph, Path, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Fock,
    Boundary,
}

type HandleKey = (VertexId, ExtDegree, Path);

enum Elements {
    Fock {
        cap: Degree,
        paths: Vec<Path>,
        index: HashMap<Path, usize>,
    },
    Boundary {
        window: Degree,
        handles: Vec<BoundaryPath>,
        levels: Vec<u32>,
        depth: u32,
        saturated: bool,
        index: HashMap<HandleKey, usize>,
    },
}

type SpanCache = RwLock<HashMap<(Path, Path), Arc<OperatorMatrix<i64>>>>;

/// Partial isometries `T_λ` on a finite basis. Truncation makes relations
/// exact only on the safe subspace, see [`IsometryFamily::is_safe`].
pub struct IsometryFamily {
    graph: Arc<KGraph>,
    basis: Arc<Basis>,
    elements: Elements,
    spans: SpanCache,
}

/// Basis `{ξ_μ : d(μ) <= N}`; `T_λ ξ_μ = ξ_{λμ}` when composable and inside the cap.
pub fn build_fock_family(g: &Arc<KGraph>, cap: &Degree) -> Result<IsometryFamily, RepError> {
    if cap.rank() != g.rank() {
        return Err(RepError::RankMismatch(cap.clone()));
    }
    let mut paths = g.paths_up_to(cap, None, None);
    paths.sort();
    let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let basis = Basis::new(paths.iter().map(|p| g.path_name(p)).collect());
    Ok(IsometryFamily {
        graph: g.clone(),
        basis,
        elements: Elements::Fock { cap: cap.clone(), paths, index },
        spans: RwLock::new(HashMap::new()),
    })
}

/// Basis indexed by the closure of `seeds` under `depth` rounds of one-edge
/// extensions and unit shifts. Handles are identified by their initial window
/// of width `window`; two handles agreeing there but not at twice the width
/// are a [`RepError::WindowCollision`].
pub fn build_boundary_family(
    g: &Arc<KGraph>,
    seeds: &[BoundaryPath],
    window: &Degree,
    depth: u32,
) -> Result<IsometryFamily, RepError> {
    if seeds.is_empty() {
        return Err(RepError::EmptySeedSet);
    }
    if window.rank() != g.rank() {
        return Err(RepError::RankMismatch(window.clone()));
    }
    let mut handles: Vec<BoundaryPath> = Vec::new();
    let mut levels = Vec::new();
    let mut index: HashMap<HandleKey, usize> = HashMap::new();
    let mut insert = |h: BoundaryPath, level: u32, handles: &mut Vec<BoundaryPath>, levels: &mut Vec<u32>| match lookup(
        &index, handles, &h, window,
    )? {
        Some(_) => Ok::<bool, RepError>(false),
        None => {
            index.insert(key(&h, window), handles.len());
            handles.push(h);
            levels.push(level);
            Ok(true)
        }
    };
    for s in seeds {
        if !Arc::ptr_eq(s.graph(), g) {
            return Err(RepError::GraphMismatch);
        }
        insert(s.clone(), 0, &mut handles, &mut levels)?;
    }
    let mut saturated = false;
    let mut frontier: Vec<usize> = (0..handles.len()).collect();
    for level in 1..=depth {
        let mut next = Vec::new();
        for i in frontier {
            for h in moves(g, &handles[i])? {
                if insert(h, level, &mut handles, &mut levels)? {
                    next.push(handles.len() - 1);
                }
            }
        }
        if next.is_empty() {
            saturated = true;
            break;
        }
        frontier = next;
    }
    let basis = Basis::new(handles.iter().map(|h| h.label().to_string()).collect());
    Ok(IsometryFamily {
        graph: g.clone(),
        basis,
        elements: Elements::Boundary { window: window.clone(), handles, levels, depth, saturated, index },
        spans: RwLock::new(HashMap::new()),
    })
}

fn moves(g: &KGraph, h: &BoundaryPath) -> Result<Vec<BoundaryPath>, RepError> {
    let mut out = Vec::new();
    for c in 0..g.rank() {
        for &e in g.edges_with_source(h.range(), c) {
            out.push(h.extend(&g.edge_path(e))?);
        }
    }
    for c in 0..g.rank() {
        let unit = Degree::unit(g.rank(), c);
        if h.degree().contains(&unit) {
            out.push(h.shift(&unit)?);
        }
    }
    Ok(out)
}

fn key(h: &BoundaryPath, window: &Degree) -> HandleKey {
    (h.range(), h.degree().clone(), h.head(window))
}

fn lookup(
    index: &HashMap<HandleKey, usize>,
    handles: &[BoundaryPath],
    h: &BoundaryPath,
    window: &Degree,
) -> Result<Option<usize>, RepError> {
    let Some(&i) = index.get(&key(h, window)) else {
        return Ok(None);
    };
    let wide = window.add(window);
    if handles[i].head(&wide) != h.head(&wide) {
        return Err(RepError::WindowCollision { first: handles[i].label().to_string(), second: h.label().to_string() });
    }
    Ok(Some(i))
}

impl IsometryFamily {
    pub fn kind(&self) -> FamilyKind {
        match self.elements {
            Elements::Fock { .. } => FamilyKind::Fock,
            Elements::Boundary { .. } => FamilyKind::Boundary,
        }
    }

    pub fn graph(&self) -> &Arc<KGraph> {
        &self.graph
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self, i: usize) -> &str {
        self.basis.label(i)
    }

    /// The Fock cap `N`, if this is a Fock family.
    pub fn cap(&self) -> Option<&Degree> {
        match &self.elements {
            Elements::Fock { cap, .. } => Some(cap),
            Elements::Boundary { .. } => None,
        }
    }

    /// Boundary handles, if this is a boundary family.
    pub fn handles(&self) -> Option<&[BoundaryPath]> {
        match &self.elements {
            Elements::Fock { .. } => None,
            Elements::Boundary { handles, .. } => Some(handles),
        }
    }

    pub fn window(&self) -> Option<&Degree> {
        match &self.elements {
            Elements::Fock { .. } => None,
            Elements::Boundary { window, .. } => Some(window),
        }
    }

    /// Whether every relation word of total degree `margin` acts on `ξ_i`
    /// without leaving the basis.
    pub fn is_safe(&self, i: usize, margin: &Degree) -> bool {
        match &self.elements {
            Elements::Fock { cap, paths, .. } => paths[i].degree().add(margin).le(cap),
            Elements::Boundary { levels, depth, saturated, .. } => *saturated || levels[i] + margin.total() <= *depth,
        }
    }

    pub fn safe_count(&self, margin: &Degree) -> usize {
        (0..self.dim()).filter(|&i| self.is_safe(i, margin)).count()
    }

    /// Checks a degree is usable as a margin; Fock margins above the cap
    /// leave no safe vectors.
    pub fn check_margin(&self, margin: &Degree) -> Result<(), RepError> {
        match &self.elements {
            Elements::Fock { cap, .. } if !margin.le(cap) => {
                Err(RepError::CapTooSmall { needed: margin.clone(), cap: cap.clone() })
            }
            _ => Ok(()),
        }
    }

    /// The Fock basis index of `ξ_μ`.
    pub fn index_of_path(&self, mu: &Path) -> Option<usize> {
        match &self.elements {
            Elements::Fock { index, .. } => index.get(mu).copied(),
            Elements::Boundary { .. } => None,
        }
    }

    fn locate(&self, h: &BoundaryPath) -> Result<Option<usize>, RepError> {
        match &self.elements {
            Elements::Boundary { window, handles, index, .. } => lookup(index, handles, h, window),
            Elements::Fock { .. } => Ok(None),
        }
    }

    /// Whether basis element `i` has `λ` as initial segment.
    pub fn has_prefix(&self, i: usize, lambda: &Path) -> bool {
        let g = &*self.graph;
        match &self.elements {
            Elements::Fock { paths, .. } => g.has_prefix(&paths[i], lambda),
            Elements::Boundary { handles, .. } => {
                let x = &handles[i];
                x.range() == lambda.range()
                    && x.degree().contains(lambda.degree())
                    && x.window(&Degree::zero(g.rank()), lambda.degree()).ok().as_ref() == Some(lambda)
            }
        }
    }

    /// `T_λ ξ_i`, as a basis index, or `None` when zero or truncated.
    pub fn apply(&self, lambda: &Path, i: usize) -> Result<Option<usize>, RepError> {
        match &self.elements {
            Elements::Fock { cap, paths, index } => {
                let beta = &paths[i];
                if lambda.source() != beta.range() || !lambda.degree().add(beta.degree()).le(cap) {
                    return Ok(None);
                }
                Ok(index.get(&self.graph.compose(lambda, beta)?).copied())
            }
            Elements::Boundary { handles, .. } => {
                let x = &handles[i];
                if lambda.source() != x.range() {
                    return Ok(None);
                }
                self.locate(&x.extend(lambda)?)
            }
        }
    }

    /// `T*_λ ξ_i`, as a basis index, or `None`.
    pub fn apply_adjoint(&self, lambda: &Path, i: usize) -> Result<Option<usize>, RepError> {
        if !self.has_prefix(i, lambda) {
            return Ok(None);
        }
        match &self.elements {
            Elements::Fock { paths, index, .. } => {
                let (_, tail) = self.graph.factor(&paths[i], lambda.degree())?;
                Ok(index.get(&tail).copied())
            }
            Elements::Boundary { handles, .. } => self.locate(&handles[i].shift(lambda.degree())?),
        }
    }

    /// `ξ_{μy}` for `ξ_i = ξ_{νy}`: the compression of `t_μ t*_ν` to the basis,
    /// which does not require `y` itself to be in the basis.
    pub fn span_target(&self, mu: &Path, nu: &Path, i: usize) -> Result<Option<usize>, RepError> {
        if mu.source() != nu.source() || !self.has_prefix(i, nu) {
            return Ok(None);
        }
        match &self.elements {
            Elements::Fock { cap, paths, index } => {
                let (_, y) = self.graph.factor(&paths[i], nu.degree())?;
                if !mu.degree().add(y.degree()).le(cap) {
                    return Ok(None);
                }
                Ok(index.get(&self.graph.compose(mu, &y)?).copied())
            }
            Elements::Boundary { handles, .. } => {
                let y = handles[i].shift(nu.degree())?;
                self.locate(&y.extend(mu)?)
            }
        }
    }

    /// The (truncated) generator `T_λ`.
    pub fn generator(&self, lambda: &Path) -> Result<OperatorMatrix<i64>, RepError> {
        let mut entries = Vec::new();
        for i in 0..self.dim() {
            if let Some(j) = self.apply(lambda, i)? {
                entries.push((j, i, 1));
            }
        }
        Ok(OperatorMatrix::from_triplets(&self.basis, entries))
    }

    /// The compressed spanning element `t_μ t*_ν`, cached.
    pub fn spanning(&self, mu: &Path, nu: &Path) -> Result<Arc<OperatorMatrix<i64>>, RepError> {
        let k = (mu.clone(), nu.clone());
        if let Some(m) = self.spans.read().expect("span cache").get(&k) {
            return Ok(m.clone());
        }
        let mut entries = Vec::new();
        for i in 0..self.dim() {
            if let Some(j) = self.span_target(mu, nu, i)? {
                entries.push((j, i, 1));
            }
        }
        let m = Arc::new(OperatorMatrix::from_triplets(&self.basis, entries));
        self.spans.write().expect("span cache").insert(k, m.clone());
        Ok(m)
    }

    /// The range projection `q_λ = t_λ t*_λ`.
    pub fn q(&self, lambda: &Path) -> Result<Arc<OperatorMatrix<i64>>, RepError> {
        self.spanning(lambda, lambda)
    }

    /// Labels of the basis for JSON output.
    pub fn labels(&self) -> &[String] {
        self.basis.labels()
    }
}
