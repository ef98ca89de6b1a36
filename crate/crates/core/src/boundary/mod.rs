//! Boundary paths: exact finite ones, windowed infinite ones, the boundary
//! condition against minimal finite exhaustive sets, and windowed aperiodicity.

mod handle;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use handle::Substitution;
pub use handle::{BoundaryPath, Provenance};

use crate::alignment::{enumerate_fe, mce};
use crate::degree::{graded_cmp, Degree, ExtDegree};
use crate::graph::{EdgeId, KGraph, Path, PathError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("the graph has cycles, so its boundary is not a finite set of finite paths")]
    GraphHasCycles,
    #[error("substitution has no usable fixed point: {0}")]
    NoFixedPoint(String),
    #[error("letter sequences are only defined for 1-graphs")]
    NotOneGraph,
    #[error("invalid substitution rules: {0}")]
    InvalidRules(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("window ({n}, {m}) exceeds the degree {degree}")]
    DegreeExceeded { n: Degree, m: Degree, degree: ExtDegree },
    #[error("`{path}` does not end where `{handle}` starts")]
    NotComposable { path: String, handle: String },
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Every boundary path of a graph with finitely many paths, in path order.
/// A finite path `λ` is a boundary path iff for each `n <= d(λ)` the paths
/// at `λ(n)` that are not prefixes of `σ^n(λ)` do not form an exhaustive set.
pub fn finite_boundary_paths(g: &Arc<KGraph>) -> Result<Vec<BoundaryPath>, BoundaryError> {
    let max = g.max_path_degree().ok_or(BoundaryError::GraphHasCycles)?;
    let all = g.paths_up_to(&max, None, None);
    let mut from: BTreeMap<VertexId, Vec<&Path>> = BTreeMap::new();
    for p in &all {
        from.entry(p.range()).or_default().push(p);
    }
    let is_boundary = |lambda: &Path| {
        lambda.degree().down_set().iter().all(|n| {
            let tail = g.segment(lambda, n, lambda.degree()).expect("n <= d(λ)");
            let v = tail.range();
            let prefixes: BTreeSet<Path> = tail
                .degree()
                .down_set()
                .iter()
                .map(|m| g.segment(&tail, &Degree::zero(g.rank()), m).expect("m <= d"))
                .collect();
            let rest: Vec<&Path> = from[&v].iter().copied().filter(|p| !prefixes.contains(p)).collect();
            rest.is_empty() || !from[&v].iter().all(|mu| rest.iter().any(|l| !mce(g, mu, l).is_empty()))
        })
    };
    Ok(all.iter().filter(|l| is_boundary(l)).map(|l| BoundaryPath::finite(g.clone(), l.clone())).collect())
}

/// The fixed point of a substitution on the loops of a single-vertex 1-graph,
/// starting with `seed`. `rules` maps each letter to its image word.
pub fn substitution_path(
    g: &Arc<KGraph>,
    rules: &BTreeMap<String, String>,
    seed: &str,
) -> Result<BoundaryPath, BoundaryError> {
    if g.rank() != 1 {
        return Err(BoundaryError::NotOneGraph);
    }
    if g.vertex_count() != 1 {
        return Err(BoundaryError::InvalidRules("substitutions need a single-vertex graph".into()));
    }
    let letter = |name: &str| {
        g.edge_by_name(name).ok_or_else(|| BoundaryError::InvalidRules(format!("unknown letter `{name}`")))
    };
    let seed_id = letter(seed)?;
    let mut table: Vec<Option<Vec<EdgeId>>> = vec![None; g.edge_count()];
    for (from, to) in rules {
        let image = g.parse_path(to).map_err(|e| BoundaryError::InvalidRules(format!("image of `{from}`: {e}")))?;
        if image.is_vertex() {
            return Err(BoundaryError::InvalidRules(format!("image of `{from}` is empty")));
        }
        table[letter(from)?.index()] = Some(image.word().to_vec());
    }
    let image = |e: EdgeId| {
        table[e.index()].clone().ok_or_else(|| BoundaryError::InvalidRules(format!("no rule for `{}`", g.edge(e).name)))
    };
    let seed_image = image(seed_id)?;
    if seed_image[0] != seed_id {
        return Err(BoundaryError::NoFixedPoint(format!("the image of `{seed}` does not start with `{seed}`")));
    }
    if seed_image.len() < 2 {
        return Err(BoundaryError::NoFixedPoint(format!("`{seed}` is mapped to itself")));
    }
    let mut reachable = BTreeSet::from([seed_id]);
    let mut stack = vec![seed_id];
    while let Some(e) = stack.pop() {
        for next in image(e)? {
            if reachable.insert(next) {
                stack.push(next);
            }
        }
    }
    if reachable.len() == 1 {
        return Err(BoundaryError::NoFixedPoint(format!(
            "the fixed point is the constant word `{seed}`...; use a periodic handle"
        )));
    }
    let full: Vec<Vec<EdgeId>> =
        (0..g.edge_count()).map(|i| table[i].clone().unwrap_or_else(|| vec![EdgeId(i as u32)])).collect();
    let label =
        format!("fix({}; {})", seed, rules.iter().map(|(a, b)| format!("{a}->{b}")).collect::<Vec<_>>().join(","));
    Ok(BoundaryPath::from_substitution(g.clone(), Substitution::new(full, seed_id), seed_id, label))
}

/// The Thue-Morse sequence `a → ab, b → ba` on a graph with loops `a` and `b`.
pub fn thue_morse(g: &Arc<KGraph>) -> Result<BoundaryPath, BoundaryError> {
    let rules = BTreeMap::from([("a".to_string(), "ab".to_string()), ("b".to_string(), "ba".to_string())]);
    substitution_path(g, &rules, "a")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryVerdict {
    /// Every `(n, E)` with `n <= W` was met; `instances` pairs were checked.
    Pass {
        instances: usize,
    },
    /// `E` is a finite exhaustive set at `x(n)` that `σ^n(x)` never meets.
    Fail {
        n: Degree,
        e: Vec<Path>,
    },
    Unknown {
        n: Degree,
        reason: String,
    },
}

/// Checks the boundary condition at every `n <= W` (inside `d(x)`) against
/// every minimal finite exhaustive set at `x(n)` with degrees `<= C`.
/// Since members of such sets have degree `<= C`, only `m <= C` can meet them
/// and the verdict for each `(n, E)` is exact.
pub fn check_boundary_condition(x: &BoundaryPath, window: &Degree, fe_cap: &Degree, budget: usize) -> BoundaryVerdict {
    let g = x.graph();
    let mut instances = 0;
    for n in window.down_set() {
        if !x.degree().contains(&n) {
            continue;
        }
        let v = match x.vertex_at(&n) {
            Ok(v) => v,
            Err(e) => return BoundaryVerdict::Unknown { n, reason: e.to_string() },
        };
        let sets = match enumerate_fe(g, v, fe_cap, budget) {
            Ok(s) => s,
            Err(e) => return BoundaryVerdict::Unknown { n, reason: e.to_string() },
        };
        let reach = x.degree().checked_sub(&n).expect("n <= d(x)").clamp(fe_cap);
        let segments: BTreeSet<Path> =
            reach.down_set().iter().map(|m| x.window(&n, &n.add(m)).expect("within d(x)")).collect();
        for e in sets {
            instances += 1;
            if !e.iter().any(|l| segments.contains(l)) {
                return BoundaryVerdict::Fail { n, e };
            }
        }
    }
    BoundaryVerdict::Pass { instances }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WindowCheck {
    Pass {
        pairs: usize,
    },
    /// `σ^m(x)` and `σ^n(x)` agree on range, degree and the width-`W` window.
    Fail {
        m: Degree,
        n: Degree,
    },
}

/// Compares all shifts `σ^m(x)`, `σ^n(x)` with `m ≠ n <= S` on windows of width `W`.
pub fn aperiodicity_window_check(x: &BoundaryPath, shift_bound: &Degree, width: &Degree) -> WindowCheck {
    let mut shifts: Vec<(Degree, BoundaryPath)> = shift_bound
        .down_set()
        .into_iter()
        .filter(|m| x.degree().contains(m))
        .map(|m| {
            let s = x.shift(&m).expect("m <= d(x)");
            (m, s)
        })
        .collect();
    shifts.sort_by(|a, b| graded_cmp(&a.0, &b.0));
    let mut pairs = 0;
    for j in 0..shifts.len() {
        for i in 0..j {
            pairs += 1;
            if shifts[i].1.window_eq(&shifts[j].1, width) {
                return WindowCheck::Fail { m: shifts[i].0.clone(), n: shifts[j].0.clone() };
            }
        }
    }
    WindowCheck::Pass { pairs }
}
