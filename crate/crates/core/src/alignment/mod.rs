//! Minimal common extensions, the `∨F` closure, exhaustive sets and
//! enumeration of minimal finite exhaustive sets.

pub mod oracle;

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::degree::Degree;
use crate::graph::{KGraph, Path, VertexId};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("the empty set is never exhaustive at a vertex with edges; pass at least one path")]
    EmptyE,
    #[error("path `{0}` does not start at the requested vertex")]
    NotFromVertex(String),
    #[error("exhaustivity is only decided for locally convex graphs")]
    NotLocallyConvex,
    #[error("finite exhaustive set search exceeded its budget of {0} nodes")]
    CapTooLargeForBudget(usize),
}

/// `MCE(μ, ν)`: common extensions of degree `d(μ) ∨ d(ν)`, sorted.
pub fn mce(g: &KGraph, mu: &Path, nu: &Path) -> Vec<Path> {
    if mu.range() != nu.range() {
        return Vec::new();
    }
    // Extend the path whose complement degree is smaller; fewer candidates.
    let join = mu.degree().join(nu.degree());
    let (ext, other) = if mu.degree().total() >= nu.degree().total() { (mu, nu) } else { (nu, mu) };
    let rest = join.checked_sub(ext.degree()).expect("join dominates");
    let mut out: Vec<Path> = g
        .paths_of_degree(&rest, Some(ext.source()), None)
        .iter()
        .map(|tail| g.compose(ext, tail).expect("tail starts at the source"))
        .filter(|lambda| g.has_prefix(lambda, other))
        .collect();
    out.sort();
    out
}

/// `MCE(F)`; empty for empty `F`.
pub fn mce_set(g: &KGraph, family: &[Path]) -> Vec<Path> {
    let Some((first, rest)) = family.split_first() else {
        return Vec::new();
    };
    let mut current = vec![first.clone()];
    for alpha in rest {
        let next: BTreeSet<Path> = current.iter().flat_map(|lambda| mce(g, lambda, alpha)).collect();
        current = next.into_iter().collect();
        if current.is_empty() {
            break;
        }
    }
    current
}

/// `∨F`: the union of `MCE(G)` over the nonempty subsets `G ⊆ F`, sorted.
pub fn vee(g: &KGraph, family: &[Path]) -> Vec<Path> {
    let items: Vec<Path> = family.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = BTreeSet::new();
    for (i, p) in items.iter().enumerate() {
        vee_from(g, &items, i + 1, vec![p.clone()], &mut out);
    }
    out.into_iter().collect()
}

/// Depth-first over subsets containing the current chosen set; a subset with
/// empty MCE has no nonempty supersets, so the branch is cut.
fn vee_from(g: &KGraph, items: &[Path], next: usize, current: Vec<Path>, out: &mut BTreeSet<Path>) {
    out.extend(current.iter().cloned());
    for j in next..items.len() {
        let extended: BTreeSet<Path> = current.iter().flat_map(|lambda| mce(g, lambda, &items[j])).collect();
        if !extended.is_empty() {
            vee_from(g, items, j + 1, extended.into_iter().collect(), out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlignmentCertificate {
    pub finitely_aligned: bool,
    pub cap: Degree,
    pub pairs_checked: usize,
    pub max_mce: usize,
    /// A pair attaining `max_mce`, as path names.
    pub witness: Option<(String, String)>,
}

/// Finite presentations are always finitely aligned; the certificate records
/// the largest `|MCE(μ, ν)|` over all pairs with degrees `<= cap`.
pub fn is_finitely_aligned(g: &KGraph, cap: &Degree, exec: Execution) -> AlignmentCertificate {
    let paths = g.paths_up_to(cap, None, None);
    let per_path = exec.map_range(paths.len(), |i| {
        let mut best = (0usize, 0usize, i);
        let mut count = 0;
        for (j, nu) in paths.iter().enumerate().skip(i) {
            if nu.range() != paths[i].range() {
                continue;
            }
            count += 1;
            let size = mce(g, &paths[i], nu).len();
            if size > best.0 {
                best = (size, i, j);
            }
        }
        (best, count)
    });
    let pairs_checked = per_path.iter().map(|(_, c)| c).sum();
    let best = per_path.iter().map(|(b, _)| *b).fold((0, 0, 0), |acc, b| if b.0 > acc.0 { b } else { acc });
    AlignmentCertificate {
        finitely_aligned: true,
        cap: cap.clone(),
        pairs_checked,
        max_mce: best.0,
        witness: (best.0 > 0).then(|| (g.path_name(&paths[best.1]), g.path_name(&paths[best.2]))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exhaustiveness {
    Exhaustive,
    /// `μ ∈ vΛ` with `MCE(μ, λ) = ∅` for every `λ ∈ E`.
    Failing {
        witness: Path,
    },
}

impl Exhaustiveness {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, Exhaustiveness::Exhaustive)
    }
}

/// Paths in `vΛ` with degree `<= bound` that cannot be extended by an edge
/// without leaving the bound. Every degree-`bound` path is among them.
pub fn maximal_paths(g: &KGraph, v: VertexId, bound: &Degree) -> Vec<Path> {
    g.paths_up_to(bound, Some(v), None)
        .into_iter()
        .filter(|mu| {
            (0..g.rank()).all(|c| mu.degree().get(c) >= bound.get(c) || g.edges_with_range(mu.source(), c).is_empty())
        })
        .collect()
}

/// Decides whether `E ⊆ vΛ` is exhaustive. The verdict is computed on the
/// maximal paths of `vΛ` below `D = ⋁ d(λ)`, which is complete for locally
/// convex graphs.
pub fn is_exhaustive(g: &KGraph, v: VertexId, e: &[Path]) -> Result<Exhaustiveness, AlignmentError> {
    if e.is_empty() {
        return Err(AlignmentError::EmptyE);
    }
    if let Some(bad) = e.iter().find(|l| l.range() != v) {
        return Err(AlignmentError::NotFromVertex(g.path_name(bad)));
    }
    if !g.is_locally_convex() {
        return Err(AlignmentError::NotLocallyConvex);
    }
    let bound = e.iter().fold(Degree::zero(g.rank()), |acc, l| acc.join(l.degree()));
    for mu in maximal_paths(g, v, &bound) {
        if !e.iter().any(|lambda| !mce(g, &mu, lambda).is_empty()) {
            return Ok(Exhaustiveness::Failing { witness: mu });
        }
    }
    Ok(Exhaustiveness::Exhaustive)
}

/// Node budget for [`enumerate_fe`].
pub const DEFAULT_FE_BUDGET: usize = 1_000_000;

/// All inclusion-minimal exhaustive sets `E ⊆ vΛ` with every degree `<= cap`,
/// each sorted, ordered by size then lexicographically.
pub fn enumerate_fe(g: &KGraph, v: VertexId, cap: &Degree, budget: usize) -> Result<Vec<Vec<Path>>, AlignmentError> {
    if !g.is_locally_convex() {
        return Err(AlignmentError::NotLocallyConvex);
    }
    let candidates = g.paths_up_to(cap, Some(v), None);
    // A set is exhaustive iff it meets the compatibility row of every
    // maximal path below the cap.
    let mut rows: Vec<FixedBitSet> = maximal_paths(g, v, cap)
        .iter()
        .map(|mu| {
            let mut row = FixedBitSet::with_capacity(candidates.len());
            for (i, lambda) in candidates.iter().enumerate() {
                if !mce(g, mu, lambda).is_empty() {
                    row.insert(i);
                }
            }
            row
        })
        .collect();
    rows.sort_by_key(|r| r.count_ones(..));
    rows.dedup();
    let rows: Vec<FixedBitSet> = rows
        .iter()
        .enumerate()
        .filter(|(i, r)| !rows[..*i].iter().any(|s| s.is_subset(r)))
        .map(|(_, r)| r.clone())
        .collect();

    let mut search = HittingSets { rows: &rows, n: candidates.len(), nodes: 0, budget, found: Vec::new() };
    search.run(&mut Vec::new(), &mut FixedBitSet::with_capacity(candidates.len()))?;

    let mut out: Vec<Vec<Path>> =
        search.found.into_iter().map(|set| set.into_iter().map(|i| candidates[i].clone()).collect()).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Minimal hitting sets by branching on an unhit row, forbidding elements
/// already tried at a node so each set is produced once, and pruning chosen
/// elements that lose every row they alone hit.
struct HittingSets<'a> {
    rows: &'a [FixedBitSet],
    n: usize,
    nodes: usize,
    budget: usize,
    found: Vec<Vec<usize>>,
}

impl HittingSets<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, forbidden: &mut FixedBitSet) -> Result<(), AlignmentError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(AlignmentError::CapTooLargeForBudget(self.budget));
        }
        if !self.every_choice_critical(chosen) {
            return Ok(());
        }
        let unhit = self.rows.iter().filter(|r| !chosen.iter().any(|&c| r.contains(c))).min_by_key(|r| {
            let mut avail = (*r).clone();
            avail.difference_with(forbidden);
            avail.count_ones(..)
        });
        let Some(row) = unhit else {
            let mut set = chosen.clone();
            set.sort_unstable();
            self.found.push(set);
            return Ok(());
        };
        let options: Vec<usize> = row.ones().filter(|&i| !forbidden.contains(i)).collect();
        let saved = forbidden.clone();
        for i in options {
            chosen.push(i);
            self.run(chosen, forbidden)?;
            chosen.pop();
            forbidden.insert(i);
        }
        *forbidden = saved;
        Ok(())
    }

    fn every_choice_critical(&self, chosen: &[usize]) -> bool {
        debug_assert!(chosen.iter().all(|&c| c < self.n));
        chosen
            .iter()
            .all(|&c| self.rows.iter().any(|r| r.contains(c) && chosen.iter().all(|&o| o == c || !r.contains(o))))
    }
}
