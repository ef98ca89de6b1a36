//! Bounded searches for separating extensions: `τ ∈ s(μ)Λ` with
//! `MCE(μτ, ντ) = ∅`, for pairs and for whole families at once.

use serde_json::{json, Value};
use thiserror::Error;

use crate::alignment::{mce, oracle::mce_brute};
use crate::degree::Degree;
use crate::graph::{KGraph, Path};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AperiodicityError {
    #[error("paths `{0}` and `{1}` have different sources")]
    SourceMismatch(String, String),
    #[error("family members do not share a source")]
    MixedSources,
    #[error("family is empty")]
    EmptyFamily,
    #[error("search returned `{tau}` for `{mu}`, `{nu}` but the reference check disagrees")]
    OracleDisagreement { mu: String, nu: String, tau: String },
}

fn separates(g: &KGraph, mu: &Path, nu: &Path, tau: &Path) -> bool {
    let mt = g.compose(mu, tau).expect("τ starts at the common source");
    let nt = g.compose(nu, tau).expect("τ starts at the common source");
    mce(g, &mt, &nt).is_empty()
}

fn confirm(g: &KGraph, pairs: &[(&Path, &Path)], tau: &Path) -> Result<(), AperiodicityError> {
    for (mu, nu) in pairs {
        let mt = g.compose(mu, tau).expect("composable");
        let nt = g.compose(nu, tau).expect("composable");
        if !mce_brute(g, &mt, &nt).is_empty() {
            return Err(AperiodicityError::OracleDisagreement {
                mu: g.path_name(mu),
                nu: g.path_name(nu),
                tau: g.path_name(tau),
            });
        }
    }
    Ok(())
}

/// The first `τ` in graded-lexicographic order with `d(τ) <= depth` that
/// separates `μ` and `ν`. The answer is re-checked by the brute-force MCE.
pub fn find_separating_extension(
    g: &KGraph,
    mu: &Path,
    nu: &Path,
    depth: &Degree,
) -> Result<Option<Path>, AperiodicityError> {
    if mu.source() != nu.source() {
        return Err(AperiodicityError::SourceMismatch(g.path_name(mu), g.path_name(nu)));
    }
    let found = g.paths_up_to(depth, Some(mu.source()), None).into_iter().find(|tau| separates(g, mu, nu, tau));
    if let Some(tau) = &found {
        confirm(g, &[(mu, nu)], tau)?;
    }
    Ok(found)
}

/// One `τ ∈ vΛ` with `MCE(μτ, ντ) = ∅` for all distinct `μ, ν ∈ H ⊆ Λv`.
pub fn separate_family(g: &KGraph, family: &[Path], depth: &Degree) -> Result<Option<Path>, AperiodicityError> {
    let first = family.first().ok_or(AperiodicityError::EmptyFamily)?;
    if family.iter().any(|p| p.source() != first.source()) {
        return Err(AperiodicityError::MixedSources);
    }
    let mut distinct: Vec<&Path> = family.iter().collect();
    distinct.sort();
    distinct.dedup();
    let pairs: Vec<(&Path, &Path)> = (0..distinct.len())
        .flat_map(|j| (0..j).map(move |i| (j, i)))
        .map(|(j, i)| (distinct[j], distinct[i]))
        .collect();
    let found = g
        .paths_up_to(depth, Some(first.source()), None)
        .into_iter()
        .find(|tau| pairs.iter().all(|(mu, nu)| separates(g, mu, nu, tau)));
    if let Some(tau) = &found {
        confirm(g, &pairs, tau)?;
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AperiodicityStatus {
    /// Every scanned pair was separated, but the scan was not exhaustive.
    AperiodicEvidence,
    /// The graph has finitely many paths and every pair was separated.
    AperiodicCertified,
    /// No `τ` within the depth bound separates this pair.
    PeriodicEvidence { mu: Path, nu: Path },
    /// The pair budget ran out before the scan finished.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOutcome {
    pub mu: Path,
    pub nu: Path,
    pub tau: Option<Path>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperiodicityReport {
    pub pair_bound: Degree,
    pub tau_bound: Degree,
    /// Bounds actually used; raised to the largest path degree for graphs
    /// with finitely many paths so the scan covers everything.
    pub effective_pair_bound: Degree,
    pub effective_tau_bound: Degree,
    pub finite_graph: bool,
    pub pairs_total: usize,
    pub outcomes: Vec<PairOutcome>,
    pub status: AperiodicityStatus,
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub max_pairs: usize,
    pub exec: Execution,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { max_pairs: 200_000, exec: Execution::default() }
    }
}

/// Scans all pairs `μ ≠ ν` with a common source and degrees `<= pair_bound`.
/// Pairs are visited as `(μ, ν)` with `ν` before `μ` in path order; the first
/// unseparated pair becomes the periodicity evidence.
pub fn aperiodicity_report(
    g: &KGraph,
    pair_bound: &Degree,
    tau_bound: &Degree,
    options: ReportOptions,
) -> Result<AperiodicityReport, AperiodicityError> {
    let max = g.max_path_degree();
    let finite = max.is_some();
    let (p_eff, t_eff) = match &max {
        Some(m) => (m.clone(), m.clone()),
        None => (pair_bound.clone(), tau_bound.clone()),
    };
    let paths = g.paths_up_to(&p_eff, None, None);
    let mut pairs = Vec::new();
    for j in 0..paths.len() {
        for i in 0..j {
            if paths[i].source() == paths[j].source() {
                pairs.push((j, i));
            }
        }
    }
    let pairs_total = pairs.len();
    let truncated = pairs_total > options.max_pairs;
    pairs.truncate(options.max_pairs);

    let taus = options.exec.map(&pairs, |&(j, i)| {
        g.paths_up_to(&t_eff, Some(paths[j].source()), None)
            .into_iter()
            .find(|tau| separates(g, &paths[j], &paths[i], tau))
    });
    let mut outcomes = Vec::with_capacity(pairs.len());
    for (&(j, i), tau) in pairs.iter().zip(taus) {
        if let Some(tau) = &tau {
            confirm(g, &[(&paths[j], &paths[i])], tau)?;
        }
        outcomes.push(PairOutcome { mu: paths[j].clone(), nu: paths[i].clone(), tau });
    }
    let status = match outcomes.iter().find(|o| o.tau.is_none()) {
        Some(o) => AperiodicityStatus::PeriodicEvidence { mu: o.mu.clone(), nu: o.nu.clone() },
        None if truncated => AperiodicityStatus::Inconclusive,
        None if finite => AperiodicityStatus::AperiodicCertified,
        None => AperiodicityStatus::AperiodicEvidence,
    };
    Ok(AperiodicityReport {
        pair_bound: pair_bound.clone(),
        tau_bound: tau_bound.clone(),
        effective_pair_bound: p_eff,
        effective_tau_bound: t_eff,
        finite_graph: finite,
        pairs_total,
        outcomes,
        status,
    })
}

impl AperiodicityReport {
    pub fn status_json(&self, g: &KGraph) -> Value {
        match &self.status {
            AperiodicityStatus::AperiodicEvidence => json!({"kind": "aperiodic_evidence"}),
            AperiodicityStatus::AperiodicCertified => json!({"kind": "aperiodic_certified"}),
            AperiodicityStatus::PeriodicEvidence { mu, nu } => {
                json!({"kind": "periodic_evidence", "mu": g.path_name(mu), "nu": g.path_name(nu)})
            }
            AperiodicityStatus::Inconclusive => json!({"kind": "inconclusive"}),
        }
    }

    pub fn to_json(&self, g: &KGraph) -> Value {
        json!({
            "pair_bound": self.pair_bound.coords(),
            "tau_bound": self.tau_bound.coords(),
            "effective_pair_bound": self.effective_pair_bound.coords(),
            "effective_tau_bound": self.effective_tau_bound.coords(),
            "finite_graph": self.finite_graph,
            "pairs_total": self.pairs_total,
            "pairs_scanned": self.outcomes.len(),
            "status": self.status_json(g),
            "pairs": self.outcomes.iter().map(|o| json!({
                "mu": g.path_name(&o.mu),
                "nu": g.path_name(&o.nu),
                "tau": o.tau.as_ref().map(|t| g.path_name(t)),
            })).collect::<Vec<_>>(),
        })
    }
}
