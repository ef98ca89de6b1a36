//! Separating systems: for an MCE-closed `F`, the enlarged family `F̄`, the
//! extensions `α^λ`, `τ^λ` and the projections `φ_λ` that compress a spanning
//! combination onto its diagonal.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::decomposition::{b_set, exhaustiveness, gap_projection};
use super::family::IsometryFamily;
use super::matrix::OperatorMatrix;
use super::RepError;
use crate::alignment::{mce, vee, Exhaustiveness};
use crate::aperiodicity::separate_family;
use crate::degree::Degree;
use crate::graph::{KGraph, Path, VertexId};

/// Which projection `φ_λ` is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Phi {
    /// `q_{λα^λτ^λ}`.
    Range(Path),
    /// `Q^{∨F̄}_λ`.
    Gap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingEntry {
    pub lambda: Path,
    pub b_set: Vec<Path>,
    pub b_exhaustive: bool,
    pub alpha1: Option<Path>,
    pub alpha: Option<Path>,
    /// `α^λ = α₁α`.
    pub alpha_lambda: Option<Path>,
    pub tau: Option<Path>,
    pub phi: Phi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingSystem {
    pub f: Vec<Path>,
    pub f_prime: Vec<Path>,
    pub f_bar: Vec<Path>,
    pub vee_f_bar: Vec<Path>,
    pub entries: BTreeMap<Path, SeparatingEntry>,
    pub g_set: Vec<Path>,
    pub taus: BTreeMap<VertexId, Path>,
}

fn tail(g: &KGraph, whole: &Path, head: &Path) -> Path {
    g.factor(whole, head.degree()).expect("head is a prefix").1
}

/// `F' = ⋃ {λβ', λδ' : λ = μβ = νδ ∈ MCE(μ,ν), ββ' = δδ' ∈ MCE(β,δ)}`.
fn f_prime(g: &KGraph, f: &[Path]) -> Vec<Path> {
    let mut out = Vec::new();
    for mu in f {
        for nu in f {
            for lambda in mce(g, mu, nu) {
                let (beta, delta) = (tail(g, &lambda, mu), tail(g, &lambda, nu));
                for ext in mce(g, &beta, &delta) {
                    let (bp, dp) = (tail(g, &ext, &beta), tail(g, &ext, &delta));
                    out.push(g.compose(&lambda, &bp).expect("composable"));
                    out.push(g.compose(&lambda, &dp).expect("composable"));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Builds the system for an MCE-closed `F`. Separating extensions `τ_v` are
/// searched up to `tau_depth`.
pub fn build_separating_system(g: &KGraph, f: &[Path], tau_depth: &Degree) -> Result<SeparatingSystem, RepError> {
    let mut f = f.to_vec();
    f.sort();
    f.dedup();
    if vee(g, &f) != f {
        return Err(RepError::NotMceClosed);
    }
    let fp = f_prime(g, &f);
    let mut f_bar: Vec<Path> = f.iter().chain(&fp).cloned().collect();
    f_bar.sort();
    f_bar.dedup();
    let vf = vee(g, &f_bar);
    let top = vf.iter().fold(Degree::zero(g.rank()), |acc, p| acc.join(p.degree()));

    let mut entries = BTreeMap::new();
    for lambda in &f {
        let b = b_set(g, lambda, &vf);
        let mut entry = SeparatingEntry {
            lambda: lambda.clone(),
            b_set: b.clone(),
            b_exhaustive: true,
            alpha1: None,
            alpha: None,
            alpha_lambda: None,
            tau: None,
            phi: Phi::Gap,
        };
        if let Exhaustiveness::Failing { .. } = exhaustiveness(g, lambda.source(), &b)? {
            entry.b_exhaustive = false;
            let bound = b.iter().fold(Degree::zero(g.rank()), |acc, p| acc.join(p.degree()));
            let mut candidates = g.paths_up_to(&bound, Some(lambda.source()), None);
            candidates.sort();
            let alpha1 = candidates
                .into_iter()
                .find(|a1| b.iter().all(|mu| mce(g, mu, a1).is_empty()))
                .ok_or_else(|| RepError::InvariantViolation(format!("no α₁ for {}", g.path_name(lambda))))?;
            let alpha = greedy_extension(g, alpha1.source(), &top);
            entry.alpha_lambda = Some(g.compose(&alpha1, &alpha)?);
            entry.alpha1 = Some(alpha1);
            entry.alpha = Some(alpha);
        }
        entries.insert(lambda.clone(), entry);
    }

    // G = {ε : λα^λ = με, μ ∈ ∨F̄}.
    let mut g_set = Vec::new();
    for entry in entries.values() {
        if let Some(al) = &entry.alpha_lambda {
            let whole = g.compose(&entry.lambda, al)?;
            for mu in &vf {
                if g.has_prefix(&whole, mu) {
                    g_set.push(tail(g, &whole, mu));
                }
            }
        }
    }
    g_set.sort();
    g_set.dedup();

    let mut by_source: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
    for eps in &g_set {
        by_source.entry(eps.source()).or_default().push(eps.clone());
    }
    let mut taus = BTreeMap::new();
    for (v, family) in &by_source {
        let tau = separate_family(g, family, tau_depth)?
            .ok_or_else(|| RepError::SeparationSearchExhausted(tau_depth.clone()))?;
        taus.insert(*v, tau);
    }
    for entry in entries.values_mut() {
        if let Some(al) = &entry.alpha_lambda {
            let tau = taus[&al.source()].clone();
            let full = g.compose(&g.compose(&entry.lambda, al)?, &tau)?;
            entry.tau = Some(tau);
            entry.phi = Phi::Range(full);
        }
    }

    let system = SeparatingSystem { f, f_prime: fp, f_bar, vee_f_bar: vf, entries, g_set, taus };
    system.post_check(g)?;
    Ok(system)
}

/// Extends from `v` by the first available edge of the lowest color still
/// below `top`, until every color is at `top` or has no edge to follow.
fn greedy_extension(g: &KGraph, v: VertexId, top: &Degree) -> Path {
    let mut alpha = g.vertex_path(v);
    loop {
        let next = (0..g.rank()).find_map(|c| {
            if alpha.degree().get(c) >= top.get(c) {
                return None;
            }
            g.edges_with_range(alpha.source(), c).first().copied()
        });
        match next {
            Some(e) => alpha = g.compose(&alpha, &g.edge_path(e)).expect("edge continues α"),
            None => return alpha,
        }
    }
}

impl SeparatingSystem {
    fn post_check(&self, g: &KGraph) -> Result<(), RepError> {
        let fail = |msg: String| Err(RepError::InvariantViolation(msg));
        for entry in self.entries.values() {
            let Some(al) = &entry.alpha_lambda else { continue };
            let name = g.path_name(&entry.lambda);
            if entry.b_set.iter().any(|mu| !mce(g, mu, al).is_empty()) {
                return fail(format!("α^{name} has a common extension with a member of B"));
            }
            let whole = g.compose(&entry.lambda, al)?;
            for mu in &self.vee_f_bar {
                if !mce(g, &whole, mu).is_empty() && !g.has_prefix(&whole, mu) {
                    return fail(format!("λα^λ for λ = {name} is not long enough for {}", g.path_name(mu)));
                }
            }
            let tau = entry.tau.as_ref().expect("τ set with α");
            let family: Vec<&Path> = self.g_set.iter().filter(|e| e.source() == al.source()).collect();
            for (i, x) in family.iter().enumerate() {
                for y in &family[..i] {
                    let (xt, yt) = (g.compose(x, tau)?, g.compose(y, tau)?);
                    if !mce(g, &xt, &yt).is_empty() {
                        return fail(format!("τ^{name} does not separate G"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Join of the degrees of `∨F̄` and every `λα^λτ^λ`.
    pub fn max_degree(&self, rank: usize) -> Degree {
        let mut d = self.vee_f_bar.iter().fold(Degree::zero(rank), |acc, p| acc.join(p.degree()));
        for entry in self.entries.values() {
            if let Phi::Range(p) = &entry.phi {
                d = d.join(p.degree());
            }
        }
        d
    }

    /// The matrix of `φ_λ` in a family.
    pub fn phi_matrix(&self, fam: &IsometryFamily, lambda: &Path) -> Result<OperatorMatrix<i64>, RepError> {
        let entry = self
            .entries
            .get(lambda)
            .ok_or_else(|| RepError::InvariantViolation(format!("{} is not in F", fam.graph().path_name(lambda))))?;
        match &entry.phi {
            Phi::Range(p) => Ok((*fam.q(p)?).clone()),
            Phi::Gap => gap_projection(fam, lambda, &self.vee_f_bar),
        }
    }

    pub fn to_json(&self, g: &KGraph) -> Value {
        let names = |ps: &[Path]| ps.iter().map(|p| g.path_name(p)).collect::<Vec<_>>();
        let opt = |p: &Option<Path>| p.as_ref().map(|p| g.path_name(p));
        let entries: Vec<Value> = self
            .entries
            .values()
            .map(|e| {
                json!({
                    "lambda": g.path_name(&e.lambda),
                    "b_set": names(&e.b_set),
                    "b_exhaustive": e.b_exhaustive,
                    "alpha1": opt(&e.alpha1),
                    "alpha": opt(&e.alpha),
                    "alpha_lambda": opt(&e.alpha_lambda),
                    "tau": opt(&e.tau),
                    "phi": match &e.phi {
                        Phi::Range(p) => json!({"q": g.path_name(p)}),
                        Phi::Gap => json!("gap"),
                    },
                })
            })
            .collect();
        json!({
            "f": names(&self.f),
            "f_prime": names(&self.f_prime),
            "vee_f_bar": names(&self.vee_f_bar),
            "g_set": names(&self.g_set),
            "taus": self.taus.iter().map(|(v, t)| (g.vertex_name(*v).to_string(), json!(g.path_name(t)))).collect::<serde_json::Map<_, _>>(),
            "entries": entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_bouquet, make_omega};

    fn paths(g: &KGraph, names: &[&str]) -> Vec<Path> {
        names.iter().map(|s| g.parse_path(s).unwrap()).collect()
    }

    #[test]
    fn bouquet_pair() {
        let g = make_bouquet(2);
        let s = build_separating_system(&g, &paths(&g, &["a", "b"]), &Degree::from_coords(vec![6])).unwrap();
        let a = g.parse_path("a").unwrap();
        let e = &s.entries[&a];
        assert!(!e.b_exhaustive);
        assert!(e.b_set.is_empty());
        assert_eq!(e.phi, Phi::Range(g.parse_path("aa").unwrap()));
    }

    #[test]
    fn bouquet_vertex() {
        let g = make_bouquet(2);
        let s = build_separating_system(&g, &paths(&g, &["v"]), &Degree::from_coords(vec![6])).unwrap();
        assert_eq!(s.g_set.len(), 1);
        assert!(s.taus.values().all(|t| t.is_vertex()));
    }

    #[test]
    fn bouquet_seven() {
        let g = make_bouquet(2);
        let f = paths(&g, &["v", "a", "b", "aa", "ab", "ba", "bb"]);
        let s = build_separating_system(&g, &f, &Degree::from_coords(vec![10])).unwrap();
        assert!(s.max_degree(1).get(0) <= 16, "{}", s.max_degree(1));
    }

    #[test]
    fn omega_takes_gap_branch() {
        let g = make_omega(2, &Degree::from_coords(vec![2, 2]));
        let f = paths(&g, &["(0,0)-(1,0)"]);
        let s = build_separating_system(&g, &f, &Degree::from_coords(vec![2, 2])).unwrap();
        let e = &s.entries[&f[0]];
        assert!(e.b_exhaustive || e.alpha_lambda.is_some());
    }

    #[test]
    fn requires_mce_closure() {
        let g = make_omega(2, &Degree::from_coords(vec![1, 1]));
        let f = paths(&g, &["(0,0)-(1,0)", "(0,0)-(0,1)"]);
        assert_eq!(
            build_separating_system(&g, &f, &Degree::from_coords(vec![1, 1])).unwrap_err(),
            RepError::NotMceClosed
        );
    }
}
