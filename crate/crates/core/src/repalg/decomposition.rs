//! Gap projections `Q^{∨F}_λ = q_λ ∏ (q_λ − q_{λα})` and the norm formula for
//! diagonal elements.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::json;

use super::family::IsometryFamily;
use super::matrix::OperatorMatrix;
use super::report::{exact_check, CheckResult, CheckStatus};
use super::RepError;
use crate::alignment::{is_exhaustive, vee, Exhaustiveness};
use crate::degree::Degree;
use crate::graph::{KGraph, Path, VertexId};

/// `q_λ ∏_{μ ∈ family, μ = λα ≠ λ} (q_λ − q_μ)`.
pub fn gap_projection(fam: &IsometryFamily, lambda: &Path, family: &[Path]) -> Result<OperatorMatrix<i64>, RepError> {
    let g = fam.graph();
    let q = fam.q(lambda)?;
    let mut out = (*q).clone();
    for mu in family {
        if mu != lambda && g.has_prefix(mu, lambda) {
            out = out.mul(&q.sub(&*fam.q(mu)?));
        }
    }
    Ok(out)
}

/// Exhaustiveness of `E ⊆ vΛ`, where the empty set is never exhaustive.
pub(crate) fn exhaustiveness(g: &KGraph, v: VertexId, e: &[Path]) -> Result<Exhaustiveness, RepError> {
    if e.is_empty() {
        return Ok(Exhaustiveness::Failing { witness: g.vertex_path(v) });
    }
    Ok(is_exhaustive(g, v, e)?)
}

/// `B_λ = {α ≠ s(λ) : λα ∈ family}`.
pub(crate) fn b_set(g: &KGraph, lambda: &Path, family: &[Path]) -> Vec<Path> {
    family
        .iter()
        .filter(|mu| *mu != lambda && g.has_prefix(mu, lambda))
        .map(|mu| g.factor(mu, lambda.degree()).expect("λ is a prefix").1)
        .collect()
}

#[derive(Debug, Clone)]
pub struct QDecomposition {
    pub f: Vec<Path>,
    pub vee: Vec<Path>,
    pub q: BTreeMap<Path, OperatorMatrix<i64>>,
    /// Whether `B^{∨F}_λ` is exhaustive; `None` when undecidable here.
    pub b_exhaustive: BTreeMap<Path, Option<bool>>,
    pub checks: Vec<CheckResult>,
}

fn require_source_closed(g: &KGraph, f: &[Path]) -> Result<(), RepError> {
    for lambda in f {
        if !f.contains(&g.source_vertex(lambda)) {
            return Err(RepError::SourceClosureViolation(g.path_name(lambda)));
        }
    }
    Ok(())
}

fn sorted(f: &[Path]) -> Vec<Path> {
    let mut f = f.to_vec();
    f.sort();
    f.dedup();
    f
}

/// Computes `∨F` and every `Q^{∨F}_λ`, and checks that they are mutually
/// orthogonal projections with `q_μ = Σ_{μμ' ∈ ∨F} Q_{μμ'}`.
pub fn q_decomposition(fam: &IsometryFamily, f: &[Path]) -> Result<QDecomposition, RepError> {
    let g = fam.graph();
    let f = sorted(f);
    require_source_closed(g, &f)?;
    let vf = vee(g, &f);
    let zero = Degree::zero(g.rank());
    let mut q = BTreeMap::new();
    let mut b_exhaustive = BTreeMap::new();
    for lambda in &vf {
        q.insert(lambda.clone(), gap_projection(fam, lambda, &vf)?);
        let b = b_set(g, lambda, &vf);
        let verdict = exhaustiveness(g, lambda.source(), &b).ok().map(|e| e.is_exhaustive());
        b_exhaustive.insert(lambda.clone(), verdict);
    }
    let name = |p: &Path| g.path_name(p);
    let mut checks = Vec::new();
    for (lambda, m) in &q {
        checks.push(exact_check(format!("lem1:projection:{}", name(lambda)), fam, &m.mul(m), m, &zero));
        checks.push(exact_check(format!("lem1:selfadjoint:{}", name(lambda)), fam, &m.adjoint(), m, &zero));
    }
    for (i, (lambda, a)) in q.iter().enumerate() {
        for (mu, b) in q.iter().skip(i + 1) {
            let id = format!("lem1:orthogonal:{},{}", name(lambda), name(mu));
            checks.push(exact_check(id, fam, &a.mul(b), &OperatorMatrix::zeros(fam.basis()), &zero));
        }
    }
    for mu in &vf {
        let mut sum = OperatorMatrix::zeros(fam.basis());
        for (nu, m) in &q {
            if g.has_prefix(nu, mu) {
                sum = sum.add(m);
            }
        }
        checks.push(exact_check(format!("lem1:eq1:{}", name(mu)), fam, &*fam.q(mu)?, &sum, &zero));
    }
    Ok(QDecomposition { f, vee: vf, q, b_exhaustive, checks })
}

/// For each `α ∈ F` whose `B`-set is not exhaustive, exhibits `τ` with
/// `Q^F_α q_{ατ} = q_{ατ} ≠ 0`.
pub fn lem3_check(fam: &IsometryFamily, f: &[Path]) -> Result<Vec<CheckResult>, RepError> {
    let g = fam.graph();
    let f = sorted(f);
    if vee(g, &f) != f {
        return Err(RepError::NotMceClosed);
    }
    for lambda in &f {
        if fam.q(lambda)?.is_zero() {
            return Err(RepError::ZeroProjection(g.path_name(lambda)));
        }
    }
    let mut out = Vec::new();
    for alpha in &f {
        let id = format!("lem3:{}", g.path_name(alpha));
        let b = b_set(g, alpha, &f);
        let tau = match exhaustiveness(g, alpha.source(), &b) {
            Ok(Exhaustiveness::Exhaustive) => {
                out.push(CheckResult::new(id, CheckStatus::NotApplicable));
                continue;
            }
            Ok(Exhaustiveness::Failing { witness }) => witness,
            Err(e) => {
                out.push(CheckResult::new(id, CheckStatus::Inconclusive).with_witness(json!(e.to_string())));
                continue;
            }
        };
        let at = g.compose(alpha, &tau)?;
        if let Some(cap) = fam.cap() {
            if !at.degree().le(cap) {
                return Err(RepError::CapTooSmall { needed: at.degree().clone(), cap: cap.clone() });
            }
        }
        let big = gap_projection(fam, alpha, &f)?;
        let qt = fam.q(&at)?;
        let fixed = big.mul(&qt) == *qt;
        let support = (0..fam.dim()).find(|&i| qt.get(i, i) != 0);
        let witness = json!({"tau": g.path_name(&tau), "vector": support.map(|i| fam.label(i))});
        out.push(if fixed && support.is_some() {
            CheckResult::pass(id).with_witness(witness)
        } else {
            CheckResult::fail(id, witness)
        });
    }
    Ok(out)
}

/// `max_{α ∈ ∨F, Q^{∨F}_α ≠ 0} |Σ_{λ ∈ F, α = λλ'} c_λ|`, where `F` is the
/// support of `c` closed under sources.
pub fn diagonal_norm(fam: &IsometryFamily, c: &BTreeMap<Path, Complex64>) -> Result<f64, RepError> {
    let g = fam.graph();
    let mut f: Vec<Path> = c.iter().filter(|(_, v)| **v != Complex64::new(0.0, 0.0)).map(|(p, _)| p.clone()).collect();
    let sources: Vec<Path> = f.iter().map(|p| g.source_vertex(p)).collect();
    f.extend(sources);
    let f = sorted(&f);
    let vf = vee(g, &f);
    let mut best: f64 = 0.0;
    for alpha in &vf {
        if gap_projection(fam, alpha, &vf)?.is_zero() {
            continue;
        }
        let s: Complex64 = c.iter().filter(|(l, _)| g.has_prefix(alpha, l)).map(|(_, v)| *v).sum();
        best = best.max(s.norm());
    }
    Ok(best)
}
