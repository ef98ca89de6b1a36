//! Relation checks for concrete families: Toeplitz-Cuntz-Krieger relations,
//! the boolean range-projection rule, the compression identities behind the
//! diagonal expectation, and the norm inequalities.

use std::collections::BTreeMap;

use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use serde_json::json;

use super::decomposition::diagonal_norm;
use super::family::{FamilyKind, IsometryFamily};
use super::formal::FormalElement;
use super::matrix::OperatorMatrix;
use super::norm::operator_norm;
use super::report::{exact_check, CheckResult, CheckStatus};
use super::separating::{Phi, SeparatingSystem};
use super::RepError;
use crate::alignment::{enumerate_fe, mce, vee};
use crate::degree::Degree;
use crate::graph::{KGraph, Path};
use crate::par::Execution;

/// Tolerance for numeric norm inequalities that hold exactly in theory.
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Tolerance for the heuristic comparison of truncated representations.
pub const COUNIVERSAL_TOLERANCE: f64 = 0.05;

fn sorted_paths(g: &KGraph, cap: &Degree) -> Vec<Path> {
    let mut p = g.paths_up_to(cap, None, None);
    p.sort();
    p
}

fn generators(
    fam: &IsometryFamily,
    paths: &[Path],
    exec: Execution,
) -> Result<BTreeMap<Path, OperatorMatrix<i64>>, RepError> {
    exec.map(paths, |p| fam.generator(p).map(|m| (p.clone(), m))).into_iter().collect()
}

/// (TCK1)-(TCK3) and the partial-isometry property for all generators of
/// degree at most `gen_cap`, each on the subspace safe for its word length.
pub fn verify_tck(fam: &IsometryFamily, gen_cap: &Degree, exec: Execution) -> Result<Vec<CheckResult>, RepError> {
    let g = fam.graph();
    fam.check_margin(&gen_cap.add(gen_cap))?;
    let paths = sorted_paths(g, gen_cap);
    let t = generators(fam, &paths, exec)?;
    let zero_m = OperatorMatrix::zeros(fam.basis());
    let zero = Degree::zero(g.rank());
    let name = |p: &Path| g.path_name(p);
    let mut out = Vec::new();

    let vertices: Vec<Path> = paths.iter().filter(|p| p.is_vertex()).cloned().collect();
    for (i, u) in vertices.iter().enumerate() {
        let tu = &t[u];
        out.push(exact_check(format!("tck1:projection:{}", name(u)), fam, &tu.mul(tu), tu, &zero));
        out.push(exact_check(format!("tck1:selfadjoint:{}", name(u)), fam, &tu.adjoint(), tu, &zero));
        for w in &vertices[i + 1..] {
            out.push(exact_check(
                format!("tck1:orthogonal:{},{}", name(u), name(w)),
                fam,
                &tu.mul(&t[w]),
                &zero_m,
                &zero,
            ));
        }
    }
    out.extend(exec.map(&paths, |l| {
        let tl = &t[l];
        exact_check(format!("partial_isometry:{}", name(l)), fam, &tl.mul(&tl.adjoint()).mul(tl), tl, l.degree())
    }));

    let mut pairs2 = Vec::new();
    let mut pairs3 = Vec::new();
    for l in &paths {
        for m in &paths {
            if l.source() == m.range() && l.degree().add(m.degree()).le(gen_cap) {
                pairs2.push((l.clone(), m.clone()));
            }
            pairs3.push((l.clone(), m.clone()));
        }
    }
    out.extend(
        exec.map(&pairs2, |(l, m)| -> Result<CheckResult, RepError> {
            let lm = g.compose(l, m)?;
            let margin = lm.degree();
            Ok(exact_check(format!("tck2:{},{}", name(l), name(m)), fam, &t[l].mul(&t[m]), &t[&lm], margin))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?,
    );
    out.extend(
        exec.map(&pairs3, |(mu, nu)| -> Result<CheckResult, RepError> {
            let lhs = t[mu].adjoint().mul(&t[nu]);
            let mut rhs = OperatorMatrix::zeros(fam.basis());
            for lambda in mce(g, mu, nu) {
                let alpha = g.factor(&lambda, mu.degree())?.1;
                let beta = g.factor(&lambda, nu.degree())?.1;
                rhs = rhs.add(&fam.generator(&alpha)?.mul(&fam.generator(&beta)?.adjoint()));
            }
            let margin = mu.degree().add(nu.degree());
            Ok(exact_check(format!("tck3:{},{}", name(mu), name(nu)), fam, &lhs, &rhs, &margin))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?,
    );
    Ok(out)
}

/// (CK) `∏_{λ ∈ E} (t_v − t_λ t*_λ) = 0` for every minimal finite exhaustive
/// set `E` with degrees at most `fe_cap`.
pub fn verify_ck(fam: &IsometryFamily, fe_cap: &Degree, budget: usize) -> Result<Vec<CheckResult>, RepError> {
    let g = fam.graph();
    let zero = Degree::zero(g.rank());
    let mut out = Vec::new();
    for v in g.vertices() {
        let tv = fam.q(&g.vertex_path(v))?;
        for e in enumerate_fe(g, v, fe_cap, budget)? {
            let mut prod = (*tv).clone();
            for lambda in &e {
                prod = prod.mul(&tv.sub(&*fam.q(lambda)?));
            }
            let names: Vec<String> = e.iter().map(|p| g.path_name(p)).collect();
            let id = format!("ck:{}:{{{}}}", g.vertex_name(v), names.join(","));
            out.push(exact_check(id, fam, &prod, &OperatorMatrix::zeros(fam.basis()), &zero));
        }
    }
    Ok(out)
}

/// `q_λ = T_λ T*_λ` and `q_μ q_ν = Σ_{γ ∈ MCE(μ,ν)} q_γ` for degrees up to `cap`.
pub fn boolean_rep(fam: &IsometryFamily, cap: &Degree, exec: Execution) -> Result<Vec<CheckResult>, RepError> {
    let g = fam.graph();
    let paths = sorted_paths(g, cap);
    let zero = Degree::zero(g.rank());
    let name = |p: &Path| g.path_name(p);
    let mut out = exec
        .map(&paths, |l| -> Result<CheckResult, RepError> {
            let t = fam.generator(l)?;
            Ok(exact_check(format!("boolean:range:{}", name(l)), fam, &t.mul(&t.adjoint()), &*fam.q(l)?, l.degree()))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let pairs: Vec<(&Path, &Path)> = paths.iter().flat_map(|m| paths.iter().map(move |n| (m, n))).collect();
    out.extend(
        exec.map(&pairs, |(mu, nu)| -> Result<CheckResult, RepError> {
            let lhs = fam.q(mu)?.mul(&*fam.q(nu)?);
            let mut rhs = OperatorMatrix::zeros(fam.basis());
            for gamma in mce(g, mu, nu) {
                rhs = rhs.add(&*fam.q(&gamma)?);
            }
            Ok(exact_check(format!("boolean:{},{}", name(mu), name(nu)), fam, &lhs, &rhs, &zero))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?,
    );
    Ok(out)
}

/// `φ_λ t_μ t*_ν φ_λ` is `φ_λ` when `μ = ν` is a prefix of `λ`, and 0 otherwise.
pub fn verify_phi2(
    fam: &IsometryFamily,
    system: &SeparatingSystem,
    mu: &Path,
    nu: &Path,
    lambda: &Path,
) -> Result<CheckResult, RepError> {
    let g = fam.graph();
    let entry = system
        .entries
        .get(lambda)
        .ok_or_else(|| RepError::InvariantViolation(format!("{} is not in F", g.path_name(lambda))))?;
    if let (Some(cap), Phi::Range(p)) = (fam.cap(), &entry.phi) {
        if !p.degree().le(cap) {
            return Err(RepError::CapTooSmall { needed: p.degree().clone(), cap: cap.clone() });
        }
    }
    let id = format!("phi2:{},{},{}", g.path_name(lambda), g.path_name(mu), g.path_name(nu));
    if mu.source() != nu.source() {
        return Ok(CheckResult::new(id, CheckStatus::NotApplicable));
    }
    let phi = system.phi_matrix(fam, lambda)?;
    let lhs = phi.mul(&*fam.spanning(mu, nu)?).mul(&phi);
    let expected = if mu == nu && g.has_prefix(lambda, mu) { phi.clone() } else { OperatorMatrix::zeros(fam.basis()) };
    let mut r = exact_check(id, fam, &lhs, &expected, &Degree::zero(g.rank()));
    if r.passed() {
        r.witness = Some(
            json!({"phi_rank": phi.nnz(), "case": if mu == nu && g.has_prefix(lambda, mu) { "phi" } else { "zero" }}),
        );
    }
    Ok(r)
}

/// All `(λ, μ, ν) ∈ F³` in order.
pub fn verify_phi2_all(
    fam: &IsometryFamily,
    system: &SeparatingSystem,
    exec: Execution,
) -> Result<Vec<CheckResult>, RepError> {
    let f = &system.f;
    let triples: Vec<(&Path, &Path, &Path)> =
        f.iter().flat_map(|l| f.iter().flat_map(move |m| f.iter().map(move |n| (l, m, n)))).collect();
    exec.map(&triples, |(l, m, n)| verify_phi2(fam, system, m, n, l)).into_iter().collect()
}

/// `Φ(a)` formally and evaluated.
pub fn expectation<T: super::formal::FromInt>(
    fam: &IsometryFamily,
    a: &FormalElement<T>,
) -> Result<(FormalElement<T>, OperatorMatrix<T>), RepError> {
    let d = a.diagonal();
    let m = d.evaluate(fam)?;
    Ok((d, m))
}

/// Idempotence of `Φ`, contractivity of its evaluation, and positivity of
/// the diagonal of `a*a`.
pub fn expectation_laws(
    fam: &IsometryFamily,
    a: &FormalElement<Complex64>,
    tag: &str,
) -> Result<Vec<CheckResult>, RepError> {
    let (d, dm) = expectation(fam, a)?;
    let mut out = Vec::new();
    let id = |s: &str| format!("exp:{s}:{tag}");
    out.push(if d.diagonal() == d {
        CheckResult::pass(id("idempotent"))
    } else {
        CheckResult::fail(id("idempotent"), json!(null))
    });
    let am = a.evaluate(fam)?;
    let (n_phi, n_a) = (operator_norm(&dm, 1e-12)?, operator_norm(&am, 1e-12)?);
    let norms = json!({"expectation": n_phi, "element": n_a});
    let status = if n_phi <= n_a + NORM_TOLERANCE { CheckStatus::Pass } else { CheckStatus::Fail };
    out.push(CheckResult::new(id("contractive"), status).with_norms(norms, NORM_TOLERANCE));
    let aa = am.adjoint().mul(&am);
    let bad = (0..fam.dim()).find(|&i| {
        let z = aa.get(i, i);
        z.re < -NORM_TOLERANCE || z.im.abs() > NORM_TOLERANCE
    });
    out.push(match bad {
        None => CheckResult::pass(id("positive")),
        Some(i) => CheckResult::fail(id("positive"), json!({"vector": fam.label(i)})),
    });
    Ok(out)
}

/// `‖Σ a_{μ,μ} q_μ‖ <= ‖Σ a_{μ,ν} t_μ t*_ν‖`, the left side by the sector
/// formula and the right side numerically. The Fock cap must contain `∨F`.
pub fn verify_claim1(fam: &IsometryFamily, a: &FormalElement<Complex64>, tag: &str) -> Result<CheckResult, RepError> {
    let g = fam.graph();
    if let Some(cap) = fam.cap() {
        let mut support: Vec<Path> = a.terms().flat_map(|(m, n, _)| [m.clone(), n.clone()]).collect();
        support.extend(support.clone().iter().map(|p| g.source_vertex(p)));
        support.sort();
        support.dedup();
        let top = vee(g, &support).iter().fold(Degree::zero(g.rank()), |acc, p| acc.join(p.degree()));
        if !top.le(cap) {
            return Err(RepError::CapTooSmall { needed: top, cap: cap.clone() });
        }
    }
    let lhs = diagonal_norm(fam, &a.diagonal_coefficients())?;
    let rhs = operator_norm(&a.evaluate(fam)?, 1e-12)?;
    let status = if lhs <= rhs + NORM_TOLERANCE { CheckStatus::Pass } else { CheckStatus::Fail };
    Ok(CheckResult::new(format!("claim1:{tag}"), status).with_norms(json!({"lhs": lhs, "rhs": rhs}), NORM_TOLERANCE))
}

fn require_boundary(fam: &IsometryFamily) -> Result<(), RepError> {
    if fam.kind() != FamilyKind::Boundary {
        return Err(RepError::WrongFamily("boundary"));
    }
    Ok(())
}

fn require_fock(fam: &IsometryFamily) -> Result<(), RepError> {
    if fam.kind() != FamilyKind::Fock {
        return Err(RepError::WrongFamily("fock"));
    }
    Ok(())
}

/// The commuting square: mapping `Φ_t(a)` to boundary range projections
/// equals the diagonal of `a` evaluated on the boundary. The Fock diagonal
/// is checked against `Σ a_{λ,λ} q_λ` as well.
pub fn verify_exp_square(
    fock: &IsometryFamily,
    boundary: &IsometryFamily,
    a: &FormalElement<Complex<i64>>,
    tag: &str,
) -> Result<Vec<CheckResult>, RepError> {
    require_fock(fock)?;
    require_boundary(boundary)?;
    let mut out = Vec::new();
    for (fam, side) in [(boundary, "boundary"), (fock, "fock")] {
        let left = a.evaluate_diagonal_with(fam, |l| fam.q(l).map(|m| (*m).clone()))?;
        let right = a.evaluate(fam)?.diagonal_part();
        let zero = Degree::zero(fam.graph().rank());
        out.push(exact_check(format!("exp:square:{side}:{tag}"), fam, &left, &right, &zero));
    }
    Ok(out)
}

/// `⟨S_μ S*_ν ξ_x | ξ_x⟩` at every basis handle, computed by windowed prefix
/// and shift comparison and matched against the matrix diagonal. It must be
/// `0` for `μ ≠ ν` and `[x = μy]` for `μ = ν`.
pub fn verify_diagonal_formula(fam: &IsometryFamily, mu: &Path, nu: &Path) -> Result<CheckResult, RepError> {
    require_boundary(fam)?;
    let g = fam.graph();
    let handles = fam.handles().expect("boundary family");
    let window = fam.window().expect("boundary family");
    let id = format!("diag:{},{}", g.path_name(mu), g.path_name(nu));
    if mu.source() != nu.source() {
        return Ok(CheckResult::new(id, CheckStatus::NotApplicable));
    }
    let m = fam.spanning(mu, nu)?;
    for (i, x) in handles.iter().enumerate() {
        let (pm, pn) = (fam.has_prefix(i, mu), fam.has_prefix(i, nu));
        let expected = if mu == nu {
            pm as i64
        } else {
            if pm && pn {
                let (a, b) = (x.shift(mu.degree())?, x.shift(nu.degree())?);
                if a.head(window) == b.head(window) {
                    return Ok(CheckResult::new(id, CheckStatus::Inconclusive)
                        .with_witness(json!({"window_inconclusive": fam.label(i)})));
                }
            }
            0
        };
        if m.get(i, i) != expected {
            return Ok(CheckResult::fail(
                id,
                json!({"vector": fam.label(i), "entry": m.get(i, i), "expected": expected}),
            ));
        }
    }
    Ok(CheckResult::pass(id))
}

/// `‖π_boundary(a)‖ <= ‖π_fock(a)‖ + 0.05` on the truncations.
pub fn couniversal_norm_check(
    fock: &IsometryFamily,
    boundary: &IsometryFamily,
    a: &FormalElement<Complex64>,
    tag: &str,
) -> Result<CheckResult, RepError> {
    require_fock(fock)?;
    require_boundary(boundary)?;
    let nb = operator_norm(&a.evaluate(boundary)?, 1e-12)?;
    let nf = operator_norm(&a.evaluate(fock)?, 1e-12)?;
    let status = if nb <= nf + COUNIVERSAL_TOLERANCE { CheckStatus::Pass } else { CheckStatus::Fail };
    Ok(CheckResult::new(format!("couniversal:{tag}"), status)
        .with_norms(json!({"boundary": nb, "fock": nf}), COUNIVERSAL_TOLERANCE)
        .heuristic())
}

/// Dimension of the span of the compressed `t_μ t*_ν` over all pairs of
/// paths with degree at most `cap`, by exact rational elimination.
pub fn spanning_rank(fam: &IsometryFamily, cap: &Degree) -> Result<usize, RepError> {
    let g = fam.graph();
    let paths = sorted_paths(g, cap);
    let n = fam.dim();
    let mut rows: Vec<Vec<Ratio<i64>>> = Vec::new();
    for mu in &paths {
        for nu in &paths {
            if mu.source() != nu.source() {
                continue;
            }
            let m = fam.spanning(mu, nu)?;
            let mut row = vec![Ratio::from_integer(0); n * n];
            for (r, c, v) in m.entries() {
                row[r * n + c] = Ratio::from_integer(v);
            }
            rows.push(row);
        }
    }
    Ok(rank(rows))
}

fn rank(mut rows: Vec<Vec<Ratio<i64>>>) -> usize {
    let zero = Ratio::from_integer(0);
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != zero) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c];
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != zero {
                let f = row[c] / pivot;
                for (x, y) in row.iter_mut().zip(&prow) {
                    if *y != zero {
                        *x -= f * y;
                    }
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}
