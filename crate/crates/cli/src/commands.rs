//! Graph-level subcommands.

use std::collections::BTreeMap;
use std::sync::Arc;

use kgraph_core::alignment::{self, enumerate_fe, is_exhaustive, is_finitely_aligned, Exhaustiveness};
use kgraph_core::aperiodicity::{aperiodicity_report, AperiodicityStatus, ReportOptions};
use kgraph_core::boundary::{
    aperiodicity_window_check, check_boundary_condition, finite_boundary_paths, substitution_path, BoundaryPath,
    BoundaryVerdict, WindowCheck,
};
use kgraph_core::degree::Degree;
use kgraph_core::graph::{GraphError, KGraph, Path, VertexId};
use kgraph_core::par::Execution;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{load_graph, parse_degree, Common, Failure, HandleArgs, Outcome};

fn names(g: &KGraph, paths: &[Path]) -> Vec<String> {
    paths.iter().map(|p| g.path_name(p)).collect()
}

fn parse_paths(g: &KGraph, texts: &[String]) -> Result<Vec<Path>, Failure> {
    texts.iter().map(|t| g.parse_path(t).map_err(Failure::from)).collect()
}

fn vertex(g: &KGraph, name: &str) -> Result<VertexId, Failure> {
    g.vertex_by_name(name).ok_or_else(|| Failure::Config(format!("unknown vertex `{name}`")))
}

fn ok(result: Value, summary: String) -> Outcome {
    Outcome { result, code: 0, summary }
}

pub fn validate(common: &Common, align_cap: &str) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(&common.input)
        .map_err(|e| Failure::Config(format!("{}: {e}", common.input.display())))?;
    match KGraph::from_json(&text) {
        Ok(g) => {
            let cap = parse_degree(align_cap, g.rank())?;
            let cert = is_finitely_aligned(&g, &cap, Execution::default());
            let result = json!({
                "valid": true,
                "rank": g.rank(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "squares": g.square_count(),
                "edges_per_color": g.edges_per_color(),
                "finitely_many_paths": g.has_finitely_many_paths(),
                "locally_convex": g.is_locally_convex(),
                "no_sources": g.has_no_sources(),
                "alignment": {
                    "finitely_aligned": cert.finitely_aligned,
                    "cap": cert.cap.coords(),
                    "pairs_checked": cert.pairs_checked,
                    "max_mce": cert.max_mce,
                    "witness": cert.witness,
                },
            });
            Ok(ok(
                result,
                format!(
                    "valid rank-{} graph with {} vertices and {} edges",
                    g.rank(),
                    g.vertex_count(),
                    g.edge_count()
                ),
            ))
        }
        Err(GraphError::Invalid(violations)) => Ok(Outcome {
            summary: format!("invalid: {}", violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")),
            result: json!({"valid": false, "violations": violations}),
            code: 1,
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn paths(common: &Common, cap: &str, from: Option<&str>, to: Option<&str>) -> Result<Outcome, Failure> {
    let g = load_graph(&common.input)?;
    let cap = parse_degree(cap, g.rank())?;
    let from = from.map(|v| vertex(&g, v)).transpose()?;
    let to = to.map(|v| vertex(&g, v)).transpose()?;
    let mut p = g.paths_up_to(&cap, from, to);
    p.sort();
    Ok(ok(json!(names(&g, &p)), format!("{} paths", p.len())))
}

pub fn mce(common: &Common, mu: &str, nu: &str) -> Result<Outcome, Failure> {
    let g = load_graph(&common.input)?;
    let m = alignment::mce(&g, &g.parse_path(mu)?, &g.parse_path(nu)?);
    Ok(ok(json!(names(&g, &m)), format!("{} minimal common extensions", m.len())))
}

pub fn vee(common: &Common, paths: &[String]) -> Result<Outcome, Failure> {
    let g = load_graph(&common.input)?;
    let v = alignment::vee(&g, &parse_paths(&g, paths)?);
    Ok(ok(json!(names(&g, &v)), format!("{} paths in the closure", v.len())))
}

pub fn exhaustive(common: &Common, v: &str, paths: &[String]) -> Result<Outcome, Failure> {
    let g = load_graph(&common.input)?;
    let v = vertex(&g, v)?;
    let e = parse_paths(&g, paths)?;
    Ok(match is_exhaustive(&g, v, &e)? {
        Exhaustiveness::Exhaustive => ok(json!({"exhaustive": true}), "exhaustive".into()),
        Exhaustiveness::Failing { witness } => Outcome {
            summary: format!("not exhaustive: `{}` meets no member", g.path_name(&witness)),
            result: json!({"exhaustive": false, "witness": g.path_name(&witness)}),
            code: 1,
        },
    })
}

pub fn fe(common: &Common, v: &str, cap: &str, budget: usize) -> Result<Outcome, Failure> {
    let g = load_graph(&common.input)?;
    let v = vertex(&g, v)?;
    let cap = parse_degree(cap, g.rank())?;
    let sets = match enumerate_fe(&g, v, &cap, budget) {
        Ok(s) => s,
        Err(e @ alignment::AlignmentError::CapTooLargeForBudget(_)) => {
            return Err(Failure::Inconclusive(e.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let out: Vec<Vec<String>> = sets.iter().map(|s| names(&g, s)).collect();
    Ok(ok(json!(out), format!("{} minimal finite exhaustive sets", out.len())))
}

pub fn aperiodic(common: &Common, pair_bound: &str, tau_bound: &str, max_pairs: usize) -> Result<Outcome, Failure> {
    let g = load_graph(&common.input)?;
    let p = parse_degree(pair_bound, g.rank())?;
    let t = parse_degree(tau_bound, g.rank())?;
    let report = aperiodicity_report(&g, &p, &t, ReportOptions { max_pairs, exec: Execution::default() })?;
    let (code, summary) = match &report.status {
        AperiodicityStatus::AperiodicCertified => (0, "aperiodic (certified by a full scan)".to_string()),
        AperiodicityStatus::AperiodicEvidence => (0, format!("no periodicity among {} pairs", report.outcomes.len())),
        AperiodicityStatus::PeriodicEvidence { mu, nu } => {
            (1, format!("periodic evidence: `{}` and `{}` are never separated", g.path_name(mu), g.path_name(nu)))
        }
        AperiodicityStatus::Inconclusive => (3, "pair budget exhausted".to_string()),
    };
    Ok(Outcome { result: report.to_json(&g), code, summary })
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum SeedSpec {
    Substitution { rules: BTreeMap<String, String>, seed: String },
    Periodic { periodic: String },
}

/// Boundary handles and the comparison window for a graph.
pub fn build_handles(g: &Arc<KGraph>, args: &HandleArgs) -> Result<(Vec<BoundaryPath>, Degree), Failure> {
    if let Some(max) = g.max_path_degree() {
        let window = match &args.window {
            Some(w) => parse_degree(w, g.rank())?,
            None => max,
        };
        return Ok((finite_boundary_paths(g)?, window));
    }
    let path = args
        .seeds
        .as_ref()
        .ok_or_else(|| Failure::Config("the graph has infinitely many paths; pass --seeds".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let spec: SeedSpec =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let x = match spec {
        SeedSpec::Substitution { rules, seed } => substitution_path(g, &rules, &seed)?,
        SeedSpec::Periodic { periodic } => BoundaryPath::periodic(g.clone(), g.parse_path(&periodic)?.word())?,
    };
    let window = match &args.window {
        Some(w) => parse_degree(w, g.rank())?,
        None => Degree::splat(g.rank(), 128),
    };
    let handles = (0..args.handles).map(|n| x.shift(&Degree::splat(g.rank(), n))).collect::<Result<Vec<_>, _>>()?;
    Ok((handles, window))
}

pub fn boundary_check(
    common: &Common,
    args: &HandleArgs,
    fe_cap: &str,
    shift_bound: &str,
    budget: usize,
) -> Result<Outcome, Failure> {
    let g = load_graph(&common.input)?;
    let (handles, window) = build_handles(&g, args)?;
    let fe_cap = parse_degree(fe_cap, g.rank())?;
    let shift_bound = parse_degree(shift_bound, g.rank())?;
    let (mut failed, mut unknown) = (0, 0);
    let rows: Vec<Value> = handles
        .iter()
        .map(|x| {
            let boundary = match check_boundary_condition(x, &window, &fe_cap, budget) {
                BoundaryVerdict::Pass { instances } => json!({"verdict": "pass", "instances": instances}),
                BoundaryVerdict::Fail { n, e } => {
                    failed += 1;
                    json!({"verdict": "fail", "n": n.coords(), "e": names(&g, &e)})
                }
                BoundaryVerdict::Unknown { n, reason } => {
                    unknown += 1;
                    json!({"verdict": "unknown", "n": n.coords(), "reason": reason})
                }
            };
            let aperiodic = match aperiodicity_window_check(x, &shift_bound, &window) {
                WindowCheck::Pass { pairs } => json!({"verdict": "pass", "pairs": pairs}),
                WindowCheck::Fail { m, n } => {
                    failed += 1;
                    json!({"verdict": "fail", "m": m.coords(), "n": n.coords()})
                }
            };
            json!({
                "handle": x.label(),
                "provenance": x.provenance(),
                "degree": x.degree().to_string(),
                "boundary_condition": boundary,
                "window_aperiodicity": aperiodic,
            })
        })
        .collect();
    let code = if failed > 0 {
        1
    } else if unknown > 0 {
        3
    } else {
        0
    };
    let summary = format!("{} handles, {failed} failing checks, {unknown} unknown", handles.len());
    Ok(Outcome { result: json!({"window": window.coords(), "handles": rows}), code, summary })
}
