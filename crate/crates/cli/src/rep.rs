//! `rep-verify`: relation suites on Fock and boundary families.

use std::sync::Arc;

use clap::Args;
use kgraph_core::alignment::DEFAULT_FE_BUDGET;
use kgraph_core::degree::Degree;
use kgraph_core::graph::{KGraph, Path};
use kgraph_core::par::Execution;
use kgraph_core::repalg::formal::{random_complex_table, random_gaussian_element, FormalElement};
use kgraph_core::repalg::verify::{
    boolean_rep, couniversal_norm_check, expectation_laws, verify_ck, verify_claim1, verify_diagonal_formula,
    verify_exp_square, verify_phi2_all, verify_tck,
};
use kgraph_core::repalg::{
    build_boundary_family, build_fock_family, build_separating_system, lem3_check, q_decomposition, CheckResult,
    CheckStatus, IsometryFamily, RepError, VerificationReport,
};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::build_handles;
use crate::{load_graph, parse_degree, Common, Failure, FamilyArg, HandleArgs, Outcome};

const SUITES: [&str; 9] = ["tck", "ck", "lem1", "lem3", "phi2", "claim1", "exp", "diag", "couniversal"];

#[derive(Args, Debug, Clone)]
pub struct RepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    handles: HandleArgs,
    #[arg(long, value_enum, default_value = "fock")]
    family: FamilyArg,
    /// Fock: truncation cap, relations are checked up to half of it.
    /// Boundary: degree bound for the relations. Defaults to 6 and 2.
    #[arg(long)]
    cap: Option<String>,
    /// Comma-separated suites; all by default.
    #[arg(long, value_delimiter = ',')]
    suite: Option<Vec<String>>,
    /// The test family F is every path of degree at most this.
    #[arg(long, default_value = "1")]
    f_cap: String,
    /// Fock cap of the comparison family used with `--family boundary`.
    #[arg(long, default_value = "6")]
    fock_cap: String,
    /// Rounds of one-edge extensions and unit shifts closing the handle set.
    #[arg(long)]
    depth: Option<u32>,
    /// Degree bound for separating extensions.
    #[arg(long, default_value = "6")]
    tau_depth: String,
    /// Random elements per randomized suite.
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_FE_BUDGET)]
    budget: usize,
}

fn half(d: &Degree) -> Degree {
    Degree::from_coords(d.coords().iter().map(|c| c / 2).collect::<Vec<_>>())
}

fn not_applicable(id: &str, reason: &str) -> CheckResult {
    CheckResult::new(id, CheckStatus::NotApplicable).with_witness(json!({"reason": reason}))
}

struct Families {
    primary: FamilyArg,
    fock: Option<IsometryFamily>,
    boundary: Result<IsometryFamily, String>,
}

impl Families {
    fn primary(&self) -> &IsometryFamily {
        match self.primary {
            FamilyArg::Fock => self.fock.as_ref().expect("built for the primary family"),
            FamilyArg::Boundary => self.boundary.as_ref().expect("built for the primary family"),
        }
    }
}

fn boundary_family(g: &Arc<KGraph>, args: &RepArgs) -> Result<(IsometryFamily, Value), Failure> {
    let (handles, window) = build_handles(g, &args.handles)?;
    let depth = args.depth.unwrap_or_else(|| g.max_path_degree().map_or(4, |m| m.total()));
    let fam = build_boundary_family(g, &handles, &window, depth)?;
    let echo = json!({"handles": handles.len(), "window": window.coords(), "depth": depth, "dim": fam.dim()});
    Ok((fam, echo))
}

pub fn rep_verify(args: &RepArgs) -> Result<(Value, Outcome), Failure> {
    let g = load_graph(&args.common.input)?;
    let rank = g.rank();
    let suites: Vec<String> = args.suite.clone().unwrap_or_else(|| SUITES.iter().map(|s| s.to_string()).collect());
    if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return Err(Failure::Config(format!("unknown suite `{bad}`; expected one of {}", SUITES.join(","))));
    }
    let wants = |s: &str| suites.iter().any(|x| x == s);
    let (fock_cap, rel) = match args.family {
        FamilyArg::Fock => {
            let cap = parse_degree(args.cap.as_deref().unwrap_or("6"), rank)?;
            let rel = half(&cap);
            (cap, rel)
        }
        FamilyArg::Boundary => {
            (parse_degree(&args.fock_cap, rank)?, parse_degree(args.cap.as_deref().unwrap_or("2"), rank)?)
        }
    };
    let f_cap = parse_degree(&args.f_cap, rank)?;
    let tau_depth = parse_degree(&args.tau_depth, rank)?;
    let mut f = g.paths_up_to(&f_cap, None, None);
    f.sort();

    let need_fock = args.family == FamilyArg::Fock || wants("exp") || wants("couniversal");
    let need_boundary = args.family == FamilyArg::Boundary || wants("exp") || wants("diag") || wants("couniversal");
    let fock = need_fock.then(|| build_fock_family(&g, &fock_cap)).transpose()?;
    let (boundary, boundary_echo) = if need_boundary {
        match boundary_family(&g, args) {
            Ok((fam, echo)) => (Ok(fam), echo),
            Err(e) if args.family == FamilyArg::Fock => {
                let msg = match e {
                    Failure::Config(m) | Failure::Inconclusive(m) => m,
                };
                (Err(msg.clone()), json!({"unavailable": msg}))
            }
            Err(e) => return Err(e),
        }
    } else {
        (Err("not requested".to_string()), Value::Null)
    };
    let fams = Families { primary: args.family, fock, boundary };
    let fam = fams.primary();
    let exec = Execution::default();
    let mut report = VerificationReport::default();
    let mut extra = serde_json::Map::new();
    let mut rng = ChaCha8Rng::seed_from_u64(args.common.seed);
    let tables: Vec<_> = (0..args.samples).map(|_| random_complex_table(&g, &f, &mut rng)).collect();

    let ctx = SuiteContext { g: &g, fams: &fams, f: &f, rel: &rel, tau_depth: &tau_depth, tables: &tables, args, exec };
    for name in SUITES.iter().filter(|s| wants(s)) {
        let (checks, json) =
            run_suite(name, &ctx, &mut rng).map_err(|e| Failure::Config(format!("suite {name}: {e}")))?;
        report.extend(checks);
        if let Some(v) = json {
            extra.insert("separating_system".into(), v);
        }
    }

    let config = json!({
        "input": args.common.input.display().to_string(),
        "family": fam.kind(),
        "cap": args.cap,
        "relation_bound": rel.coords(),
        "fock_cap": fams.fock.as_ref().map(|_| fock_cap.coords()),
        "boundary": boundary_echo,
        "f_cap": f_cap.coords(),
        "f": f.iter().map(|p| g.path_name(p)).collect::<Vec<_>>(),
        "tau_depth": tau_depth.coords(),
        "suites": suites,
        "samples": args.samples,
        "budget": args.budget,
    });
    let code = if !report.hard_pass() {
        1
    } else if report.any_inconclusive() {
        3
    } else {
        0
    };
    let counts = report.counts();
    let summary = format!(
        "{} pass, {} fail, {} inconclusive, {} not applicable on a {}-dimensional {} basis",
        counts["pass"],
        counts["fail"],
        counts["inconclusive"],
        counts["not_applicable"],
        fam.dim(),
        match fam.kind() {
            kgraph_core::repalg::FamilyKind::Fock => "Fock",
            kgraph_core::repalg::FamilyKind::Boundary => "boundary",
        }
    );
    let mut result = json!({
        "dim": fam.dim(),
        "hard_pass": report.hard_pass(),
        "counts": counts,
        "checks": report.checks,
    });
    result.as_object_mut().expect("object").extend(extra);
    Ok((config, Outcome { result, code, summary }))
}

struct SuiteContext<'a> {
    g: &'a Arc<KGraph>,
    fams: &'a Families,
    f: &'a [Path],
    rel: &'a Degree,
    tau_depth: &'a Degree,
    tables: &'a [FormalElement<Complex64>],
    args: &'a RepArgs,
    exec: Execution,
}

/// Runs one suite; `phi2` also returns the separating system it used.
fn run_suite(
    name: &str,
    c: &SuiteContext,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<CheckResult>, Option<Value>), RepError> {
    let fam = c.fams.primary();
    let (g, f, exec) = (c.g, c.f, c.exec);
    let mut out = Vec::new();
    match name {
        "tck" => {
            out.extend(verify_tck(fam, c.rel, exec)?);
            out.extend(boolean_rep(fam, c.rel, exec)?);
        }
        "ck" => out.extend(verify_ck(fam, c.rel, c.args.budget)?),
        "lem1" => out.extend(q_decomposition(fam, f)?.checks),
        "lem3" => out.extend(lem3_check(fam, f)?),
        "phi2" => {
            let system = build_separating_system(g, f, c.tau_depth)?;
            out.extend(verify_phi2_all(fam, &system, exec)?);
            return Ok((out, Some(system.to_json(g))));
        }
        "claim1" => {
            for (i, a) in c.tables.iter().enumerate() {
                out.push(verify_claim1(fam, a, &i.to_string())?);
            }
        }
        "exp" => {
            for (i, a) in c.tables.iter().enumerate() {
                out.extend(expectation_laws(fam, a, &i.to_string())?);
            }
            match (&c.fams.fock, &c.fams.boundary) {
                (Some(fock), Ok(boundary)) => {
                    for i in 0..c.args.samples {
                        let a = random_gaussian_element(g, f, 6, 5, rng);
                        out.extend(verify_exp_square(fock, boundary, &a, &i.to_string())?);
                    }
                }
                (_, Err(reason)) => out.push(not_applicable("exp:square", reason)),
                (None, _) => unreachable!("exp builds the Fock family"),
            }
        }
        "diag" => match &c.fams.boundary {
            Ok(boundary) => {
                let paths = sorted_paths(g, c.rel);
                for mu in &paths {
                    for nu in paths.iter().filter(|nu| nu.source() == mu.source()) {
                        out.push(verify_diagonal_formula(boundary, mu, nu)?);
                    }
                }
            }
            Err(reason) => out.push(not_applicable("diag", reason)),
        },
        "couniversal" => match (&c.fams.fock, &c.fams.boundary) {
            (Some(fock), Ok(boundary)) => {
                for (i, a) in c.tables.iter().enumerate() {
                    out.push(couniversal_norm_check(fock, boundary, a, &i.to_string())?);
                }
            }
            (_, Err(reason)) => out.push(not_applicable("couniversal", reason)),
            (None, _) => unreachable!("couniversal builds the Fock family"),
        },
        _ => unreachable!("suite names are validated"),
    }
    Ok((out, None))
}

fn sorted_paths(g: &KGraph, cap: &Degree) -> Vec<Path> {
    let mut p = g.paths_up_to(cap, None, None);
    p.sort();
    p
}
