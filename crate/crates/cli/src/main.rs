//! `kgraph`: command-line front end for finite higher-rank graphs.
//!
//! Every command prints one JSON report on stdout and a short summary on
//! stderr. Exit codes: 0 all checks pass, 1 a check failed (the report holds a
//! witness), 2 configuration or parse error, 3 only inconclusive outcomes.

mod commands;
mod rep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kgraph_core::degree::Degree;
use kgraph_core::graph::KGraph;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "kgraph", version, about = "Finite higher-rank graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Graph file in the JSON presentation format.
    input: PathBuf,
    /// Seed for randomized suites; echoed in every report.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a presentation: squares, swaps and confluence.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Degree bound for the finite-alignment certificate.
        #[arg(long, default_value = "2")]
        align_cap: String,
    },
    /// List paths with degree at most `--cap`.
    Paths {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cap: String,
        /// Only paths with this range vertex, that is paths in vΛ.
        #[arg(long)]
        from: Option<String>,
        /// Only paths with this source vertex.
        #[arg(long)]
        to: Option<String>,
    },
    /// Minimal common extensions of two paths.
    Mce {
        #[command(flatten)]
        common: Common,
        mu: String,
        nu: String,
    },
    /// The closure `∨F` of a finite set of paths.
    Vee {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// Decide whether a finite set of paths is exhaustive at a vertex.
    Exhaustive {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vertex: String,
        paths: Vec<String>,
    },
    /// Enumerate minimal finite exhaustive sets at a vertex.
    Fe {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        cap: String,
        #[arg(long, default_value_t = kgraph_core::alignment::DEFAULT_FE_BUDGET)]
        budget: usize,
    },
    /// Bounded aperiodicity scan.
    Aperiodic {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        pair_bound: String,
        #[arg(long)]
        tau_bound: String,
        #[arg(long, default_value_t = 200_000)]
        max_pairs: usize,
    },
    /// Boundary condition and windowed aperiodicity of boundary paths.
    BoundaryCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        handles: HandleArgs,
        #[arg(long)]
        fe_cap: String,
        #[arg(long)]
        shift_bound: String,
        #[arg(long, default_value_t = kgraph_core::alignment::DEFAULT_FE_BUDGET)]
        budget: usize,
    },
    /// Verify relations of a concrete Toeplitz or Cuntz-Krieger family.
    RepVerify(rep::RepArgs),
}

/// How boundary handles are produced. Graphs with finitely many paths use
/// their exact boundary; otherwise a seed file is required.
#[derive(Args, Debug, Clone)]
struct HandleArgs {
    /// JSON seed file: `{"rules": {..}, "seed": "a"}` or `{"periodic": "ab"}`.
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Number of shifts of the seed handle to use.
    #[arg(long, default_value_t = 16)]
    handles: u32,
    /// Comparison window; defaults to the largest path degree for finite
    /// graphs and 128 in every coordinate otherwise.
    #[arg(long)]
    window: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyArg {
    Fock,
    Boundary,
}

/// A failure that maps to an exit code.
#[derive(Debug)]
pub(crate) enum Failure {
    Config(String),
    Inconclusive(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Config(e.to_string())
    }
}

/// Outcome of a command before it is wrapped in the report envelope.
pub(crate) struct Outcome {
    pub result: Value,
    pub code: u8,
    pub summary: String,
}

pub(crate) fn load_graph(path: &Path) -> Result<Arc<KGraph>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    Ok(Arc::new(KGraph::from_json(&text)?))
}

/// Parses a degree for a rank-`rank` graph; a single number is repeated.
pub(crate) fn parse_degree(text: &str, rank: usize) -> Result<Degree, Failure> {
    let d: Degree = text.parse()?;
    match d.rank() {
        r if r == rank => Ok(d),
        1 => Ok(Degree::splat(rank, d.get(0))),
        _ => Err(Failure::Config(format!("degree `{text}` does not have rank {rank}"))),
    }
}

fn emit(common: &Common, command: &str, config: Value, out: Outcome) -> Result<u8, Failure> {
    let report = json!({
        "tool": "kgraph",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "seed": common.seed,
        "result": out.result,
    });
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    match &common.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    eprintln!("{command}: {}", out.summary);
    Ok(out.code)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let input = |c: &Common| c.input.display().to_string();
    match cli.command {
        Command::Validate { common, align_cap } => {
            let out = commands::validate(&common, &align_cap)?;
            emit(&common, "validate", json!({"input": input(&common), "align_cap": align_cap}), out)
        }
        Command::Paths { common, cap, from, to } => {
            let out = commands::paths(&common, &cap, from.as_deref(), to.as_deref())?;
            emit(&common, "paths", json!({"input": input(&common), "cap": cap, "from": from, "to": to}), out)
        }
        Command::Mce { common, mu, nu } => {
            let out = commands::mce(&common, &mu, &nu)?;
            emit(&common, "mce", json!({"input": input(&common), "mu": mu, "nu": nu}), out)
        }
        Command::Vee { common, paths } => {
            let out = commands::vee(&common, &paths)?;
            emit(&common, "vee", json!({"input": input(&common), "paths": paths}), out)
        }
        Command::Exhaustive { common, vertex, paths } => {
            let out = commands::exhaustive(&common, &vertex, &paths)?;
            emit(&common, "exhaustive", json!({"input": input(&common), "vertex": vertex, "paths": paths}), out)
        }
        Command::Fe { common, vertex, cap, budget } => {
            let out = commands::fe(&common, &vertex, &cap, budget)?;
            let config = json!({"input": input(&common), "vertex": vertex, "cap": cap, "budget": budget});
            emit(&common, "fe", config, out)
        }
        Command::Aperiodic { common, pair_bound, tau_bound, max_pairs } => {
            let out = commands::aperiodic(&common, &pair_bound, &tau_bound, max_pairs)?;
            let config = json!({
                "input": input(&common),
                "pair_bound": pair_bound,
                "tau_bound": tau_bound,
                "max_pairs": max_pairs,
            });
            emit(&common, "aperiodic", config, out)
        }
        Command::BoundaryCheck { common, handles, fe_cap, shift_bound, budget } => {
            let out = commands::boundary_check(&common, &handles, &fe_cap, &shift_bound, budget)?;
            let config = json!({
                "input": input(&common),
                "seeds": handles.seeds.as_ref().map(|p| p.display().to_string()),
                "handles": handles.handles,
                "window": handles.window,
                "fe_cap": fe_cap,
                "shift_bound": shift_bound,
                "budget": budget,
            });
            emit(&common, "boundary-check", config, out)
        }
        Command::RepVerify(args) => {
            let (config, out) = rep::rep_verify(&args)?;
            emit(&args.common, "rep-verify", config, out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Inconclusive(msg)) => {
            eprintln!("inconclusive: {msg}");
            ExitCode::from(3)
        }
    }
}
