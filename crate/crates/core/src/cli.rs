//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or internal failure (including a failed
//! comparison check), 2 invalid input, 3 exact oracle size limit.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::approx::{run_pipeline, APPROX_FACTOR};
use crate::bench::{run_bench, summarize, write_csv, BenchConfig};
use crate::conflict_graph::ConflictGraph;
use crate::dot::{conflict_graph_dot, duo_graph_dot};
use crate::duo_graph::DuoGraph;
use crate::error::Error;
use crate::exact::{
    exact_by_mapping_enumeration, exact_mwis, DEFAULT_MAPPING_LIMIT, DEFAULT_MWIS_LIMIT,
};
use crate::gen::{generate, GenParams, WeightKind};
use crate::instance::{Instance, Mode};
use crate::lp::SimplexOptions;
use crate::solution::{round_sig, SolutionFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mwdsm", version, about = "Weighted duo-preservation string mapping")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    /// Bipartite duo graph.
    Gi,
    /// Conflict graph.
    Gc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the LP rounding pipeline and write a solution file.
    Solve {
        instance: PathBuf,
        /// Solution output path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Skip the permutation check; no bijection is reconstructed.
        #[arg(long)]
        relaxed: bool,
        /// Also write a DOT file of the duo graph or the conflict graph.
        #[arg(long, value_enum)]
        export_dot: Option<GraphKind>,
        /// DOT output path (defaults to <output or instance>.<gi|gc>.dot).
        #[arg(long)]
        dot_output: Option<PathBuf>,
        /// Write the LP in CPLEX LP text format.
        #[arg(long)]
        lp_dump: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        max_pivots: u64,
    },
    /// Solve exactly with both oracles.
    Exact {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MWIS_LIMIT)]
        mwis_limit: usize,
        #[arg(long, default_value_t = DEFAULT_MAPPING_LIMIT)]
        n_limit: usize,
    },
    /// Compare the approximation against both exact oracles.
    Compare {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MWIS_LIMIT)]
        mwis_limit: usize,
        #[arg(long, default_value_t = DEFAULT_MAPPING_LIMIT)]
        n_limit: usize,
    },
    /// Generate a random strict instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        /// unit, inverse, linear, gaussian or matrix.
        #[arg(long, default_value = "unit")]
        weight: String,
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Benchmark on random instances and write CSV.
    Bench {
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        alphabet_min: usize,
        #[arg(long, default_value_t = 3)]
        alphabet_max: usize,
        /// Comma-separated weight kinds, cycled across trials.
        #[arg(long, default_value = "unit")]
        weights: String,
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MWIS_LIMIT)]
        mwis_limit: usize,
        /// Fill the ms column with wall time (makes output nondeterministic).
        #[arg(long)]
        timing: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a DOT file of the duo graph or the conflict graph.
    Export {
        instance: PathBuf,
        #[arg(long, value_enum)]
        graph: GraphKind,
        #[arg(long)]
        relaxed: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Domain(Error),
    Io(String),
    Check(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(Error::TooLarge { .. }) => EXIT_TOO_LARGE,
            CliError::Domain(Error::IterationLimit(_)) => EXIT_FAILURE,
            CliError::Domain(_) => EXIT_INVALID,
            CliError::Io(_) | CliError::Check(_) => EXIT_FAILURE,
        }
    }
}

/// Runs a parsed command, writing diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let code = e.exit_code();
            let msg = match e {
                CliError::Domain(d) => d.to_string(),
                CliError::Io(m) => format!("io error: {m}"),
                CliError::Check(m) => m,
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn read_instance(path: &Path, relaxed: bool) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let mode = if relaxed { Mode::Relaxed } else { Mode::Strict };
    Ok(Instance::from_json(&text, mode)?)
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn graph_dot(instance: &Instance, kind: GraphKind) -> String {
    let g = DuoGraph::build(instance);
    match kind {
        GraphKind::Gi => duo_graph_dot(&g),
        GraphKind::Gc => conflict_graph_dot(&ConflictGraph::build(&g)),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Solve {
            instance,
            output,
            relaxed,
            export_dot,
            dot_output,
            lp_dump,
            max_pivots,
        } => {
            let inst = read_instance(&instance, relaxed)?;
            let opts = SimplexOptions {
                max_pivots,
                ..SimplexOptions::default()
            };
            let pipeline = run_pipeline(&inst, &opts)?;
            if let Some(path) = lp_dump {
                let mut buf = Vec::new();
                pipeline.lp.write_lp(&mut buf)?;
                fs::write(path, buf)?;
            }
            if let Some(kind) = export_dot {
                let text = match kind {
                    GraphKind::Gi => duo_graph_dot(&pipeline.duo_graph),
                    GraphKind::Gc => conflict_graph_dot(&pipeline.conflict_graph),
                };
                let suffix = match kind {
                    GraphKind::Gi => ".gi.dot",
                    GraphKind::Gc => ".gc.dot",
                };
                let path = dot_output
                    .unwrap_or_else(|| with_suffix(output.as_deref().unwrap_or(&instance), suffix));
                fs::write(path, text)?;
            }
            let file = SolutionFile::from_report(&pipeline.report);
            emit(output.as_deref(), &file.to_json(), out)
        }
        Command::Exact {
            instance,
            mwis_limit,
            n_limit,
        } => {
            let inst = read_instance(&instance, false)?;
            let gc = ConflictGraph::build(&DuoGraph::build(&inst));
            let mwis = exact_mwis(&gc, mwis_limit)?;
            let by_mapping = exact_by_mapping_enumeration(&inst, n_limit)?;
            let witness: Vec<String> = mwis
                .witness
                .iter()
                .map(|&v| {
                    let (i, j) = gc.vertex(v).endpoints();
                    format!("({i},{j})")
                })
                .collect();
            writeln!(out, "exact_mwis {}", round_sig(mwis.weight))?;
            writeln!(out, "mwis_witness {}", witness.join(" "))?;
            writeln!(out, "mwis_explored {}", mwis.explored)?;
            writeln!(out, "exact_mapping {}", round_sig(by_mapping.weight))?;
            writeln!(out, "mapping_witness {:?}", by_mapping.witness.perm())?;
            writeln!(out, "mapping_explored {}", by_mapping.explored)?;
            Ok(())
        }
        Command::Compare {
            instance,
            mwis_limit,
            n_limit,
        } => {
            let inst = read_instance(&instance, false)?;
            let pipeline = run_pipeline(&inst, &SimplexOptions::default())?;
            let mwis = exact_mwis(&pipeline.conflict_graph, mwis_limit)?;
            let by_mapping = exact_by_mapping_enumeration(&inst, n_limit)?;
            let alg = pipeline.report.selected_weight;
            let ratio = if mwis.weight > 0.0 { alg / mwis.weight } else { 1.0 };
            let bound_ok = alg >= mwis.weight / APPROX_FACTOR - 1e-6;
            let oracle_ok = (mwis.weight - by_mapping.weight).abs() <= 1e-9;
            let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
            writeln!(out, "alg_weight {}", round_sig(alg))?;
            writeln!(out, "realized_weight {}", round_sig(pipeline.report.realized_weight))?;
            writeln!(out, "lp_objective {}", round_sig(pipeline.report.lp_objective))?;
            writeln!(out, "exact_mwis {}", round_sig(mwis.weight))?;
            writeln!(out, "exact_mapping {}", round_sig(by_mapping.weight))?;
            writeln!(out, "ratio {}", round_sig(ratio))?;
            writeln!(out, "bound {}", verdict(bound_ok))?;
            writeln!(out, "oracle_equality {}", verdict(oracle_ok))?;
            writeln!(out, "{}", verdict(bound_ok && oracle_ok))?;
            if bound_ok && oracle_ok {
                Ok(())
            } else {
                Err(CliError::Check("comparison failed".to_string()))
            }
        }
        Command::Gen {
            n,
            alphabet,
            weight,
            sigma,
            seed,
            output,
        } => {
            let kind: WeightKind = weight.parse()?;
            let inst = generate(&GenParams {
                n,
                alphabet,
                kind,
                sigma,
                seed,
            })?;
            emit(output.as_deref(), &inst.to_json(), out)
        }
        Command::Bench {
            trials,
            n_min,
            n_max,
            alphabet_min,
            alphabet_max,
            weights,
            sigma,
            seed,
            mwis_limit,
            timing,
            output,
        } => {
            let kinds = weights
                .split(',')
                .map(|s| s.trim().parse::<WeightKind>())
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = BenchConfig {
                trials,
                n_min,
                n_max,
                alphabet_min,
                alphabet_max,
                kinds,
                sigma,
                seed,
                mwis_limit,
                timing,
            };
            let records = run_bench(&cfg)?;
            let mut buf = Vec::new();
            write_csv(&records, &mut buf)?;
            emit(output.as_deref(), &String::from_utf8_lossy(&buf), out)?;
            let s = summarize(&records);
            let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| round_sig(v).to_string());
            writeln!(
                err,
                "trials {} with_exact {} min_ratio {} mean_ratio {}",
                s.rows,
                s.with_exact,
                fmt(s.min_ratio),
                fmt(s.mean_ratio)
            )?;
            Ok(())
        }
        Command::Export {
            instance,
            graph,
            relaxed,
            output,
        } => {
            let inst = read_instance(&instance, relaxed)?;
            emit(output.as_deref(), &graph_dot(&inst, graph), out)
        }
    }
}
