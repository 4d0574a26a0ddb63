//! The `hoplp` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dual::{solve, SolveConfig};
use crate::edgesel::{initial_tree, tighten_loop, TightenConfig};
use crate::error::{Error, Result};
use crate::exact::brute_force_map;
use crate::experiment::{run_experiment, ExperimentConfig, Family};
use crate::generate;
use crate::hop::EdgeSet;
use crate::model::{read_model, write_model, EnergyModel};

const EXPERIMENT_SCHEMAS: &str = "\
Output files: <outdir>/<family>.csv and <outdir>/<family>_summary.json

CSV columns:
  hamming          k,lambda,seed,map_energy,empty_bound,empty_integral,tree_bound,tree_certified
  edgesel-compare  seed,criterion,additions,bound,edge_added
  avgcut-grid      seed,tw_max,edges_in_S,treewidth_bound,bound,energy,certified,outcome

Config keys (all optional): n, rows, cols, seeds, first_seed, lambdas, ks, lambda,
batch, tw_max, max_rounds, steps, random_seeds, max_sweeps, tol_bound, cert_tol";

#[derive(Debug, Parser)]
#[command(name = "hoplp", version, about = "MAP inference with a high-order potential via tightened LP relaxations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the relaxation for one edge set and decode an assignment
    Solve {
        model: PathBuf,
        /// all, tree, none, or file:<path> holding [[i, j], ...]
        #[arg(long, default_value = "tree")]
        edges: String,
        /// Reject edge sets whose tree-width bound exceeds this
        #[arg(long)]
        tw_max: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        max_sweeps: usize,
        /// Stop when a sweep improves the bound by less than this
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the bound trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exact MAP by enumeration (n <= 25)
    Oracle { model: PathBuf },
    /// Grow the edge set by weak cycle agreement until certified or stuck
    Tighten {
        model: PathBuf,
        /// Edges added per round
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        tw_max: usize,
        #[arg(long, default_value_t = 50)]
        rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the selection trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Generate a model file
    Gen {
        family: GenFamily,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Exclusion radius (hamming-tree)
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 4)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded batch experiment
    #[command(after_help = EXPERIMENT_SCHEMAS)]
    Experiment {
        /// hamming, edgesel-compare or avgcut-grid
        family: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        outdir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    ChainExclusion,
    AvgcutChain,
    HammingTree,
    AvgcutGrid,
}

/// Process exit status for an error: 3 for an infeasible HOP, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InfeasibleHop(_) => 3,
        _ => 2,
    }
}

fn load(path: &Path) -> Result<EnergyModel> {
    read_model(&fs::read_to_string(path)?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parse `all`, `tree`, `none` or `file:<path>`.
pub fn edge_set_for(model: &EnergyModel, spec: &str) -> Result<EdgeSet> {
    match spec {
        "all" => Ok(EdgeSet::all(model)),
        "tree" => Ok(initial_tree(model)),
        "none" => Ok(EdgeSet::empty(model)),
        _ => {
            let path = spec
                .strip_prefix("file:")
                .ok_or_else(|| Error::input(format!("unknown edge set `{spec}`")))?;
            let pairs: Vec<(usize, usize)> = serde_json::from_str(&fs::read_to_string(path)?)?;
            EdgeSet::new(model, &pairs)
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Solve {
            model,
            edges,
            tw_max,
            max_sweeps,
            tol,
            out: report,
            trace,
        } => {
            let model = load(&model)?;
            let s = edge_set_for(&model, &edges)?;
            if let Some(limit) = tw_max {
                if s.tw_bound() > limit {
                    return Err(Error::input(format!(
                        "edge set has tree-width bound {} above --tw-max {limit}",
                        s.tw_bound()
                    )));
                }
            }
            let cfg = SolveConfig {
                max_sweeps,
                tol_bound: tol,
                ..SolveConfig::default()
            };
            let r = solve(&model, &s, &cfg)?;
            let mut doc = r.to_json();
            doc["edges_in_S"] = json!(s.len());
            doc["treewidth_bound"] = json!(s.tw_bound());
            emit(out, report.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            if let Some(p) = trace {
                fs::write(p, r.trace_csv())?;
            }
        }
        Command::Oracle { model } => {
            let model = load(&model)?;
            let (x, e) = brute_force_map(&model)?;
            let doc = json!({ "assignment": x.as_slice(), "energy": e });
            emit(out, None, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
        }
        Command::Tighten {
            model,
            k,
            tw_max,
            rounds,
            out: report,
            trace,
        } => {
            let model = load(&model)?;
            let cfg = TightenConfig {
                k,
                tw_max,
                max_rounds: rounds,
                ..TightenConfig::default()
            };
            let t = tighten_loop(&model, &cfg)?;
            let mut doc = t.result.to_json();
            doc["outcome"] = json!(t.outcome.to_string());
            doc["edges"] = json!(t.edge_set.edges());
            doc["treewidth_bound"] = json!(t.edge_set.tw_bound());
            emit(out, report.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            if let Some(p) = trace {
                fs::write(p, t.trace.to_csv()?)?;
            }
        }
        Command::Gen {
            family,
            n,
            c,
            eps,
            lambda,
            k,
            rows,
            cols,
            seed,
            out: path,
        } => {
            let model = match family {
                GenFamily::ChainExclusion => {
                    generate::chain_exclusion(n.unwrap_or(6), c.unwrap_or(10.0), eps.unwrap_or(0.1))?
                }
                GenFamily::AvgcutChain => {
                    generate::avgcut_chain(n.unwrap_or(8), c.unwrap_or(1.0), lambda.unwrap_or(0.1))?
                }
                GenFamily::HammingTree => {
                    generate::hamming_tree(n.unwrap_or(10), lambda.unwrap_or(1.0), k.unwrap_or(2), seed)?
                }
                GenFamily::AvgcutGrid => generate::avgcut_grid(rows, cols, seed, lambda)?,
            };
            emit(out, path.as_deref(), &write_model(&model))?;
        }
        Command::Experiment { family, config, outdir } => {
            let family: Family = family.parse()?;
            let cfg = match config {
                Some(p) => ExperimentConfig::from_json(&fs::read_to_string(p)?)?,
                None => ExperimentConfig::default(),
            };
            let report = run_experiment(family, &cfg)?;
            let (csv, summary) = report.write_to(&outdir)?;
            writeln!(out, "{}\n{}", csv.display(), summary.display())?;
        }
    }
    Ok(())
}
