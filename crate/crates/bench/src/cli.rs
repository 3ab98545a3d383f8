//! Argument parsing and the subcommand bodies.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hcluster::cost::{cost_general, CostFunction};
use hcluster::cut::{OracleKind, OracleSpec};
use hcluster::exact::{opt_tree_capped, DEFAULT_OPT_CAP};
use hcluster::generate::{generate, FamilyTemplate};
use hcluster::graph::parse_edge_list;
use hcluster::rounding::round_lp_with;
use hcluster::rsc::rsc_build;
use hcluster::sdp::{self, SdpAssignment, SdpLpOptions};
use hcluster::spreading::{solve_spreading_lp_with, LpStatus, SpreadingLpOptions, DEFAULT_LP_CAP};
use hcluster::{ClusterTree, Graph, HcError};

use crate::compare::{resolve_threads, run_compare};
use crate::config::RunConfig;
use crate::error::{read_file, write_file, BenchError, Result};
use crate::fmt::{g10, g12};

#[derive(Debug, Parser)]
#[command(name = "hcbench", version, about = "Hierarchical clustering cost, approximations and relaxations")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph, e.g. `planted_partition:k=4,s=4,p_in=1,p_out=0.05`.
    Gen {
        family: String,
        /// Vertex count for families given without `n`.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Cost of a tree on a graph.
    Cost {
        graph: PathBuf,
        tree: PathBuf,
        #[arg(long, default_value = "identity")]
        f: String,
    },
    /// Recursive sparsest cut.
    Rsc {
        graph: PathBuf,
        #[arg(long, default_value = "exact")]
        oracle: String,
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(long, default_value_t = 20)]
        exact_cap: usize,
        #[arg(long, default_value_t = 1e-8)]
        eig_tol: f64,
        #[arg(long, default_value_t = 10_000)]
        eig_max_iter: usize,
        #[arg(long)]
        local_passes: Option<usize>,
        /// Tree output file.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Per-split trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Optimal tree by subset dynamic programming.
    Opt {
        graph: PathBuf,
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(long, default_value_t = DEFAULT_OPT_CAP)]
        cap: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Spreading-metric LP lower bound.
    LpBound {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LP_CAP)]
        cap: usize,
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Dump the metric as CSV `u,v,d`.
        #[arg(long)]
        metric: Option<PathBuf>,
    },
    /// Solve the LP and round it to a tree.
    RoundLp {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LP_CAP)]
        cap: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write the level relaxation of a graph in text form.
    SdpExport {
        graph: PathBuf,
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check an assignment file (`i j t value` lines) against an exported instance.
    SdpValidate {
        instance: PathBuf,
        assignment: PathBuf,
        #[arg(long, default_value_t = sdp::FRACTIONAL_TOL)]
        tol: f64,
    },
    /// Lower bound from the level LP (vector constraints dropped).
    SdpBound {
        graph: PathBuf,
        #[arg(long, default_value = "identity")]
        f: String,
        #[arg(long, default_value_t = sdp::DEFAULT_SDP_CAP)]
        cap: usize,
    },
    /// Run the comparison harness described by a config file.
    Compare {
        config: PathBuf,
        /// Worker threads; overrides HCBENCH_THREADS.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn load_graph(path: &Path) -> Result<Graph> {
    Ok(parse_edge_list(&read_file(path)?)?)
}

fn cost_fn(s: &str) -> Result<CostFunction> {
    Ok(s.parse()?)
}

/// Write to `path`, or to stdout when absent.
fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => out.write_all(text.as_bytes()).map_err(|e| HcError::from(e).into()),
    }
}

fn line(out: &mut dyn Write, text: String) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| HcError::from(e).into())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.cmd {
        Command::Gen { family, n, seed, out: path } => {
            let spec = family.parse::<FamilyTemplate>()?.instantiate(n, seed)?;
            emit(out, path.as_deref(), &generate(&spec)?.to_edge_list())
        }
        Command::Cost { graph, tree, f } => {
            let g = load_graph(&graph)?;
            let t = ClusterTree::parse(&read_file(&tree)?)?;
            line(out, g12(cost_general(&g, &t, &cost_fn(&f)?)?))
        }
        Command::Rsc { graph, oracle, f, exact_cap, eig_tol, eig_max_iter, local_passes, out: path, trace } => {
            let g = load_graph(&graph)?;
            let f = cost_fn(&f)?;
            let kind: OracleKind = oracle.parse()?;
            let spec = OracleSpec { kind, exact_cap, eig_tol, eig_max_iter, local_max_passes: local_passes };
            let (t, tr) = rsc_build(&g, &spec)?;
            if let Some(p) = trace {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["node", "cluster_size", "small_side", "cut_weight", "sparsity", "level_lo", "level_hi"])?;
                for r in &tr.records {
                    w.write_record([
                        r.node.to_string(),
                        r.cluster_size.to_string(),
                        r.small_side.to_string(),
                        g12(r.cut_weight),
                        g12(r.sparsity),
                        r.charge_levels.0.to_string(),
                        r.charge_levels.1.to_string(),
                    ])?;
                }
                let bytes = w.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))?;
                write_file(&p, &String::from_utf8(bytes).expect("utf-8"))?;
            }
            tree_and_cost(out, path.as_deref(), &t, "cost", cost_general(&g, &t, &f)?)
        }
        Command::Opt { graph, f, cap, out: path } => {
            let g = load_graph(&graph)?;
            let f = cost_fn(&f)?;
            let t = opt_tree_capped(&g, &f, cap)?;
            tree_and_cost(out, path.as_deref(), &t, "opt_cost", cost_general(&g, &t, &f)?)
        }
        Command::LpBound { graph, cap, max_rounds, metric } => {
            let g = load_graph(&graph)?;
            let d = solve_spreading_lp_with(&g, &SpreadingLpOptions { cap, max_rounds })?;
            if let Some(p) = metric {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["u", "v", "d"])?;
                for u in 0..g.n() {
                    for v in u + 1..g.n() {
                        w.write_record([u.to_string(), v.to_string(), g10(d.get(u, v))])?;
                    }
                }
                let bytes = w.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))?;
                write_file(&p, &String::from_utf8(bytes).expect("utf-8"))?;
            }
            if d.status == LpStatus::IterationLimit {
                return Err(HcError::IterationLimit(max_rounds.unwrap_or(10 * g.n() * g.n())).into());
            }
            line(out, format!("lp_value {}", g10(d.objective)))
        }
        Command::RoundLp { graph, cap, out: path } => {
            let g = load_graph(&graph)?;
            let r = round_lp_with(&g, &SpreadingLpOptions { cap, max_rounds: None })?;
            if let Some(p) = &path {
                write_file(p, &format!("{}\n", r.tree))?;
            } else {
                line(out, r.tree.to_string())?;
            }
            let ratio = if r.lp_value > 0.0 { g10(r.tree_cost / r.lp_value) } else { "nan".into() };
            line(out, format!("lp_value {}, tree_cost {}, ratio {}", g10(r.lp_value), g12(r.tree_cost), ratio))
        }
        Command::SdpExport { graph, f, out: path } => {
            let g = load_graph(&graph)?;
            let inst = sdp::build_instance(&g, Some(&cost_fn(&f)?))?;
            emit(out, path.as_deref(), &sdp::export_string(&inst))
        }
        Command::SdpValidate { instance, assignment, tol } => {
            let inst = sdp::import_str(&read_file(&instance)?)?;
            let a = SdpAssignment::parse(&read_file(&assignment)?, inst.n())?;
            let report = sdp::validate(&inst, &a, tol)?;
            line(out, report.to_string())?;
            if report.pass {
                Ok(())
            } else {
                let names: Vec<&str> = report.failing().into_iter().map(sdp::Family::name).collect();
                Err(BenchError::ValidationFailed(names.join(", ")))
            }
        }
        Command::SdpBound { graph, f, cap } => {
            let g = load_graph(&graph)?;
            let f = cost_fn(&f)?;
            let b = sdp::sdp_lower_bound_lp_with(&g, Some(&f), &SdpLpOptions { cap, max_rounds: None })?;
            line(out, format!("lp_value {}, hc_lower_bound {}", g10(b.lp_value), g10(b.bound)))
        }
        Command::Compare { config, threads, csv, json } => {
            let mut cfg = RunConfig::load(&config)?;
            if csv.is_some() {
                cfg.csv = csv;
            }
            if json.is_some() {
                cfg.json = json;
            }
            let report = run_compare(&cfg, resolve_threads(threads))?;
            let text = report.to_csv()?;
            emit(out, cfg.csv.as_deref(), &text)?;
            if let Some(p) = &cfg.json {
                let mut s = serde_json::to_string_pretty(&report.summary(&cfg))?;
                s.push('\n');
                write_file(p, &s)?;
            }
            if report.all_failed() {
                return Err(BenchError::AllRowsFailed(report.rows.len()));
            }
            Ok(())
        }
    }
}

fn tree_and_cost(out: &mut dyn Write, path: Option<&Path>, t: &ClusterTree, label: &str, c: f64) -> Result<()> {
    match path {
        Some(p) => write_file(p, &format!("{t}\n"))?,
        None => line(out, t.to_string())?,
    }
    line(out, format!("{label} {}", g12(c)))
}
