//! The comparison harness behind `hcbench compare`.
//!
//! Each instance runs in its own thread so a per-instance deadline can be
//! enforced; a pool of `threads` workers drives the instances and results are
//! stored by instance index, so the CSV order never depends on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Mutex};
use std::time::{Duration, Instant};

use hcluster::cost::{cost_general, CostFunction};
use hcluster::cut::{OracleKind, OracleSpec};
use hcluster::exact::opt_cost_capped;
use hcluster::generate::generate;
use hcluster::rounding::round_lp_with;
use hcluster::rsc::rsc_build;
use hcluster::sdp::{round_levelwise, sdp_lower_bound_lp_with, SdpLpOptions};
use hcluster::spreading::SpreadingLpOptions;
use hcluster::{Graph, HcError};
use serde_json::json;

use crate::config::{InstanceSpec, RunConfig};
use crate::error::{BenchError, Result};
use crate::fmt::{g12, opt_g12};

pub const ALGORITHMS: [&str; 5] = ["rsc-exact", "rsc-spectral", "lp-round", "sdp-lp-bound", "opt"];
const RSC_EXACT: usize = 0;
const RSC_SPECTRAL: usize = 1;
const LP_ROUND: usize = 2;
const SDP_LP: usize = 3;
const OPT: usize = 4;

pub const CSV_COLUMNS: [&str; 15] = [
    "instance",
    "n",
    "m",
    "generator",
    "seed",
    "algorithm",
    "status",
    "cost",
    "opt_cost",
    "lp_bound",
    "sdp_lp_bound",
    "ratio_vs_opt",
    "ratio_vs_lp",
    "message",
    "time_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Skipped,
    Error,
    Timeout,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Skipped => "skipped",
            Status::Error => "error",
            Status::Timeout => "timeout",
        }
    }

    fn failed(self) -> bool {
        matches!(self, Status::Error | Status::Timeout)
    }
}

/// Result of one algorithm on one instance.
#[derive(Debug, Clone)]
struct Outcome {
    status: Status,
    cost: Option<f64>,
    /// Lower bound produced along the way (LP value or level-LP bound).
    bound: Option<f64>,
    message: String,
    time_ms: f64,
}

impl Outcome {
    fn skipped(why: String) -> Self {
        Outcome { status: Status::Skipped, cost: None, bound: None, message: why, time_ms: 0.0 }
    }

    fn timeout(limit: Duration) -> Self {
        Outcome {
            status: Status::Timeout,
            cost: None,
            bound: None,
            message: format!("instance exceeded {} s", g12(limit.as_secs_f64())),
            time_ms: limit.as_secs_f64() * 1e3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub generator: String,
    pub seed: u64,
    pub algorithm: String,
    pub status: Status,
    pub cost: Option<f64>,
    pub opt_cost: Option<f64>,
    pub lp_bound: Option<f64>,
    pub sdp_lp_bound: Option<f64>,
    pub ratio_vs_opt: Option<f64>,
    pub ratio_vs_lp: Option<f64>,
    pub message: String,
    pub time_ms: f64,
}

impl Row {
    fn record(&self) -> [String; 15] {
        [
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.generator.clone(),
            self.seed.to_string(),
            self.algorithm.clone(),
            self.status.as_str().to_string(),
            opt_g12(self.cost),
            opt_g12(self.opt_cost),
            opt_g12(self.lp_bound),
            opt_g12(self.sdp_lp_bound),
            opt_g12(self.ratio_vs_opt),
            opt_g12(self.ratio_vs_lp),
            self.message.clone(),
            format!("{:.3}", self.time_ms),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<Row>,
    pub instances: usize,
}

impl Report {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.write_record(r.record())?;
        }
        let bytes = w.into_inner().map_err(|e| BenchError::Csv(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Per-algorithm counts and ratio statistics; `"schema": 1`.
    pub fn summary(&self, cfg: &RunConfig) -> serde_json::Value {
        let mut algs = serde_json::Map::new();
        for name in ALGORITHMS {
            let rows: Vec<&Row> = self.rows.iter().filter(|r| r.algorithm == name).collect();
            let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
            let stats = |pick: fn(&Row) -> Option<f64>| {
                let v: Vec<f64> = rows.iter().filter_map(|r| pick(r)).collect();
                if v.is_empty() {
                    return (serde_json::Value::Null, serde_json::Value::Null);
                }
                let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mean = v.iter().sum::<f64>() / v.len() as f64;
                (json!(max), json!(mean))
            };
            let (max_opt, mean_opt) = stats(|r| r.ratio_vs_opt);
            let (max_lp, mean_lp) = stats(|r| r.ratio_vs_lp);
            algs.insert(
                name.to_string(),
                json!({
                    "ok": count(Status::Ok),
                    "skipped": count(Status::Skipped),
                    "error": count(Status::Error),
                    "timeout": count(Status::Timeout),
                    "max_ratio_vs_opt": max_opt,
                    "mean_ratio_vs_opt": mean_opt,
                    "max_ratio_vs_lp": max_lp,
                    "mean_ratio_vs_lp": mean_lp,
                }),
            );
        }
        json!({
            "schema": 1,
            "f": cfg.f.to_string(),
            "instances": self.instances,
            "rows": self.rows.len(),
            "algorithms": algs,
        })
    }

    /// True when rows were attempted and none of them succeeded. Skipped rows
    /// do not count either way.
    pub fn all_failed(&self) -> bool {
        let attempted: Vec<&Row> = self.rows.iter().filter(|r| r.status != Status::Skipped).collect();
        !attempted.is_empty() && attempted.iter().all(|r| r.status.failed())
    }
}

/// Worker count: the explicit value, else `HCBENCH_THREADS`, else the
/// available parallelism.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("HCBENCH_THREADS").ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

pub fn run_compare(cfg: &RunConfig, threads: usize) -> Result<Report> {
    let instances = cfg.instances()?;
    let slots: Vec<Mutex<Option<Vec<Row>>>> = instances.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..threads.max(1).min(instances.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= instances.len() {
                    break;
                }
                let rows = run_instance(cfg, &instances[i]);
                *slots[i].lock().expect("slot lock") = Some(rows);
            });
        }
    });
    let rows = slots.into_iter().flat_map(|m| m.into_inner().expect("slot lock").unwrap_or_default()).collect();
    Ok(Report { rows, instances: instances.len() })
}

fn run_instance(cfg: &RunConfig, inst: &InstanceSpec) -> Vec<Row> {
    let row = |g: Option<&Graph>, alg: usize, o: Outcome| Row {
        instance: inst.id.clone(),
        n: inst.spec.num_vertices(),
        m: g.map_or(0, Graph::m),
        generator: inst.spec.to_string(),
        seed: inst.spec.seed,
        algorithm: ALGORITHMS[alg].to_string(),
        status: o.status,
        cost: o.cost,
        opt_cost: None,
        lp_bound: None,
        sdp_lp_bound: None,
        ratio_vs_opt: None,
        ratio_vs_lp: None,
        message: o.message,
        time_ms: o.time_ms,
    };
    let g = match generate(&inst.spec) {
        Ok(g) => g,
        Err(e) => {
            let o = Outcome { status: Status::Error, cost: None, bound: None, message: e.to_string(), time_ms: 0.0 };
            return (0..ALGORITHMS.len()).map(|a| row(None, a, o.clone())).collect();
        }
    };

    let (tx, rx) = mpsc::channel();
    {
        let (g, cfg) = (g.clone(), cfg.clone());
        // Detached: on timeout the thread is abandoned and its sends are dropped.
        std::thread::spawn(move || {
            for alg in [OPT, RSC_EXACT, RSC_SPECTRAL, LP_ROUND, SDP_LP] {
                if tx.send((alg, run_algorithm(&cfg, &g, alg))).is_err() {
                    break;
                }
            }
        });
    }
    let deadline = Instant::now() + cfg.timeout;
    let mut outcomes: Vec<Option<Outcome>> = vec![None; ALGORITHMS.len()];
    for _ in 0..ALGORITHMS.len() {
        let left = deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(left) {
            Ok((alg, o)) => outcomes[alg] = Some(o),
            Err(_) => break,
        }
    }
    let outcomes: Vec<Outcome> = outcomes.into_iter().map(|o| o.unwrap_or_else(|| Outcome::timeout(cfg.timeout))).collect();

    let ok = |o: &Outcome| o.status == Status::Ok;
    let opt = outcomes[OPT].cost.filter(|_| ok(&outcomes[OPT]));
    // the spreading LP bounds the identity cost only
    let lp = outcomes[LP_ROUND].bound.filter(|_| ok(&outcomes[LP_ROUND]) && cfg.f.is_identity());
    let sdp = outcomes[SDP_LP].bound.filter(|_| ok(&outcomes[SDP_LP]));
    let best_lower = match (lp, sdp) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    outcomes
        .into_iter()
        .enumerate()
        .map(|(alg, o)| {
            let mut r = row(Some(&g), alg, o);
            r.opt_cost = opt;
            r.lp_bound = lp;
            r.sdp_lp_bound = sdp;
            if let Some(c) = r.cost {
                r.ratio_vs_opt = opt.filter(|&o| o > 0.0).map(|o| c / o);
                r.ratio_vs_lp = best_lower.filter(|&b| b > 0.0).map(|b| c / b);
            }
            r
        })
        .collect()
}

fn run_algorithm(cfg: &RunConfig, g: &Graph, alg: usize) -> Outcome {
    let n = g.n();
    let cap = match alg {
        OPT => cfg.opt_cap,
        RSC_EXACT => cfg.exact_cap,
        LP_ROUND => cfg.lp_cap,
        SDP_LP => cfg.sdp_cap,
        _ => usize::MAX,
    };
    if n > cap {
        return Outcome::skipped(format!("n = {n} exceeds cap {cap}"));
    }
    let start = Instant::now();
    let result = compute(cfg, g, alg, &cfg.f);
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok((cost, bound)) => Outcome { status: Status::Ok, cost: Some(cost), bound, message: String::new(), time_ms },
        Err(e) => Outcome { status: Status::Error, cost: None, bound: None, message: e.to_string(), time_ms },
    }
}

/// `(cost under f, lower bound if the algorithm has one)`.
fn compute(cfg: &RunConfig, g: &Graph, alg: usize, f: &CostFunction) -> std::result::Result<(f64, Option<f64>), HcError> {
    match alg {
        OPT => Ok((opt_cost_capped(g, f, cfg.opt_cap)?, None)),
        RSC_EXACT | RSC_SPECTRAL => {
            let oracle = if alg == RSC_EXACT {
                OracleSpec { exact_cap: cfg.exact_cap, ..OracleSpec::new(OracleKind::Exact) }
            } else {
                OracleSpec::new(cfg.oracle)
            };
            let (tree, _) = rsc_build(g, &oracle)?;
            Ok((cost_general(g, &tree, f)?, None))
        }
        LP_ROUND => {
            let r = round_lp_with(g, &SpreadingLpOptions { cap: cfg.lp_cap, ..Default::default() })?;
            Ok((cost_general(g, &r.tree, f)?, Some(r.lp_value)))
        }
        SDP_LP => {
            if g.n() < 2 {
                return Ok((0.0, Some(0.0)));
            }
            let b = sdp_lower_bound_lp_with(g, Some(f), &SdpLpOptions { cap: cfg.sdp_cap, ..Default::default() })?;
            let tree = round_levelwise(g, &b.assignment)?;
            Ok((cost_general(g, &tree, f)?, Some(b.bound)))
        }
        _ => unreachable!("unknown algorithm index"),
    }
}
