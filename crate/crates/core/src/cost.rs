//! Tree cost functions, level partitions and the level-sum identity.
//!
//! For a tree `T` and level `t`, the level partition groups vertices into the
//! maximal clusters of `T` with at most `t` leaves (all singletons at `t = 0`).
//! `E_T(t)` is the set of edges whose endpoints land in different blocks. Each
//! edge whose lowest common ancestor has `r` leaves is cut at exactly the
//! levels `0..r`, so `sum_t w(E_T(t)) * g(t) = sum_e w_e * f(r_e)` with
//! `g(t) = f(t + 1) - f(t)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{HcError, Result};
use crate::graph::{Edge, Graph};
use crate::tree::{ClusterTree, NodeId};

/// A strictly increasing function on the nonnegative integers with `f(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum CostFunction {
    Identity,
    Square,
    /// `ln(1 + x)`
    Log1p,
    /// Explicit values `f(0), f(1), ...`.
    Table(Vec<f64>),
}

impl CostFunction {
    /// Panics for a table argument past its end; call [`CostFunction::check`] first.
    pub fn eval(&self, x: usize) -> f64 {
        match self {
            CostFunction::Identity => x as f64,
            CostFunction::Square => (x as f64) * (x as f64),
            CostFunction::Log1p => (x as f64).ln_1p(),
            CostFunction::Table(v) => v[x],
        }
    }

    /// `g(t) = f(t + 1) - f(t)`
    pub fn increment(&self, t: usize) -> f64 {
        match self {
            CostFunction::Identity => 1.0,
            CostFunction::Square => 2.0 * t as f64 + 1.0,
            _ => self.eval(t + 1) - self.eval(t),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, CostFunction::Identity)
    }

    /// Check that `f` is defined, zero at 0 and strictly increasing on `0..=n`.
    pub fn check(&self, n: usize) -> Result<()> {
        let CostFunction::Table(v) = self else { return Ok(()) };
        let bad = |m: String| Err(HcError::InvalidCostFunction(m));
        if v.len() < n + 1 {
            return bad(format!("table has {} entries, need f(0..={n})", v.len()));
        }
        if v[0] != 0.0 {
            return bad(format!("f(0) = {} but must be 0", v[0]));
        }
        if let Some(i) = (1..=n).find(|&i| !(v[i] > v[i - 1]) || !v[i].is_finite()) {
            return bad(format!("table not strictly increasing at {i}"));
        }
        Ok(())
    }
}

impl fmt::Display for CostFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostFunction::Identity => f.write_str("identity"),
            CostFunction::Square => f.write_str("square"),
            CostFunction::Log1p => f.write_str("log1p"),
            CostFunction::Table(v) => {
                f.write_str("table:")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for CostFunction {
    type Err = HcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "identity" | "id" => Ok(CostFunction::Identity),
            "square" => Ok(CostFunction::Square),
            "log1p" => Ok(CostFunction::Log1p),
            other => {
                let Some(rest) = other.strip_prefix("table:") else {
                    return Err(HcError::InvalidCostFunction(format!("unknown function {other:?}")));
                };
                let values = rest
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| HcError::InvalidCostFunction(format!("table: {e}")))?;
                let f = CostFunction::Table(values);
                f.check(0)?;
                Ok(f)
            }
        }
    }
}

/// Cost with leaf counts: `sum_{ij in E} w_ij * |leaves(lca(i, j))|`.
pub fn cost(g: &Graph, t: &ClusterTree) -> Result<f64> {
    cost_general(g, t, &CostFunction::Identity)
}

/// Cost with `f` applied to leaf counts.
pub fn cost_general(g: &Graph, t: &ClusterTree, f: &CostFunction) -> Result<f64> {
    t.check_leaves(g.n())?;
    f.check(g.n())?;
    Ok(g.edges().iter().map(|e| e.w * f.eval(t.size(t.lca(e.u, e.v)))).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelPartition {
    pub t: usize,
    /// Blocks in left-to-right tree order; each block lists its vertices in tree order.
    pub blocks: Vec<Vec<usize>>,
    /// `block_of[v]` indexes into `blocks`.
    pub block_of: Vec<usize>,
}

/// Partition of the leaves into maximal clusters of size at most `t`.
/// Level 0 is treated like level 1 (all singletons).
pub fn level_partition(tree: &ClusterTree, t: usize) -> LevelPartition {
    let cap = t.max(1);
    let n = tree.num_leaves();
    let max_label = tree.leaves(tree.root()).into_iter().max().unwrap_or(0);
    let mut block_of = vec![usize::MAX; max_label + 1];
    let mut blocks = Vec::new();
    let mut stack: Vec<NodeId> = vec![tree.root()];
    while let Some(x) = stack.pop() {
        if tree.size(x) <= cap {
            let leaves = tree.leaves(x);
            for &v in &leaves {
                block_of[v] = blocks.len();
            }
            blocks.push(leaves);
        } else {
            stack.extend(tree.children(x).iter().rev());
        }
    }
    debug_assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), n);
    LevelPartition { t, blocks, block_of }
}

/// `E_T(t)`: edges separated by the level-`t` partition, `0 <= t <= n - 1`.
pub fn level_cut_edges(g: &Graph, tree: &ClusterTree, t: usize) -> Result<Vec<Edge>> {
    tree.check_leaves(g.n())?;
    let max = g.n().saturating_sub(1);
    if t > max {
        return Err(HcError::LevelOutOfRange { t, max });
    }
    if t == 0 {
        return Ok(g.edges().to_vec());
    }
    let p = level_partition(tree, t);
    Ok(g.edges()
        .iter()
        .filter(|e| p.block_of[e.u] != p.block_of[e.v])
        .copied()
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelIdentity {
    /// `sum_{t=0}^{n-1} w(E_T(t)) * g(t)`, computed from explicit level partitions.
    pub lhs: f64,
    /// `cost_general(G, T, f)`.
    pub rhs: f64,
    pub equal: bool,
}

pub const LEVEL_IDENTITY_TOL: f64 = 1e-9;

pub fn check_level_identity(g: &Graph, tree: &ClusterTree, f: &CostFunction) -> Result<LevelIdentity> {
    let rhs = cost_general(g, tree, f)?;
    let mut lhs = 0.0;
    for t in 0..g.n() {
        let cut: f64 = level_cut_edges(g, tree, t)?.iter().map(|e| e.w).sum();
        lhs += cut * f.increment(t);
    }
    Ok(LevelIdentity { lhs, rhs, equal: (lhs - rhs).abs() <= LEVEL_IDENTITY_TOL })
}

/// Which denominator the distortion constant uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfVariant {
    /// `f(n') / (f(n'/2) - f(n'/4))`, the recursive sparsest cut charge.
    Rsc,
    /// `f(n') / (f(n'/4) - f(n'/8))`, the level-wise SDP rounding charge.
    Sdp,
}

/// Distortion constant `c_f` over `1 <= n' <= n` with floored divisions.
/// Values of `n'` whose denominator is not positive are skipped.
pub fn compute_cf(f: &CostFunction, n: usize, variant: CfVariant) -> Result<f64> {
    let (min_n, hi, lo) = match variant {
        CfVariant::Rsc => (4, 2, 4),
        CfVariant::Sdp => (8, 4, 8),
    };
    if n < min_n {
        return Err(HcError::TooSmall(format!("c_f ({variant:?}) needs n >= {min_n}, got {n}")));
    }
    f.check(n)?;
    // Below min_n the floored denominators degenerate to f(1) - f(0) or vanish.
    let mut best: Option<f64> = None;
    for m in min_n..=n {
        let den = f.eval(m / hi) - f.eval(m / lo);
        if den > 0.0 {
            let r = f.eval(m) / den;
            best = Some(best.map_or(r, |b: f64| b.max(r)));
        }
    }
    best.ok_or_else(|| HcError::TooSmall("no n' with a positive denominator".into()))
}
