//! Spreading-metric linear program.
//!
//! Variables are pairwise distances `d(u, v)` over all pairs rather than edge
//! lengths plus shortest paths. With every triangle inequality enforced, the
//! shortest-path metric under lengths `l(e) = d(e)` dominates `d` pointwise
//! and coincides with it on edges, so both formulations have the same optimum:
//!
//! ```text
//! min  sum_{e in E} w(e) d(e)
//! s.t. sum_{u in U} d(u, v) >= (|U|^2 - 1) / 4     for all v in U
//!      d(u, v) <= d(u, x) + d(x, v),  d >= 0
//! ```
//!
//! For a fixed center the left-hand side over sets of size `k` is smallest for
//! the `k` nearest vertices, so checking the prefixes of the distance-sorted
//! order separates the whole family. Two-element sets give `d(u, v) >= 3/4`,
//! which is encoded as a variable bound. All triangle rows are present from
//! the start; larger spreading rows are generated lazily.

use std::collections::HashSet;

use crate::error::{HcError, Result};
use crate::graph::Graph;
use crate::lp::{Cmp, CuttingPlaneLp};
use crate::tree::ClusterTree;

pub const FEASIBILITY_TOL: f64 = 1e-7;
pub const VIOLATION_TOL: f64 = 1e-9;
pub const DEFAULT_LP_CAP: usize = 30;

/// Index of the unordered pair `{u, v}`, `u != v`, in a condensed upper triangle.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    IterationLimit,
}

/// A symmetric pairwise distance function with `d(u, u) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSolution {
    n: usize,
    d: Vec<f64>,
    /// `sum_{e in E} w(e) d(e)`
    pub objective: f64,
    pub status: LpStatus,
}

impl MetricSolution {
    /// Metric from a distance callback; `objective` is evaluated on `g`.
    pub fn from_fn(g: &Graph, mut dist: impl FnMut(usize, usize) -> f64) -> Self {
        let n = g.n();
        let mut d = vec![0.0; num_pairs(n)];
        for u in 0..n {
            for v in u + 1..n {
                d[pair_index(n, u, v)] = dist(u, v);
            }
        }
        Self::from_condensed(g, d, LpStatus::Optimal)
    }

    fn from_condensed(g: &Graph, d: Vec<f64>, status: LpStatus) -> Self {
        let n = g.n();
        let objective = g.edges().iter().map(|e| e.w * d[pair_index(n, e.u, e.v)]).sum();
        MetricSolution { n, d, objective, status }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        if u == v {
            0.0
        } else {
            self.d[pair_index(self.n, u, v)]
        }
    }

    /// Largest `d(u, v) - d(u, x) - d(x, v)` over all triples (0 if none positive).
    pub fn max_triangle_violation(&self) -> f64 {
        triangle_violations(self.n, &self.d, 0.0, usize::MAX)
            .first()
            .map_or(0.0, |t| t.amount)
    }

    /// Distances from `v` to every vertex, sorted ascending with ties by id.
    fn sorted_from(&self, v: usize) -> Vec<(f64, usize)> {
        let mut row: Vec<(f64, usize)> = (0..self.n).map(|u| (self.get(u, v), u)).collect();
        row.sort_by(|a, b| {
            // the center itself always comes first
            (a.1 != v).cmp(&(b.1 != v)).then(a.0.total_cmp(&b.0)).then(a.1.cmp(&b.1))
        });
        row
    }
}

/// A violated spreading row: `sum_{u in set} d(u, center) < (|set|^2 - 1) / 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingViolation {
    pub center: usize,
    /// Distance-sorted prefix around `center`, starting with `center` itself.
    pub set: Vec<usize>,
    /// Left-hand side minus right-hand side (negative).
    pub slack: f64,
}

fn spreading_rhs(k: usize) -> f64 {
    ((k * k) as f64 - 1.0) / 4.0
}

/// Most violated prefix for each center whose worst slack is below `-tol`.
fn violations_per_center(d: &MetricSolution, tol: f64) -> Vec<SpreadingViolation> {
    let mut out = Vec::new();
    for v in 0..d.n {
        let row = d.sorted_from(v);
        let mut sum = 0.0;
        let mut worst: Option<(f64, usize)> = None;
        for k in 2..=d.n {
            sum += row[k - 1].0;
            let slack = sum - spreading_rhs(k);
            if slack < -tol && worst.is_none_or(|(s, _)| slack < s) {
                worst = Some((slack, k));
            }
        }
        if let Some((slack, k)) = worst {
            out.push(SpreadingViolation { center: v, set: row[..k].iter().map(|x| x.1).collect(), slack });
        }
    }
    out
}

/// Scan every center's sorted prefixes and return the most violated row, if any.
/// Ties go to the smaller center, then the shorter prefix.
pub fn separation_oracle(g: &Graph, d: &MetricSolution) -> Option<SpreadingViolation> {
    debug_assert_eq!(g.n(), d.n);
    let mut best: Option<SpreadingViolation> = None;
    for v in violations_per_center(d, VIOLATION_TOL) {
        if best.as_ref().is_none_or(|b| v.slack < b.slack) {
            best = Some(v);
        }
    }
    best
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TriangleViolation {
    /// `d(a, c) <= d(a, b) + d(b, c)` is violated by `amount`.
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub amount: f64,
}

/// Violated triangles of a condensed metric, most violated first, at most `limit`.
pub(crate) fn triangle_violations(n: usize, d: &[f64], tol: f64, limit: usize) -> Vec<TriangleViolation> {
    let get = |u: usize, v: usize| d[pair_index(n, u, v)];
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (ij, ik, jk) = (get(i, j), get(i, k), get(j, k));
                for (a, b, c, amount) in [(i, k, j, ij - ik - jk), (i, j, k, ik - ij - jk), (j, i, k, jk - ij - ik)] {
                    if amount > tol {
                        out.push(TriangleViolation { a, b, c, amount });
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| y.amount.total_cmp(&x.amount).then((x.a, x.b, x.c).cmp(&(y.a, y.b, y.c))));
    out.truncate(limit);
    out
}

#[derive(Debug, Clone)]
pub struct SpreadingLpOptions {
    pub cap: usize,
    /// Round limit; `None` means `10 n^2`.
    pub max_rounds: Option<usize>,
}

impl Default for SpreadingLpOptions {
    fn default() -> Self {
        SpreadingLpOptions { cap: DEFAULT_LP_CAP, max_rounds: None }
    }
}

pub fn solve_spreading_lp(g: &Graph) -> Result<MetricSolution> {
    solve_spreading_lp_with(g, &SpreadingLpOptions::default())
}

/// Constraint generation: start from every triangle row and the size-2
/// spreading bounds, then repeatedly add the most violated spreading row of
/// each center until the oracle finds nothing new.
pub fn solve_spreading_lp_with(g: &Graph, opts: &SpreadingLpOptions) -> Result<MetricSolution> {
    let n = g.n();
    if n == 0 {
        return Err(HcError::TooSmall("graph has no vertices".into()));
    }
    if n > opts.cap {
        return Err(HcError::OverCap { what: "spreading LP", n, cap: opts.cap });
    }
    if n == 1 {
        return Ok(MetricSolution { n, d: Vec::new(), objective: 0.0, status: LpStatus::Optimal });
    }
    let mut obj = vec![0.0; num_pairs(n)];
    for e in g.edges() {
        obj[pair_index(n, e.u, e.v)] = e.w;
    }
    let mut lp = CuttingPlaneLp::minimize(obj.into_iter().map(|c| (c, (spreading_rhs(2), f64::INFINITY))));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (ij, ik, jk) = (pair_index(n, i, j), pair_index(n, i, k), pair_index(n, j, k));
                for (long, a, b) in [(ij, ik, jk), (ik, ij, jk), (jk, ij, ik)] {
                    lp.add_row(&[(long, 1.0), (a, -1.0), (b, -1.0)], Cmp::Le, 0.0);
                }
            }
        }
    }

    let max_rounds = opts.max_rounds.unwrap_or(10 * n * n);
    let mut pool: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut rounds = 0;
    loop {
        lp.solve()?;
        let metric = MetricSolution::from_condensed(g, lp.values(), LpStatus::Optimal);
        let mut added = 0;
        for v in violations_per_center(&metric, VIOLATION_TOL) {
            let mut members = v.set[1..].to_vec();
            members.sort_unstable();
            if pool.insert((v.center, members)) {
                let terms: Vec<(usize, f64)> = v.set[1..].iter().map(|&u| (pair_index(n, u, v.center), 1.0)).collect();
                lp.add_row(&terms, Cmp::Ge, spreading_rhs(v.set.len()));
                added += 1;
            }
        }
        if added == 0 {
            // Anything still reported is within solver precision of a row already in the pool.
            return Ok(metric);
        }
        rounds += 1;
        if rounds >= max_rounds {
            return Ok(MetricSolution { status: LpStatus::IterationLimit, ..metric });
        }
    }
}

/// Whether the leaf-count ultrametric of `tree` satisfies every spreading row and
/// every triangle inequality.
pub fn check_ultrametric_feasible(g: &Graph, tree: &ClusterTree) -> Result<bool> {
    tree.check_leaves(g.n())?;
    let d = tree_metric(g, tree);
    Ok(separation_oracle(g, &d).is_none() && d.max_triangle_violation() <= FEASIBILITY_TOL)
}

/// `d(u, v) = |leaves(lca(u, v))|`.
pub fn tree_metric(g: &Graph, tree: &ClusterTree) -> MetricSolution {
    MetricSolution::from_fn(g, |u, v| tree.size(tree.lca(u, v)) as f64)
}

/// `min over centers v and k >= 2 of 10 * (k-th smallest distance from v) / k`.
/// Feasible solutions give at least 1; `+inf` when `n < 2`.
pub fn diameter_check(d: &MetricSolution) -> f64 {
    let mut worst = f64::INFINITY;
    for v in 0..d.n {
        let row = d.sorted_from(v);
        for k in 2..=d.n {
            worst = worst.min(row[k - 1].0 * 10.0 / k as f64);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j, 1.0));
            }
        }
        Graph::new(n, e).unwrap()
    }

    fn p3() -> Graph {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn pair_indexing_is_dense() {
        let n = 7;
        let mut seen = vec![false; num_pairs(n)];
        for u in 0..n {
            for v in u + 1..n {
                let i = pair_index(n, u, v);
                assert_eq!(i, pair_index(n, v, u));
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.into_iter().all(|x| x));
    }

    #[test]
    fn oracle_examples() {
        let g = k(2);
        let half = MetricSolution::from_fn(&g, |_, _| 0.5);
        let v = separation_oracle(&g, &half).unwrap();
        assert_eq!(v.set.len(), 2);
        assert!((v.slack + 0.25).abs() < 1e-15);
        assert!(separation_oracle(&g, &MetricSolution::from_fn(&g, |_, _| 0.75)).is_none());
        let g3 = k(3);
        assert!(separation_oracle(&g3, &MetricSolution::from_fn(&g3, |_, _| 1.0)).is_none());
    }

    #[test]
    fn lp_fixtures() {
        let s = solve_spreading_lp(&k(2)).unwrap();
        assert!((s.objective - 0.75).abs() < 1e-6);
        assert_eq!(s.status, LpStatus::Optimal);
        let s = solve_spreading_lp(&k(3)).unwrap();
        assert!((s.objective - 3.0).abs() < 1e-6);
        let s = solve_spreading_lp(&p3()).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-6);
        let one = solve_spreading_lp(&Graph::empty(1)).unwrap();
        assert_eq!(one.objective, 0.0);
    }

    #[test]
    fn lp_cap() {
        let opts = SpreadingLpOptions { cap: 3, max_rounds: None };
        assert!(matches!(solve_spreading_lp_with(&k(4), &opts), Err(HcError::OverCap { .. })));
    }

    #[test]
    fn ultrametric_examples() {
        let t = ClusterTree::parse("((0,1),2)").unwrap();
        assert!(check_ultrametric_feasible(&p3(), &t).unwrap());
        let d = tree_metric(&p3(), &t);
        assert_eq!((d.get(0, 1), d.get(1, 2), d.get(0, 2)), (2.0, 3.0, 3.0));
        assert!(check_ultrametric_feasible(&k(4), &ClusterTree::parse("((0,2),(1,3))").unwrap()).unwrap());
        assert!(check_ultrametric_feasible(&k(2), &ClusterTree::parse("(0,1)").unwrap()).unwrap());
    }

    #[test]
    fn diameter_examples() {
        let g2 = k(2);
        assert_eq!(diameter_check(&MetricSolution::from_fn(&g2, |_, _| 0.75)), 3.75);
        let g3 = k(3);
        let d = diameter_check(&MetricSolution::from_fn(&g3, |_, _| 1.0));
        assert!((d - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(diameter_check(&MetricSolution::from_fn(&g3, |_, _| 0.0)), 0.0);
    }
}
