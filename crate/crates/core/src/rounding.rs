//! Sphere-growing decomposition of a metric into a cluster tree.
//!
//! Each connected cluster is cut by a ball around one end of an approximate
//! diameter pair. The ball volume counts full edge volume inside the ball,
//! the partial length `r - d(v, u)` of every boundary edge, and a seed volume
//! per vertex so that the volume is positive from radius zero.
//!
//! Between two consecutive vertex events the cut weight is constant and the
//! ball volume grows with slope equal to the cut weight. If every candidate
//! radius (events, midpoints, and `R = diam / 4`) had ratio above
//! `k = 8 ln(vol / seed) / diam`, each interval of length `l` would grow
//! `ln(volume)` by more than `k l / 2`, so the whole range would grow it by
//! more than `ln(vol / seed)`, which is impossible. This is the bound checked
//! after every cut.

use crate::cost::cost;
use crate::cut::component_cut;
use crate::error::{HcError, Result};
use crate::graph::Graph;
use crate::spreading::{solve_spreading_lp_with, LpStatus, MetricSolution, SpreadingLpOptions};
use crate::tree::{ClusterTree, NodeId, TreeBuilder};

/// Relative slack on the runtime ball bound, for rounding in the volume sums.
const BOUND_SLACK: f64 = 1e-9;

/// A cluster `h` (local ids) with edge lengths and a per-vertex seed volume.
#[derive(Debug, Clone)]
pub struct VolumeState {
    pub h: Graph,
    /// Length of each edge, aligned with `h.edges()`.
    pub lengths: Vec<f64>,
    pub phi_seed: f64,
}

impl VolumeState {
    pub fn new(h: Graph, lengths: Vec<f64>, phi_seed: f64) -> Result<Self> {
        if lengths.len() != h.m() {
            return Err(HcError::InvalidGraph(format!("{} lengths for {} edges", lengths.len(), h.m())));
        }
        if lengths.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(HcError::InvalidGraph("edge lengths must be finite and nonnegative".into()));
        }
        if !(phi_seed.is_finite() && phi_seed >= 0.0) {
            return Err(HcError::InvalidGraph(format!("seed volume {phi_seed} is not a nonnegative number")));
        }
        Ok(VolumeState { h, lengths, phi_seed })
    }

    /// `sum_e w(e) l(e)` over the edges of the cluster.
    pub fn edge_volume(&self) -> f64 {
        self.h.edges().iter().zip(&self.lengths).map(|(e, l)| e.w * l).sum()
    }

    /// Edge volume plus one seed per vertex.
    pub fn volume(&self) -> f64 {
        self.edge_volume() + self.h.n() as f64 * self.phi_seed
    }

    fn length_adj(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.h.n()];
        for (e, &l) in self.h.edges().iter().zip(&self.lengths) {
            adj[e.u].push((e.v, l));
            adj[e.v].push((e.u, l));
        }
        adj
    }

    /// Shortest-path distances inside the cluster (`inf` if unreachable).
    pub fn distances_from(&self, s: usize) -> Vec<f64> {
        dijkstra(&self.length_adj(), s)
    }

    /// Double sweep: the vertex `a` farthest from vertex 0, and its eccentricity.
    /// The eccentricity is at least half the true diameter.
    pub fn approx_diameter(&self) -> (usize, f64) {
        let adj = self.length_adj();
        let a = farthest(&dijkstra(&adj, 0));
        let ecc = dijkstra(&adj, a).into_iter().fold(0.0, f64::max);
        (a, ecc)
    }
}

/// Dense Dijkstra; clusters are small enough that O(n^2) is the simple choice.
fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[s] = 0.0;
    for _ in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !done[v] && dist[v].is_finite() && (u == usize::MAX || dist[v] < dist[u]) {
                u = v;
            }
        }
        if u == usize::MAX {
            break;
        }
        done[u] = true;
        for &(x, l) in &adj[u] {
            if dist[u] + l < dist[x] {
                dist[x] = dist[u] + l;
            }
        }
    }
    dist
}

/// Farthest reachable vertex, smallest id on ties.
fn farthest(dist: &[f64]) -> usize {
    let mut best = 0;
    for (v, &d) in dist.iter().enumerate() {
        if d.is_finite() && d > dist[best] {
            best = v;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallCut {
    pub center: usize,
    pub radius: f64,
    /// Vertices within `radius` of `center`, ascending local ids.
    pub side: Vec<usize>,
    pub cut_weight: f64,
    pub ball_volume: f64,
    /// Approximate diameter used to cap the radius at a quarter of it.
    pub diameter: f64,
    /// Right-hand side of the checked bound at the chosen ball.
    pub bound: f64,
}

/// Minimum-ratio ball around one end of an approximate diameter pair.
pub fn find_ball_cut(state: &VolumeState) -> Result<BallCut> {
    let h = &state.h;
    let n = h.n();
    if n < 2 {
        return Err(HcError::TooSmall("ball cut needs at least two vertices".into()));
    }
    if !h.is_connected() {
        return Err(HcError::InvalidGraph("ball cut needs a connected cluster".into()));
    }
    let (center, diameter) = state.approx_diameter();
    if diameter <= 0.0 {
        return Err(HcError::ZeroDiameter);
    }
    if state.phi_seed <= 0.0 {
        return Err(HcError::InvalidGraph("seed volume must be positive".into()));
    }
    let dist = state.distances_from(center);
    let r_max = diameter / 4.0;

    let mut events: Vec<f64> = dist.iter().copied().filter(|&x| x <= r_max).collect();
    events.sort_by(f64::total_cmp);
    events.dedup();
    let mut radii = events.clone();
    let mut ends = events.clone();
    ends.push(r_max);
    radii.extend(ends.windows(2).map(|p| (p[0] + p[1]) / 2.0));
    radii.push(r_max);
    radii.sort_by(f64::total_cmp);
    radii.dedup();

    let mut best: Option<(f64, BallCut)> = None;
    for &r in &radii {
        let inside: Vec<bool> = dist.iter().map(|&x| x <= r).collect();
        let mut cut_weight = 0.0;
        let mut ball_volume = 0.0;
        for (e, &l) in h.edges().iter().zip(&state.lengths) {
            match (inside[e.u], inside[e.v]) {
                (true, true) => ball_volume += e.w * l,
                (true, false) => {
                    cut_weight += e.w;
                    ball_volume += e.w * (r - dist[e.u]);
                }
                (false, true) => {
                    cut_weight += e.w;
                    ball_volume += e.w * (r - dist[e.v]);
                }
                (false, false) => {}
            }
        }
        let size = inside.iter().filter(|&&b| b).count();
        ball_volume += size as f64 * state.phi_seed;
        let ratio = cut_weight / ball_volume;
        if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
            let side = (0..n).filter(|&u| inside[u]).collect();
            best = Some((
                ratio,
                BallCut { center, radius: r, side, cut_weight, ball_volume, diameter, bound: 0.0 },
            ));
        }
    }
    let (_, mut ball) = best.expect("radius zero is always a candidate");
    let log_term = ((state.edge_volume() + n as f64 * state.phi_seed) / state.phi_seed).ln();
    ball.bound = 8.0 * log_term / diameter * ball.ball_volume;
    if ball.cut_weight > ball.bound * (1.0 + BOUND_SLACK) {
        return Err(HcError::BallBound { cut: ball.cut_weight, bound: ball.bound });
    }
    debug_assert!(!ball.side.is_empty() && ball.side.len() < n);
    Ok(ball)
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Seed {
    /// One seed volume for every cluster.
    Fixed(f64),
    /// Edge volume of the cluster divided by its size.
    PerCluster,
}

/// One split of `vs` (ascending global ids): components first, then a ball,
/// then a halving by id when every distance is zero. Returns the first part.
pub(crate) fn ball_split(
    g: &Graph,
    vs: &[usize],
    length: impl Fn(usize, usize) -> f64,
    seed: Seed,
) -> Result<Vec<usize>> {
    let h = g.induced(vs);
    if let Some(c) = component_cut(&h) {
        return Ok(c.side.iter().map(|&i| vs[i]).collect());
    }
    let lengths = h.edges().iter().map(|e| length(vs[e.u], vs[e.v])).collect();
    let mut state = VolumeState::new(h, lengths, 0.0)?;
    state.phi_seed = match seed {
        Seed::Fixed(s) => s,
        Seed::PerCluster => state.edge_volume() / vs.len() as f64,
    };
    match find_ball_cut(&state) {
        Ok(b) => Ok(b.side.iter().map(|&i| vs[i]).collect()),
        Err(HcError::ZeroDiameter) => Ok(vs[..vs.len() / 2].to_vec()),
        Err(e) => Err(e),
    }
}

/// Top-down binary tree on `0..n` where `split` picks the first part of each cluster.
pub(crate) fn split_recursively(
    n: usize,
    mut split: impl FnMut(&[usize]) -> Result<Vec<usize>>,
) -> Result<ClusterTree> {
    if n == 0 {
        return Err(HcError::TooSmall("graph has no vertices".into()));
    }
    let mut b = TreeBuilder::new();
    if n == 1 {
        let r = b.leaf(0);
        return b.finish(r);
    }
    let root = b.internal();
    let mut stack: Vec<(NodeId, Vec<usize>)> = vec![(root, (0..n).collect())];
    while let Some((node, vs)) = stack.pop() {
        let first = split(&vs)?;
        let rest: Vec<usize> = vs.iter().copied().filter(|v| first.binary_search(v).is_err()).collect();
        debug_assert!(!first.is_empty() && !rest.is_empty());
        let mut pending = Vec::with_capacity(2);
        for part in [first, rest] {
            let child = if part.len() == 1 {
                b.leaf(part[0])
            } else {
                let id = b.internal();
                pending.push((id, part));
                id
            };
            b.push_child(node, child);
        }
        stack.extend(pending.into_iter().rev());
    }
    b.finish(root)
}

/// Recursive ball-cut decomposition using `d` on edges as lengths and
/// `d`'s objective divided by `n` as the seed volume.
pub fn decompose(g: &Graph, d: &MetricSolution) -> Result<ClusterTree> {
    if d.n() != g.n() {
        return Err(HcError::InvalidGraph(format!("metric has {} points, graph has {} vertices", d.n(), g.n())));
    }
    let seed = Seed::Fixed(d.objective / g.n().max(1) as f64);
    split_recursively(g.n(), |vs| ball_split(g, vs, |u, v| d.get(u, v), seed))
}

#[derive(Debug, Clone)]
pub struct RoundedLp {
    pub tree: ClusterTree,
    pub lp_value: f64,
    pub tree_cost: f64,
}

pub fn round_lp(g: &Graph) -> Result<RoundedLp> {
    round_lp_with(g, &SpreadingLpOptions::default())
}

pub fn round_lp_with(g: &Graph, opts: &SpreadingLpOptions) -> Result<RoundedLp> {
    let d = solve_spreading_lp_with(g, opts)?;
    if d.status == LpStatus::IterationLimit {
        let n = g.n();
        return Err(HcError::IterationLimit(opts.max_rounds.unwrap_or(10 * n * n)));
    }
    let tree = decompose(g, &d)?;
    let tree_cost = cost(g, &tree)?;
    Ok(RoundedLp { tree, lp_value: d.objective, tree_cost })
}
