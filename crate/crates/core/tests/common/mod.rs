//! Shared strategies and brute-force reference implementations.
#![allow(dead_code)]

use hcluster::tree::random_tree;
use hcluster::{ClusterTree, Graph};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Graph on `lo..=hi` vertices with integer weights in `1..=max_w` (unit if 1).
pub fn graph(lo: usize, hi: usize, max_w: u32) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            proptest::collection::vec(any::<bool>(), pairs),
            proptest::collection::vec(1..=max_w, pairs),
        )
            .prop_map(|(n, keep, w)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if keep[k] {
                            edges.push((u, v, f64::from(w[k])));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
    })
}

/// A graph together with a random (not necessarily binary) tree on its vertices.
pub fn graph_and_tree(lo: usize, hi: usize, max_w: u32) -> impl Strategy<Value = (Graph, ClusterTree)> {
    (graph(lo, hi, max_w), any::<u64>(), 2usize..=4).prop_map(|(g, seed, arity)| {
        let t = random_tree(g.n(), arity, &mut ChaCha8Rng::seed_from_u64(seed));
        (g, t)
    })
}

pub fn connected(g: &Graph) -> bool {
    g.is_connected()
}

pub fn clique(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j, 1.0));
        }
    }
    Graph::new(n, e).unwrap()
}

/// Cost with `f` by scanning every internal node's leaf set for each edge.
pub fn brute_cost(g: &Graph, t: &ClusterTree, f: impl Fn(usize) -> f64) -> f64 {
    let mut total = 0.0;
    for e in g.edges() {
        let mut best = usize::MAX;
        for id in t.preorder() {
            let leaves = t.leaves(id);
            if leaves.contains(&e.u) && leaves.contains(&e.v) {
                best = best.min(leaves.len());
            }
        }
        total += e.w * f(best);
    }
    total
}

/// Crossing weight between `a` and `b`.
fn cross(g: &Graph, a: &[usize], b: &[usize]) -> f64 {
    let mut w = 0.0;
    for &u in a {
        for &v in b {
            w += g.weight(u, v);
        }
    }
    w
}

/// Minimum cost over all binary hierarchies on `set`, by plain recursion over
/// every bipartition. Exponential; keep `set` at six vertices or fewer.
pub fn brute_opt(g: &Graph, set: &[usize], f: &dyn Fn(usize) -> f64) -> f64 {
    if set.len() <= 1 {
        return 0.0;
    }
    let rest = &set[1..];
    let mut best = f64::INFINITY;
    // first vertex always on side A; enumerate the rest
    for mask in 0..(1u32 << rest.len()) {
        let mut a = vec![set[0]];
        let mut b = Vec::new();
        for (i, &v) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                a.push(v);
            } else {
                b.push(v);
            }
        }
        if b.is_empty() {
            continue;
        }
        let here = cross(g, &a, &b) * f(set.len()) + brute_opt(g, &a, f) + brute_opt(g, &b, f);
        best = best.min(here);
    }
    best
}

/// Minimum sparsity over all proper nonempty subsets.
pub fn brute_sparsest(g: &Graph) -> f64 {
    let n = g.n();
    let mut best = f64::INFINITY;
    let mut side = vec![false; n];
    loop {
        // increment the boolean counter
        let mut i = 0;
        while i < n && side[i] {
            side[i] = false;
            i += 1;
        }
        if i == n {
            break;
        }
        side[i] = true;
        let s = side.iter().filter(|&&b| b).count();
        if s == n {
            continue;
        }
        let mut w = 0.0;
        for e in g.edges() {
            if side[e.u] != side[e.v] {
                w += e.w;
            }
        }
        best = best.min(w / (s * (n - s)) as f64);
    }
    best
}
