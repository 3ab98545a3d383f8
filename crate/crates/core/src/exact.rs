//! Exact optimum by dynamic programming over vertex subsets.
//!
//! Some optimal tree is binary, so for every subset `S` with `|S| >= 2`
//! `value(S) = min_{S1} w(S1, S \ S1) * f(|S|) + value(S1) + value(S \ S1)`.
//! Subsets are processed in increasing numeric order (submasks first) and
//! `S1` ranges over submasks containing the lowest vertex of `S`, so every
//! bipartition is visited once. Ties keep the numerically smallest `S1`.

use crate::cost::CostFunction;
use crate::error::{HcError, Result};
use crate::graph::Graph;
use crate::tree::{ClusterTree, NodeId, TreeBuilder};

pub const DEFAULT_OPT_CAP: usize = 16;
/// Hard ceiling on the table size regardless of the configured cap.
const MAX_SUPPORTED: usize = 26;

#[derive(Debug, Clone)]
pub struct DpTable {
    n: usize,
    value: Vec<f64>,
    split: Vec<u32>,
}

impl DpTable {
    pub fn build(g: &Graph, f: &CostFunction, cap: usize) -> Result<DpTable> {
        let n = g.n();
        if n == 0 {
            return Err(HcError::TooSmall("graph has no vertices".into()));
        }
        if n > cap || n > MAX_SUPPORTED {
            return Err(HcError::OverCap { what: "exact optimum", n, cap: cap.min(MAX_SUPPORTED) });
        }
        f.check(n)?;
        let size = 1usize << n;
        // inner[S] = total weight of edges with both ends in S
        let mut inner = vec![0.0f64; size];
        for mask in 1..size {
            let v = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut add = 0.0;
            for &(u, w) in g.neighbors(v) {
                if rest >> u & 1 == 1 {
                    add += w;
                }
            }
            inner[mask] = inner[rest] + add;
        }
        let scale: Vec<f64> = (0..=n).map(|k| f.eval(k)).collect();
        let mut value = vec![0.0f64; size];
        let mut split = vec![0u32; size];
        for mask in 1..size {
            if mask & (mask - 1) == 0 {
                continue;
            }
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let factor = scale[mask.count_ones() as usize];
            let mut best = f64::INFINITY;
            let mut arg = 0usize;
            let mut sub = 0usize;
            while sub != rest {
                let s1 = low | sub;
                let s2 = mask ^ s1;
                let cut = inner[mask] - inner[s1] - inner[s2];
                let v = cut * factor + value[s1] + value[s2];
                if v < best {
                    best = v;
                    arg = s1;
                }
                sub = sub.wrapping_sub(rest) & rest;
            }
            value[mask] = best;
            split[mask] = arg as u32;
        }
        Ok(DpTable { n, value, split })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Optimal value on the vertex subset `mask`.
    pub fn value(&self, mask: usize) -> f64 {
        self.value[mask]
    }

    /// Chosen first part for `mask` (0 for singletons).
    pub fn best_split(&self, mask: usize) -> usize {
        self.split[mask] as usize
    }

    pub fn opt(&self) -> f64 {
        self.value[(1usize << self.n) - 1]
    }

    pub fn tree(&self) -> ClusterTree {
        let mut b = TreeBuilder::new();
        fn walk(t: &DpTable, b: &mut TreeBuilder, mask: usize) -> NodeId {
            if mask & (mask - 1) == 0 {
                return b.leaf(mask.trailing_zeros() as usize);
            }
            let s1 = t.best_split(mask);
            let id = b.internal();
            let left = walk(t, b, s1);
            let right = walk(t, b, mask ^ s1);
            b.push_child(id, left);
            b.push_child(id, right);
            id
        }
        let root = walk(self, &mut b, (1usize << self.n) - 1);
        b.finish(root).expect("dp tree is valid")
    }
}

pub fn opt_cost(g: &Graph, f: &CostFunction) -> Result<f64> {
    opt_cost_capped(g, f, DEFAULT_OPT_CAP)
}

pub fn opt_cost_capped(g: &Graph, f: &CostFunction, cap: usize) -> Result<f64> {
    Ok(DpTable::build(g, f, cap)?.opt())
}

pub fn opt_tree(g: &Graph, f: &CostFunction) -> Result<ClusterTree> {
    opt_tree_capped(g, f, DEFAULT_OPT_CAP)
}

pub fn opt_tree_capped(g: &Graph, f: &CostFunction, cap: usize) -> Result<ClusterTree> {
    Ok(DpTable::build(g, f, cap)?.tree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::cost;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i, 1.0))).unwrap()
    }

    #[test]
    fn small_fixtures() {
        let id = CostFunction::Identity;
        assert_eq!(opt_cost(&path(3), &id).unwrap(), 5.0);
        assert_eq!(opt_cost(&path(4), &id).unwrap(), 8.0);
        let k2 = path(2);
        let t = opt_tree(&k2, &id).unwrap();
        assert_eq!(t.to_string(), "(0,1)");
        assert_eq!(cost(&k2, &t).unwrap(), 2.0);
        let t = opt_tree(&path(4), &id).unwrap();
        assert_eq!(cost(&path(4), &t).unwrap(), 8.0);
        assert_eq!(opt_cost(&Graph::empty(1), &id).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_pairs_split_components_first() {
        let g = Graph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let t = opt_tree(&g, &CostFunction::Identity).unwrap();
        assert_eq!(cost(&g, &t).unwrap(), 4.0);
        assert_eq!(t.size(t.children(t.root())[0]), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let g = path(17);
        assert!(matches!(opt_cost(&g, &CostFunction::Identity), Err(HcError::OverCap { .. })));
        assert!(matches!(opt_cost_capped(&path(5), &CostFunction::Identity, 4), Err(HcError::OverCap { .. })));
    }
}
