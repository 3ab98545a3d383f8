//! Recursive sparsest cut.
//!
//! Each cluster is split by the configured oracle on its induced subgraph
//! (disconnected clusters are first split into largest component vs. rest),
//! and both sides are processed recursively with an explicit work stack.

use crate::cost::{cost_general, CostFunction};
use crate::cut::{component_cut, OracleSpec};
use crate::error::Result;
use crate::graph::Graph;
use crate::tree::{ClusterTree, NodeId, TreeBuilder};

#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    /// Internal node of the output tree created by this split.
    pub node: NodeId,
    /// `r`, the number of vertices in the cluster being split.
    pub cluster_size: usize,
    /// `s <= r / 2`, size of the smaller side (always the first child).
    pub small_side: usize,
    pub cut_weight: f64,
    pub sparsity: f64,
    /// Levels `[r/4, r/2]` (floored) this split is charged against.
    pub charge_levels: (usize, usize),
}

/// One record per internal node, in pre-order of the output tree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SplitTrace {
    pub records: Vec<SplitRecord>,
}

pub fn rsc_build(g: &Graph, oracle: &OracleSpec) -> Result<(ClusterTree, SplitTrace)> {
    let mut b = TreeBuilder::new();
    let mut trace = SplitTrace::default();
    if g.n() == 1 {
        let r = b.leaf(0);
        return Ok((b.finish(r)?, trace));
    }
    let root = b.internal();
    let mut stack: Vec<(NodeId, Vec<usize>)> = vec![(root, (0..g.n()).collect())];
    while let Some((node, vertices)) = stack.pop() {
        let sub = g.induced(&vertices);
        let cut = match component_cut(&sub) {
            Some(c) => c,
            None => oracle.find_cut(&sub)?,
        };
        let small: Vec<usize> = cut.side.iter().map(|&i| vertices[i]).collect();
        let large: Vec<usize> = cut.other_side().iter().map(|&i| vertices[i]).collect();
        let r = vertices.len();
        trace.records.push(SplitRecord {
            node,
            cluster_size: r,
            small_side: small.len(),
            cut_weight: cut.cross_weight,
            sparsity: cut.sparsity,
            charge_levels: (r / 4, r / 2),
        });
        let mut pending = Vec::with_capacity(2);
        for part in [small, large] {
            let child = if part.len() == 1 {
                b.leaf(part[0])
            } else {
                let id = b.internal();
                pending.push((id, part));
                id
            };
            b.push_child(node, child);
        }
        // Small side is popped first so records come out in pre-order.
        stack.extend(pending.into_iter().rev());
    }
    Ok((b.finish(root)?, trace))
}

/// Generalized cost of the recursive sparsest cut tree.
pub fn rsc_cost(g: &Graph, oracle: &OracleSpec, f: &CostFunction) -> Result<f64> {
    let (tree, _) = rsc_build(g, oracle)?;
    cost_general(g, &tree, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::cost;

    fn p3() -> Graph {
        Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn p3_peels_first_endpoint() {
        let (t, trace) = rsc_build(&p3(), &OracleSpec::exact()).unwrap();
        assert_eq!(t.to_string(), "(0,(1,2))");
        assert_eq!(cost(&p3(), &t).unwrap(), 5.0);
        assert_eq!(trace.records.len(), 2);
        assert_eq!(trace.records[0].cluster_size, 3);
        assert_eq!(trace.records[0].small_side, 1);
        assert_eq!(trace.records[0].sparsity, 0.5);
        assert_eq!(rsc_cost(&p3(), &OracleSpec::exact(), &CostFunction::Square).unwrap(), 13.0);
    }

    #[test]
    fn disconnected_pairs() {
        let g = Graph::new(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let (t, trace) = rsc_build(&g, &OracleSpec::exact()).unwrap();
        assert_eq!(trace.records[0].cut_weight, 0.0);
        assert_eq!(cost(&g, &t).unwrap(), 4.0);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::empty(1);
        let (t, trace) = rsc_build(&g, &OracleSpec::exact()).unwrap();
        assert_eq!(t.num_leaves(), 1);
        assert!(trace.records.is_empty());
        assert_eq!(rsc_cost(&g, &OracleSpec::exact(), &CostFunction::Identity).unwrap(), 0.0);
    }

    #[test]
    fn k4_costs_twenty() {
        let mut e = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                e.push((i, j, 1.0));
            }
        }
        let g = Graph::new(4, e).unwrap();
        assert_eq!(rsc_cost(&g, &OracleSpec::exact(), &CostFunction::Identity).unwrap(), 20.0);
        assert_eq!(rsc_cost(&g, &OracleSpec::spectral(), &CostFunction::Identity).unwrap(), 20.0);
    }
}
