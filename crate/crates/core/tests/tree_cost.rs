mod common;

use common::{brute_cost, graph, graph_and_tree};
use hcluster::cost::{check_level_identity, cost, cost_general, level_cut_edges, level_partition, CostFunction};
use hcluster::graph::parse_edge_list;
use hcluster::ClusterTree;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cost_matches_leaf_scan((g, t) in graph_and_tree(1, 10, 4)) {
        prop_assert_eq!(cost(&g, &t).unwrap(), brute_cost(&g, &t, |x| x as f64));
        let sq = cost_general(&g, &t, &CostFunction::Square).unwrap();
        prop_assert_eq!(sq, brute_cost(&g, &t, |x| (x * x) as f64));
    }

    #[test]
    fn level_identity_holds((g, t) in graph_and_tree(1, 12, 5)) {
        let id = check_level_identity(&g, &t, &CostFunction::Identity).unwrap();
        prop_assert!(id.equal);
        prop_assert_eq!(id.lhs, id.rhs);
        for f in [CostFunction::Square, CostFunction::Log1p] {
            let r = check_level_identity(&g, &t, &f).unwrap();
            prop_assert!(r.equal, "{:?}: {} vs {}", f, r.lhs, r.rhs);
        }
    }

    #[test]
    fn levels_refine_and_cut_weight_shrinks((g, t) in graph_and_tree(2, 12, 3)) {
        let n = g.n();
        let mut prev_weight = f64::INFINITY;
        for level in 0..n {
            let w: f64 = level_cut_edges(&g, &t, level).unwrap().iter().map(|e| e.w).sum();
            prop_assert!(w <= prev_weight);
            prev_weight = w;
            if level >= 1 {
                let fine = level_partition(&t, level);
                let coarse = level_partition(&t, level + 1);
                for block in &fine.blocks {
                    let host = coarse.block_of[block[0]];
                    prop_assert!(block.iter().all(|&v| coarse.block_of[v] == host));
                }
            }
        }
        prop_assert!(level_cut_edges(&g, &t, n).is_err());
    }

    #[test]
    fn binarize_never_increases_cost((g, t) in graph_and_tree(1, 12, 4)) {
        let b = t.binarize();
        prop_assert!(b.is_binary());
        b.check_leaves(g.n()).unwrap();
        prop_assert!(cost(&g, &b).unwrap() <= cost(&g, &t).unwrap());
    }

    #[test]
    fn tree_formats_round_trip((_, t) in graph_and_tree(1, 15, 4)) {
        let text = t.to_string();
        let back = ClusterTree::parse(&text).unwrap();
        prop_assert_eq!(back.to_string(), text.clone());
        let json = ClusterTree::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(json.to_string(), text);
    }

    #[test]
    fn edge_list_round_trip(g in graph(1, 12, 9)) {
        let back = parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn leaf_mismatch_is_rejected() {
    let g = parse_edge_list("3\n0 1 1\n1 2 1\n").unwrap();
    let t = ClusterTree::parse("(0,1)").unwrap();
    assert!(matches!(cost(&g, &t), Err(hcluster::HcError::LeafMismatch(_))));
}
