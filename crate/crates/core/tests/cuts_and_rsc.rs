mod common;

use common::{brute_sparsest, graph};
use hcluster::cost::cost;
use hcluster::cut::{exact_sparsest_cut, local_search_improve, sparsity, spectral_sweep_cut, OracleKind, OracleSpec};
use hcluster::rsc::rsc_build;
use proptest::prelude::*;

const REL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_cut_is_minimal(g in graph(2, 10, 5)) {
        let c = exact_sparsest_cut(&g, 20).unwrap();
        let best = brute_sparsest(&g);
        prop_assert!((c.sparsity - best).abs() <= REL * best.max(1.0));
        prop_assert!(c.side.len() * 2 <= g.n());
        prop_assert!((sparsity(&g, &c.side).unwrap() - c.sparsity).abs() <= 1e-12);
    }

    #[test]
    fn heuristics_never_beat_exact(g in graph(2, 10, 5)) {
        let exact = exact_sparsest_cut(&g, 20).unwrap().sparsity;
        let sweep = spectral_sweep_cut(&g, 1e-8, 10_000).unwrap();
        prop_assert!(sweep.sparsity >= exact - REL * exact.max(1.0));
        let improved = local_search_improve(&g, &sweep, 2 * g.n());
        prop_assert!(improved.sparsity <= sweep.sparsity + 1e-12);
        prop_assert!(improved.sparsity >= exact - REL * exact.max(1.0));
        let combined = OracleSpec::new(OracleKind::SpectralPlusLocal).find_cut(&g).unwrap();
        prop_assert!(combined.sparsity <= sweep.sparsity + 1e-12);
    }

    #[test]
    fn rsc_trace_is_consistent(g in graph(1, 10, 3)) {
        let (t, trace) = rsc_build(&g, &OracleSpec::exact()).unwrap();
        t.check_leaves(g.n()).unwrap();
        prop_assert!(t.is_binary());
        prop_assert_eq!(trace.records.len(), g.n() - 1);
        let internal: Vec<_> = t.preorder().into_iter().filter(|&x| !t.is_leaf(x)).collect();
        let nodes: Vec<_> = trace.records.iter().map(|r| r.node).collect();
        prop_assert_eq!(nodes, internal);
        for r in &trace.records {
            prop_assert!(r.small_side * 2 <= r.cluster_size);
            prop_assert_eq!(t.size(r.node), r.cluster_size);
            prop_assert_eq!(t.size(t.children(r.node)[0]), r.small_side);
        }
        // Every edge is charged once, at the split that separates it.
        let charged: f64 = trace.records.iter().map(|r| r.cut_weight * r.cluster_size as f64).sum();
        prop_assert!((charged - cost(&g, &t).unwrap()).abs() <= 1e-9 * charged.max(1.0));
    }
}

#[test]
fn oracle_kinds_parse() {
    for (s, k) in [("exact", OracleKind::Exact), ("spectral", OracleKind::SpectralSweep)] {
        assert_eq!(s.parse::<OracleKind>().unwrap(), k);
        assert_eq!(k.to_string().parse::<OracleKind>().unwrap(), k);
    }
    assert!("bogus".parse::<OracleKind>().is_err());
}
