mod common;

use common::{graph, graph_and_tree};
use hcluster::cost::{cost, cost_general, CostFunction};
use hcluster::exact::opt_cost;
use hcluster::rounding::{decompose, round_lp};
use hcluster::sdp::{
    build_instance, export_string, import_str, induce_from_tree, round_levelwise, sdp_lower_bound_lp, validate,
    Family,
};
use hcluster::spreading::{
    check_ultrametric_feasible, diameter_check, separation_oracle, solve_spreading_lp, tree_metric,
};
use hcluster::Graph;
use proptest::prelude::*;

const TOL: f64 = 1e-6;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn spreading_lp_is_a_lower_bound(g in graph(1, 8, 3)) {
        let d = solve_spreading_lp(&g).unwrap();
        let opt = opt_cost(&g, &CostFunction::Identity).unwrap();
        prop_assert!(d.objective <= opt + TOL, "lp {} > opt {}", d.objective, opt);
        prop_assert!(d.max_triangle_violation() <= 1e-6);
        prop_assert!(separation_oracle(&g, &d).is_none() || d.n() == 1);
        if g.n() >= 2 {
            prop_assert!(diameter_check(&d) >= 1.0 - TOL);
        }
    }

    #[test]
    fn adding_an_edge_never_lowers_the_lp(g in graph(2, 7, 2), u in 0usize..7, v in 0usize..7) {
        let (u, v) = (u % g.n(), v % g.n());
        prop_assume!(u != v && g.weight(u, v) == 0.0);
        let before = solve_spreading_lp(&g).unwrap().objective;
        let after = solve_spreading_lp(&g.with_edge(u, v, 1.0).unwrap()).unwrap().objective;
        prop_assert!(after >= before - TOL);
    }

    #[test]
    fn lp_rounding_gives_a_valid_tree(g in graph(2, 10, 3)) {
        let r = round_lp(&g).unwrap();
        r.tree.check_leaves(g.n()).unwrap();
        prop_assert_eq!(r.tree_cost, cost(&g, &r.tree).unwrap());
        prop_assert!(r.tree_cost <= 100.0 * ((g.n() + 2) as f64).ln() * r.lp_value + TOL);
        let opt = opt_cost(&g, &CostFunction::Identity).unwrap();
        prop_assert!(r.tree_cost >= opt - TOL);
    }

    #[test]
    fn sdp_lp_bound_is_below_opt(g in graph(2, 7, 3)) {
        for f in [CostFunction::Identity, CostFunction::Square] {
            let b = sdp_lower_bound_lp(&g, Some(&f)).unwrap();
            let opt = opt_cost(&g, &f).unwrap();
            prop_assert!(b.bound <= opt + TOL, "{}: {} > {}", f, b.bound, opt);
            prop_assert!((b.bound - b.lp_value - f.eval(1) * g.total_weight()).abs() <= 1e-9);
        }
        let b = sdp_lower_bound_lp(&g, None).unwrap();
        let t = round_levelwise(&g, &b.assignment).unwrap();
        t.check_leaves(g.n()).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_metrics_are_feasible((g, t) in graph_and_tree(1, 12, 3)) {
        prop_assert!(check_ultrametric_feasible(&g, &t).unwrap());
        let d = tree_metric(&g, &t);
        prop_assert_eq!(d.max_triangle_violation(), 0.0);
    }

    #[test]
    fn decompose_of_a_tree_metric_is_valid((g, t) in graph_and_tree(1, 12, 3)) {
        let d = tree_metric(&g, &t);
        let out = decompose(&g, &d).unwrap();
        out.check_leaves(g.n()).unwrap();
    }

    #[test]
    fn integer_points_match_tree_cost((g, t) in graph_and_tree(2, 10, 4)) {
        for f in [CostFunction::Identity, CostFunction::Square] {
            let inst = build_instance(&g, Some(&f)).unwrap();
            let a = induce_from_tree(&inst, &t).unwrap();
            let expect = cost_general(&g, &t, &f).unwrap() - f.eval(1) * g.total_weight();
            prop_assert_eq!(inst.objective(&a), expect);
            let r = validate(&inst, &a, 0.0).unwrap();
            prop_assert!(r.pass, "{}", r);
            // Gram matrices of an integer point are block all-ones; eigenvalues
            // carry rounding noise, so the check uses a tiny tolerance.
            let with_gram = a.clone().with_gram_from_x().unwrap();
            prop_assert!(validate(&inst, &with_gram, 1e-9).unwrap().pass);
        }
    }

    #[test]
    fn perturbation_is_caught((g, t) in graph_and_tree(2, 8, 2), i in 0usize..8, j in 0usize..8, lvl in 1usize..8) {
        let inst = build_instance(&g, None).unwrap();
        let n = g.n();
        let (i, j, lvl) = (i % n, j % n, 1 + lvl % (n - 1));
        prop_assume!(i != j);
        let mut a = induce_from_tree(&inst, &t).unwrap();
        a.set(i.min(j), i.max(j), lvl, -0.1).unwrap();
        let r = validate(&inst, &a, 0.0).unwrap();
        prop_assert!(!r.pass);
        prop_assert!(r.failing().contains(&Family::Bounds));
    }

    #[test]
    fn export_is_stable_and_round_trips(g in graph(2, 9, 5)) {
        for f in [CostFunction::Identity, CostFunction::Square, CostFunction::Log1p] {
            let inst = build_instance(&g, Some(&f)).unwrap();
            let text = export_string(&inst);
            prop_assert_eq!(&text, &export_string(&inst));
            let back = import_str(&text).unwrap();
            prop_assert_eq!(export_string(&back), text);
        }
    }
}

#[test]
fn tampered_export_is_rejected() {
    let g = Graph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
    let text = export_string(&build_instance(&g, None).unwrap());
    assert!(import_str(&text.replacen("spread 0 2", "spread 0 1", 1)).is_err());
    assert!(import_str(&text.replacen("sdp-hc 1", "sdp-hc 2", 1)).is_err());
    let truncated: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
    assert!(import_str(&truncated).is_err());
}

#[test]
fn lp_fixtures() {
    let k = |n: usize| {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j, 1.0));
            }
        }
        Graph::new(n, e).unwrap()
    };
    let p3 = Graph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    for (g, lp, sdp) in [(k(2), 0.75, 2.0), (k(3), 3.0, 7.5), (p3, 2.0, 5.0)] {
        assert!((solve_spreading_lp(&g).unwrap().objective - lp).abs() <= TOL);
        assert!((sdp_lower_bound_lp(&g, None).unwrap().bound - sdp).abs() <= TOL);
    }
}
