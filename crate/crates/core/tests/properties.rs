use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use metric_spectra::graph::{emit_graph, parse_graph, samples, GraphInput, GraphPoint, VertexId, Weight};
use metric_spectra::integral::{Expr, KernelSamples};
use metric_spectra::spectral::{bound_check, laplacian_check, laplacian_spectrum, spectrum, SolveOptions};
use metric_spectra::suite::{random_cyclic, random_root, random_tree, random_weight};
use metric_spectra::tree::{
    check_superadditive, cut_cycles, partition_n, random_test_function, split_once, ApproxSetup, RootedTree,
    SuperadditiveFn,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn tree_instance(seed: u64, signed: bool) -> GraphInput {
    let mut r = rng(seed);
    let graph = random_tree(&mut r);
    let weight = random_weight(&graph, &mut r, signed);
    let root = random_root(&graph, &mut r);
    GraphInput { graph, weight, root }
}

fn cyclic_instance(seed: u64) -> GraphInput {
    let mut r = rng(seed);
    let graph = random_cyclic(&mut r);
    let weight = random_weight(&graph, &mut r, true);
    let root = random_root(&graph, &mut r);
    GraphInput { graph, weight, root }
}

fn phis(w: &Weight) -> Vec<SuperadditiveFn> {
    vec![
        SuperadditiveFn::phi_v(w.clone()).unwrap(),
        SuperadditiveFn::phi_l(w.clone(), 2).unwrap(),
        SuperadditiveFn::measure(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eigenvalue_bounds_hold(seed in any::<u64>(), cyclic in any::<bool>()) {
        let inst = if cyclic { cyclic_instance(seed) } else { tree_instance(seed, true) };
        let (g, w) = (&inst.graph, &inst.weight);
        let h = g.total_length() / 100.0;
        let s = spectrum(g, w, std::slice::from_ref(&inst.root), h, SolveOptions { vectors: 0 }).unwrap();
        let rep = bound_check(&s, g, w, Some(20), 1e-9);
        prop_assert_eq!(rep.violations, 0);
        if let Some(l) = s.plus.first() {
            prop_assert!(*l <= rep.form_bound * (1.0 + 1e-9));
        }
    }

    #[test]
    fn laplacian_lower_bound(seed in any::<u64>()) {
        let inst = tree_instance(seed, false);
        let g = &inst.graph;
        let mu = laplacian_spectrum(g, &inst.root, g.total_length() / 100.0).unwrap();
        prop_assert_eq!(laplacian_check(&mu, g.total_length(), 20, 1e-9).violations, 0);
    }

    #[test]
    fn weight_scaling_is_linear(len in 0.2f64..4.0, v in 0.1f64..5.0, a in 0.25f64..4.0) {
        let g = samples::star(&[len, 1.0, 0.5]);
        let w = Weight::constant(&g, v);
        let root = [GraphPoint::Vertex(VertexId(1))];
        let s = spectrum(&g, &w, &root, 0.05, SolveOptions { vectors: 0 }).unwrap();
        let t = spectrum(&g, &w.scaled(a), &root, 0.05, SolveOptions { vectors: 0 }).unwrap();
        for (x, y) in s.plus.iter().zip(&t.plus).take(10) {
            prop_assert!(((y - a * x) / (a * x)).abs() < 1e-10);
        }
    }

    #[test]
    fn partition_certificates(seed in any::<u64>(), n in 1usize..=10) {
        let inst = tree_instance(seed, false);
        let tree = RootedTree::new(inst.graph.clone(), inst.root).unwrap();
        let g = tree.graph();
        for phi in phis(&inst.weight) {
            let total = phi.eval_subtree(&tree.whole());
            let p = partition_n(&tree, &phi, n).unwrap();
            prop_assert!(p.achieved() <= n);
            prop_assert!(p.certificate(g, &phi) <= total / (n + 1) as f64 + 1e-9 * total);
            prop_assert!(p.coverage_defect(g) <= 1e-9 * g.total_length());
            prop_assert!(p.max_overlap() <= 1e-9 * g.total_length());
        }
    }

    #[test]
    fn split_certificates(seed in any::<u64>(), frac in 0.01f64..0.99) {
        let inst = tree_instance(seed, false);
        let tree = RootedTree::new(inst.graph.clone(), inst.root).unwrap();
        for phi in phis(&inst.weight) {
            let total = phi.eval_subtree(&tree.whole());
            if total == 0.0 {
                continue;
            }
            let eps = frac * total;
            let s = split_once(&tree, &phi, eps).unwrap();
            prop_assert!(phi.eval_subtree(&s.rest) <= total - eps + 1e-9 * total);
            prop_assert!(eps <= phi.eval_subtree(&s.piece.subtree) + 1e-9 * total);
        }
    }

    #[test]
    fn superadditive_on_random_partitions(seed in any::<u64>()) {
        let inst = tree_instance(seed, false);
        let tree = RootedTree::new(inst.graph.clone(), inst.root).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        let mass = SuperadditiveFn::mass(inst.weight.clone()).unwrap();
        let holder = SuperadditiveFn::holder(SuperadditiveFn::measure(), mass, 0.5).unwrap();
        for phi in phis(&inst.weight).into_iter().chain([holder]) {
            let rep = check_superadditive(&phi, &tree, 10, &mut r).unwrap();
            prop_assert!(rep.worst_margin >= -1e-12);
            prop_assert_eq!(rep.monotone_violations, 0);
        }
    }

    #[test]
    fn approximation_bound(seed in any::<u64>(), n in 1usize..=6, cyclic in any::<bool>()) {
        let inst = if cyclic { cyclic_instance(seed) } else { tree_instance(seed, false) };
        let w = inst.weight.map(f64::abs);
        let setup = ApproxSetup::new(&inst.graph, &w, n).unwrap();
        let mut r = rng(seed);
        for _ in 0..5 {
            let u = random_test_function(&inst.graph, &mut r);
            let (lhs, rhs) = setup.evaluate(&u);
            prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-14);
        }
    }

    #[test]
    fn cutting_preserves_length_and_integrals(seed in any::<u64>()) {
        let inst = cyclic_instance(seed);
        let g = &inst.graph;
        let cut = cut_cycles(g).unwrap();
        prop_assert!(cut.tree.is_tree());
        prop_assert_eq!(cut.cuts(), g.cycle_rank());
        prop_assert_eq!(cut.length_defect(), 0.0);
        let mut r = rng(seed);
        let u = random_test_function(g, &mut r);
        let a = u.weighted_l2_sq(&inst.weight);
        let b = cut.pull_function(&u).weighted_l2_sq(&cut.pull_weight(&inst.weight));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), cyclic in any::<bool>()) {
        let inst = if cyclic { cyclic_instance(seed) } else { tree_instance(seed, true) };
        let text = emit_graph(&inst);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(emit_graph(&back), text);
    }

    #[test]
    fn kernel_samples_round_trip(n in 1usize..6, vals in prop::collection::vec(-1e3f64..1e3, 36)) {
        let s = KernelSamples { mesh_hash: "00ff00ff00ff00ff".into(), n, values: vals[..n * n].to_vec() };
        prop_assert_eq!(KernelSamples::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn expressions_print_and_transpose(a in -5.0f64..5.0, b in 0.1f64..5.0, x in 0.0f64..3.0, y in 0.0f64..3.0) {
        let src = format!("sin({a}*x)*exp(-y/{b}) + min(x, {b}*y)^2 - abs(x - y)");
        let e = Expr::parse(&src).unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(e.eval(x, y), again.eval(x, y));
        prop_assert_eq!(e.transposed().eval(x, y), e.eval(y, x));
    }
}
