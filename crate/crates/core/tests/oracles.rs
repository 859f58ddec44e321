//! Closed-form and hand-computed values, checked against the library.

use std::f64::consts::PI;

use metric_spectra::graph::{
    diameter, distance, parse_graph, samples, EdgeId, GraphPoint, MetricGraph, PiecewiseConstant,
    PiecewiseLinear, VertexId, Weight,
};
use metric_spectra::integral::{check_kernel_bound, m_functional, singular_values, KernelOptions, KernelSpec};
use metric_spectra::spectral::{
    assemble, build_mesh, dirichlet_interval_ratios, exact_interval_spectrum, laplacian_spectrum,
    sharpness_search, snumbers_halfinv, spectrum, weyl_check, Boundary, SolveOptions,
};
use metric_spectra::tree::{
    cut_cycles, higher_order_constant, partition_n, phi_tilde, split_once, step_projection, ApproxSetup,
    Fragment, Partition, PuncturedSubtree, RootedTree, Subtree, SuperadditiveFn,
};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
}

fn v(i: usize) -> GraphPoint {
    GraphPoint::Vertex(VertexId(i))
}

fn interval_tree() -> (RootedTree, SuperadditiveFn) {
    let g = samples::interval(1.0);
    let phi = SuperadditiveFn::phi_v(Weight::constant(&g, 1.0)).unwrap();
    (RootedTree::new(g, v(0)).unwrap(), phi)
}

fn star_tree() -> (RootedTree, SuperadditiveFn) {
    let g = samples::star(&[1.0, 1.0, 1.0]);
    let phi = SuperadditiveFn::phi_v(Weight::constant(&g, 1.0)).unwrap();
    let leaf = GraphPoint::Vertex(g.vertex("l1").unwrap());
    (RootedTree::new(g, leaf).unwrap(), phi)
}

#[test]
fn star_file_degrees() {
    let input = parse_graph(
        r#"{"vertices": ["c", "a", "b", "d"],
            "edges": [{"id": "ca", "from": "c", "to": "a", "length": 1},
                      {"id": "cb", "from": "c", "to": "b", "length": 1},
                      {"id": "cd", "from": "c", "to": "d", "length": 1}]}"#,
    )
    .unwrap();
    let g = &input.graph;
    for (name, deg) in [("c", 3), ("a", 1), ("b", 1), ("d", 1)] {
        assert_eq!(g.degree(g.vertex(name).unwrap()), deg, "{name}");
    }
}

#[test]
fn parallel_edges_distance_and_diameter() {
    let g = samples::two_edge_cycle(1.0, 3.0);
    assert_eq!(distance(&g, &v(0), &v(1)), 1.0);
    let ring = samples::two_edge_cycle(2.0, 2.0);
    assert!((diameter(&ring) - 2.0).abs() < 1e-12);
}

#[test]
fn cutting_parallel_edges_and_triangle() {
    let r = cut_cycles(&samples::two_edge_cycle(1.0, 1.0)).unwrap();
    assert_eq!(r.cuts(), 1);
    assert!(r.tree.is_tree());
    assert_eq!(r.tree.total_length(), 2.0);
    assert_eq!(r.pairs.len(), 1);
    let (a, b) = r.pairs[0];
    assert_eq!((r.tree.degree(a), r.tree.degree(b)), (1, 1));

    let t = samples::triangle();
    let r = cut_cycles(&t).unwrap();
    assert_eq!(r.cuts(), t.edge_count() - t.vertex_count() + 1);
    assert_eq!(r.tree.total_length(), 3.0);
}

#[test]
fn phi_tilde_at_midpoint_and_center() {
    let (t, phi) = interval_tree();
    let mid = GraphPoint::on_edge(t.graph(), EdgeId(0), 0.5).unwrap();
    assert!((phi_tilde(&phi, t.graph(), &t.whole(), &mid).unwrap() - 0.5).abs() < 1e-12);
    let (t, phi) = star_tree();
    let c = GraphPoint::Vertex(t.graph().vertex("c").unwrap());
    assert!((phi_tilde(&phi, t.graph(), &t.whole(), &c).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn split_interval_at_half() {
    let (t, phi) = interval_tree();
    let s = split_once(&t, &phi, 0.5).unwrap();
    let f = s.piece.subtree.fragments();
    assert_eq!(f.len(), 1);
    assert!((f[0].a - 0.5).abs() < 1e-9 && f[0].b == 1.0);
    assert!((phi.eval_subtree(&s.rest) - 0.5).abs() < 1e-9);
    assert!(phi.eval_subtree(&s.rest) <= 1.0 - 0.5 + 1e-9);
}

#[test]
fn split_star_at_center() {
    let (t, phi) = star_tree();
    let g = t.graph();
    let s = split_once(&t, &phi, 1.5).unwrap();
    assert_eq!(s.piece.puncture, GraphPoint::Vertex(g.vertex("c").unwrap()));
    let tilde = phi_tilde(&phi, g, &s.piece.subtree, &s.piece.puncture).unwrap();
    assert!((tilde - 1.0).abs() < 1e-12);
    assert!(tilde <= 1.5 && 1.5 <= phi.eval_subtree(&s.piece.subtree) + 1e-12);
    assert!((phi.eval_subtree(&s.piece.subtree) - 2.0).abs() < 1e-12);
}

#[test]
fn single_piece_partitions() {
    let (t, phi) = interval_tree();
    let p = partition_n(&t, &phi, 1).unwrap();
    assert_eq!(p.achieved(), 1);
    assert_eq!(p.pieces[0].puncture.offset_on(t.graph(), EdgeId(0)), Some(0.5));
    assert!((p.certificate(t.graph(), &phi) - 0.5).abs() < 1e-9);

    let (t, phi) = star_tree();
    let p = partition_n(&t, &phi, 1).unwrap();
    assert_eq!(p.achieved(), 1);
    assert_eq!(p.pieces[0].puncture, GraphPoint::Vertex(t.graph().vertex("c").unwrap()));
    assert!((p.certificate(t.graph(), &phi) - 1.0).abs() < 1e-9);
}

#[test]
fn step_function_of_identity() {
    let g = samples::interval(1.0);
    let u = PiecewiseLinear::from_nodes(&g, &[0.0, 1.0], &[vec![]]);
    let piece = |a: f64, b: f64| PuncturedSubtree {
        subtree: Subtree::from_fragments(vec![Fragment { edge: EdgeId(0), a, b }]).unwrap(),
        puncture: if a == 0.0 { v(0) } else { GraphPoint::on_edge(&g, EdgeId(0), a).unwrap() },
    };
    let p = Partition {
        pieces: vec![piece(0.0, 0.5), piece(0.5, 1.0)],
        target: 2,
    };
    let steps: Vec<f64> = step_projection(&p, &u, &g).pieces.iter().map(|x| x.1).collect();
    assert_eq!(steps, vec![0.0, 0.5]);
}

#[test]
fn approximation_of_identity() {
    let g = samples::interval(1.0);
    let w = Weight::constant(&g, 1.0);
    let u = PiecewiseLinear::from_nodes(&g, &[0.0, 1.0], &[vec![]]);
    let (lhs, rhs) = ApproxSetup::new(&g, &w, 1).unwrap().evaluate(&u);
    assert!((lhs - 1.0 / 12.0).abs() < 1e-12);
    assert!((rhs - 0.25).abs() < 1e-12);
}

#[test]
fn higher_order_constants() {
    assert!((higher_order_constant(2).unwrap() - 16.0 / 3.0).abs() < 1e-12);
    assert!((higher_order_constant(3).unwrap() - 36.45).abs() < 1e-12);
}

#[test]
fn mesh_keeps_breakpoints() {
    let g = samples::interval(1.0);
    let w = Weight::from_edges(&g, vec![PiecewiseConstant::new(vec![0.0, 0.3, 1.0], vec![1.0, 2.0]).unwrap()])
        .unwrap();
    let m = build_mesh(&g, &w, &v(1), 0.5).unwrap();
    let o = m.offsets(EdgeId(0));
    assert!(o.contains(&0.3));
    assert!(o.windows(2).all(|p| p[1] - p[0] <= 0.5 + 1e-15));
}

#[test]
fn element_blocks() {
    let h = 0.125;
    let g = samples::interval(h);
    let w = Weight::constant(&g, 2.0);
    let p = assemble(&build_mesh(&g, &w, &v(1), 1.0).unwrap(), &w);
    let (a, b) = (p.stiffness_full(), p.mass_full());
    for (i, j, s, m) in [(0, 0, 1.0, 2.0), (0, 1, -1.0, 1.0), (1, 1, 1.0, 2.0)] {
        assert!((a.get(i, j) - s / h).abs() < 1e-12);
        assert!((b.get(i, j) - 2.0 * h / 6.0 * m).abs() < 1e-15);
    }
}

#[test]
fn interval_eigenvalues() {
    let g = samples::interval(1.0);
    let s = spectrum(&g, &Weight::constant(&g, 1.0), &[v(1)], 1.0 / 2000.0, SolveOptions::default()).unwrap();
    assert!(close(s.plus[0], 0.405285, 1e-5));
    assert!(close(s.plus[1], 0.045032, 1e-4));
    for (n, l) in s.plus.iter().enumerate().take(50) {
        let n = (n + 1) as f64;
        assert!(n * n * l <= 1.0);
    }
}

#[test]
fn closed_form_spectra() {
    assert!(close(exact_interval_spectrum(1.0, Boundary::OnePoint, 1)[0], 4.0 / (PI * PI), 1e-15));
    assert!(close(exact_interval_spectrum(1.0, Boundary::TwoPoint, 1)[0], 1.0 / (PI * PI), 1e-15));
}

#[test]
fn laplacian_on_interval() {
    let g = samples::interval(1.0);
    let mu = laplacian_spectrum(&g, &v(1), 1.0 / 1000.0).unwrap();
    assert!(close(mu[0], PI * PI / 4.0, 1e-5));
    assert!(mu[0] >= 1.0);
}

/// First root of `2 sin² k = cos² k`, the Kirchhoff condition at the center
/// for a sine on the rooted arm and cosines on the two free arms.
fn star_secular_root() -> f64 {
    let f = |k: f64| 2.0 * k.sin().powi(2) - k.cos().powi(2);
    let (mut lo, mut hi) = (1e-9, PI / 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn laplacian_on_star_matches_secular_equation() {
    let g = samples::star(&[1.0, 1.0, 1.0]);
    let leaf = GraphPoint::Vertex(g.vertex("l1").unwrap());
    let mu = laplacian_spectrum(&g, &leaf, 0.01).unwrap();
    let k = star_secular_root();
    assert!(close(mu[0], k * k, 1e-4), "{} {}", mu[0], k * k);
}

#[test]
fn weyl_ratio_on_interval() {
    let g = samples::interval(1.0);
    let rep = weyl_check(&g, &Weight::constant(&g, 1.0), &v(0), 25, 0.002, 2).unwrap();
    let r = rep.plus.unwrap().ratios[24];
    assert!((r - 50.0 / 49.0).abs() < 1e-3, "{r}");
}

#[test]
fn weyl_ratio_on_star() {
    let g = samples::star(&[1.0, 1.0, 1.0]);
    let leaf = GraphPoint::Vertex(g.vertex("l1").unwrap());
    let rep = weyl_check(&g, &Weight::constant(&g, 1.0), &leaf, 25, 0.004, 2).unwrap();
    assert!(rep.max_deviation() <= 0.03);
}

#[test]
fn snumbers_of_unit_amplitude() {
    let g = samples::interval(1.0);
    let r = snumbers_halfinv(&g, &Weight::constant(&g, 1.0), &v(1), 1.0 / 2000.0, 1e-9).unwrap();
    for n in 1..=10 {
        let exact = 2.0 / ((2 * n - 1) as f64 * PI);
        assert!(close(r.s[n - 1], exact, 1e-4));
        assert!(r.s[n - 1] <= 1.0 / n as f64);
    }
}

#[test]
fn sharpness_bump_and_uniform() {
    let w = 0.01;
    let r = sharpness_search(1.0, w, 1e-3).unwrap();
    let rayleigh = (1.0 - (1.0 - w).powi(3)) / (3.0 * w);
    assert!(r.ratio >= rayleigh * (1.0 - 1e-12) && rayleigh >= 0.95);
    let u = sharpness_search(1.0, 1.0, 1.0 / 2000.0).unwrap();
    assert!(close(u.ratio, 4.0 / (PI * PI), 1e-5));
    for r in dirichlet_interval_ratios(1.0, 10, 1.0 / 2000.0).unwrap() {
        assert!(r <= 1.0 && close(r, 4.0 / (PI * PI), 1e-4));
    }
}

fn unit() -> (MetricGraph, GraphPoint) {
    (samples::interval(1.0), v(0))
}

#[test]
fn m_of_linear_kernel() {
    let (g, root) = unit();
    let m = m_functional(&KernelSpec::expression("x").unwrap(), &g, &root, 0.01).unwrap();
    assert!(close(m.m, 4.0 / 3.0, 1e-4));
}

#[test]
fn rank_one_singular_value() {
    let (g, root) = unit();
    let s = singular_values(&KernelSpec::expression("x").unwrap(), &g, &root, 0.01).unwrap();
    assert!(close(s[0], 1.0 / 3f64.sqrt(), 1e-4));
    assert!(s[1] < 1e-10);
}

#[test]
fn green_kernel_singular_values() {
    let (g, root) = unit();
    let s = singular_values(&KernelSpec::expression("min(x,y)").unwrap(), &g, &root, 1.0 / 400.0).unwrap();
    let exact = exact_interval_spectrum(1.0, Boundary::OnePoint, 5);
    for (a, b) in s.iter().zip(&exact) {
        assert!(close(*a, *b, 2e-4), "{a} {b}");
    }
}

#[test]
fn vanishing_kernel_series() {
    let (g, root) = unit();
    let opts = KernelOptions { tail_tol: 1e-2, slack: 1e-9 };
    let k = KernelSpec::expression("x").unwrap().vanishing(true);
    let r = check_kernel_bound(&k, &g, &root, 0.01, opts).unwrap();
    assert!(close(r.series, 1.0 / 3.0, 1e-4));
    assert!((r.refined_bound.unwrap() - 8.0).abs() < 1e-9);

    let k = KernelSpec::expression("min(x,y)").unwrap().vanishing(true);
    let r = check_kernel_bound(&k, &g, &root, 1.0 / 400.0, opts).unwrap();
    let series: f64 = (1..=1_000_000u64)
        .map(|n| {
            let n = n as f64;
            16.0 * n * n / ((2.0 * n - 1.0).powi(4) * PI.powi(4))
        })
        .sum();
    assert!((r.series - series).abs() < 1e-3);
    // ∫∫ χ_{y > x} by midpoint rule
    let m = 1000;
    let cells = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|(i, j)| j > i).count();
    let brute = cells as f64 / (m * m) as f64;
    assert!((r.m.derivative - brute).abs() < 2e-3);
    assert!(r.series <= 8.0 * r.m.derivative);
    assert!(r.passed());
}
