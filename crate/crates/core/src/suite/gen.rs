use rand::Rng;

use crate::graph::{EdgeId, GraphPoint, GraphSpec, MetricGraph, PiecewiseConstant, Weight};

const MAX_EDGES: usize = 15;

fn vname(i: usize) -> String {
    format!("v{i:02}")
}

fn ename(i: usize) -> String {
    format!("e{i:02}")
}

fn tree_spec<R: Rng + ?Sized>(rng: &mut R, edges: usize) -> GraphSpec {
    let mut spec = GraphSpec::new();
    for i in 0..=edges {
        spec = spec.vertex(vname(i));
    }
    for i in 1..=edges {
        let parent = rng.random_range(0..i);
        let (a, b) = if rng.random_bool(0.5) { (parent, i) } else { (i, parent) };
        spec = spec.edge(ename(i - 1), vname(a), vname(b), rng.random_range(0.1..=3.0));
    }
    spec
}

/// Random tree with 1 to 15 edges of length in `[0.1, 3]`, each vertex
/// attached to a uniformly chosen earlier one, orientations random.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R) -> MetricGraph {
    let edges = rng.random_range(1..=MAX_EDGES);
    MetricGraph::new(tree_spec(rng, edges)).expect("generated tree is valid")
}

/// Random connected graph with one to three independent cycles and at most
/// 15 edges. Extra edges join distinct vertices and may be parallel.
pub fn random_cyclic<R: Rng + ?Sized>(rng: &mut R) -> MetricGraph {
    let extra = rng.random_range(1..=3);
    let edges = rng.random_range(1..=MAX_EDGES - extra);
    let mut spec = tree_spec(rng, edges);
    for k in 0..extra {
        let a = rng.random_range(0..=edges);
        let mut b = rng.random_range(0..edges);
        if b >= a {
            b += 1;
        }
        spec = spec.edge(ename(edges + k), vname(a), vname(b), rng.random_range(0.1..=3.0));
    }
    MetricGraph::new(spec).expect("generated graph is valid")
}

/// One to three constant pieces per edge with values in `[-2, 2]`, or in
/// `[0, 2]` when `signed` is false.
pub fn random_weight<R: Rng + ?Sized>(g: &MetricGraph, rng: &mut R, signed: bool) -> Weight {
    let lo = if signed { -2.0 } else { 0.0 };
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let pieces = rng.random_range(1..=3);
            let mut breaks: Vec<f64> = (1..pieces).map(|_| rng.random_range(0.0..e.length)).collect();
            breaks.push(0.0);
            breaks.push(e.length);
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let values = (1..breaks.len()).map(|_| rng.random_range(lo..=2.0)).collect();
            PiecewiseConstant::new(breaks, values).expect("sorted breakpoints")
        })
        .collect();
    Weight::from_edges(g, edges).expect("pieces span their edges")
}

/// A vertex or an interior point, with equal probability.
pub fn random_root<R: Rng + ?Sized>(g: &MetricGraph, rng: &mut R) -> GraphPoint {
    if rng.random_bool(0.5) {
        GraphPoint::Vertex(crate::graph::VertexId(rng.random_range(0..g.vertex_count())))
    } else {
        let e = EdgeId(rng.random_range(0..g.edge_count()));
        GraphPoint::on_edge(g, e, rng.random_range(0.0..g.length(e))).expect("offset inside the edge")
    }
}
