//! Small named graphs used throughout the examples and tests.

use super::{GraphSpec, MetricGraph};

/// Path graph with consecutive edges `e1, e2, ...` of the given lengths
/// joining vertices `v0, v1, ...`.
pub fn path(lengths: &[f64]) -> MetricGraph {
    let mut spec = GraphSpec::new();
    for i in 0..=lengths.len() {
        spec = spec.vertex(format!("v{i}"));
    }
    for (i, &l) in lengths.iter().enumerate() {
        spec = spec.edge(format!("e{}", i + 1), format!("v{i}"), format!("v{}", i + 1), l);
    }
    MetricGraph::new(spec).expect("path graph is valid")
}

/// The segment `[0, length]` as a one-edge graph `v0 --e1-- v1`.
pub fn interval(length: f64) -> MetricGraph {
    path(&[length])
}

/// Star with center `c` and leaves `l1..lk`, arm `ei` from `c` to `li`.
pub fn star(arms: &[f64]) -> MetricGraph {
    let mut spec = GraphSpec::new().vertex("c");
    for (i, &l) in arms.iter().enumerate() {
        spec = spec
            .vertex(format!("l{}", i + 1))
            .edge(format!("e{}", i + 1), "c", format!("l{}", i + 1), l);
    }
    MetricGraph::new(spec).expect("star graph is valid")
}

/// Two vertices `u, v` joined by parallel edges `a` and `b`.
pub fn two_edge_cycle(la: f64, lb: f64) -> MetricGraph {
    MetricGraph::new(
        GraphSpec::new()
            .vertex("u")
            .vertex("v")
            .edge("a", "u", "v", la)
            .edge("b", "u", "v", lb),
    )
    .expect("cycle graph is valid")
}

/// Triangle on `p, q, r` with unit edges.
pub fn triangle() -> MetricGraph {
    MetricGraph::new(
        GraphSpec::new()
            .vertex("p")
            .vertex("q")
            .vertex("r")
            .edge("pq", "p", "q", 1.0)
            .edge("qr", "q", "r", 1.0)
            .edge("rp", "r", "p", 1.0),
    )
    .expect("triangle is valid")
}
