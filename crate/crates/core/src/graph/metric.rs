use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{GraphPoint, MetricGraph, VertexId};

#[derive(Debug, PartialEq, PartialOrd)]
struct Dist(f64);

impl Eq for Dist {}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Shortest-path distances from a set of seeded vertices.
fn dijkstra(g: &MetricGraph, seeds: &[(VertexId, f64)]) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    for &(v, d) in seeds {
        if d < dist[v.0] {
            dist[v.0] = d;
            heap.push(Reverse((Dist(d), v.0)));
        }
    }
    while let Some(Reverse((Dist(d), v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &e in g.incident(VertexId(v)) {
            let edge = g.edge(e);
            let w = edge.other(VertexId(v));
            let nd = d + edge.length;
            if nd < dist[w.0] {
                dist[w.0] = nd;
                heap.push(Reverse((Dist(nd), w.0)));
            }
        }
    }
    dist
}

/// Distances from `p` to every vertex.
pub fn vertex_distances_from(g: &MetricGraph, p: &GraphPoint) -> Vec<f64> {
    match *p {
        GraphPoint::Vertex(v) => dijkstra(g, &[(v, 0.0)]),
        GraphPoint::Interior { edge, offset } => {
            let e = g.edge(edge);
            dijkstra(g, &[(e.from, offset), (e.to, e.length - offset)])
        }
    }
}

/// All-pairs vertex distance matrix.
pub fn vertex_distances(g: &MetricGraph) -> Vec<Vec<f64>> {
    g.vertex_ids().map(|v| dijkstra(g, &[(v, 0.0)])).collect()
}

/// Length of the shortest path between two points of the metric graph.
pub fn distance(g: &MetricGraph, p: &GraphPoint, q: &GraphPoint) -> f64 {
    let from_p = vertex_distances_from(g, p);
    let via_skeleton = match *q {
        GraphPoint::Vertex(v) => from_p[v.0],
        GraphPoint::Interior { edge, offset } => {
            let e = g.edge(edge);
            (from_p[e.from.0] + offset).min(from_p[e.to.0] + e.length - offset)
        }
    };
    match (*p, *q) {
        (
            GraphPoint::Interior { edge: e1, offset: s },
            GraphPoint::Interior { edge: e2, offset: t },
        ) if e1 == e2 => via_skeleton.min((s - t).abs()),
        _ => via_skeleton,
    }
}

/// `sup ρ(x, y)` over all pairs of points.
///
/// For points `x` on edge `e1` at offset `s` and `y` on `e2` at `t`, the
/// distance is a minimum of affine functions of `(s, t)`. Maximizing over `t`
/// in closed form leaves a continuous piecewise-linear function of `s` whose
/// breakpoints are enumerated exactly, so interior antipodal points on cycles
/// are found without sampling.
pub fn diameter(g: &MetricGraph) -> f64 {
    let d = vertex_distances(g);
    let mut best = 0.0f64;
    for (i, e1) in g.edges().iter().enumerate() {
        let (u1, v1, l1) = (e1.from.0, e1.to.0, e1.length);
        best = best.max((l1 + d[u1][v1].min(l1)) / 2.0);
        for e2 in &g.edges()[i + 1..] {
            let (u2, v2, l2) = (e2.from.0, e2.to.0, e2.length);
            // distance from (e1, s) to the endpoints of e2
            let alpha = |s: f64| (s + d[u1][u2]).min(l1 - s + d[v1][u2]);
            let beta = |s: f64| (s + d[u1][v2]).min(l1 - s + d[v1][v2]);
            let far = |s: f64| {
                let (a, b) = (alpha(s), beta(s));
                if (a - b).abs() <= l2 {
                    (a + b + l2) / 2.0
                } else {
                    a.min(b) + l2
                }
            };
            let ka = (l1 + d[v1][u2] - d[u1][u2]) / 2.0;
            let kb = (l1 + d[v1][v2] - d[u1][v2]) / 2.0;
            let mut knots = vec![0.0, l1, ka.clamp(0.0, l1), kb.clamp(0.0, l1)];
            knots.sort_by(f64::total_cmp);
            let mut candidates = knots.clone();
            for w in knots.windows(2) {
                let (s0, s1) = (w[0], w[1]);
                if s1 <= s0 {
                    continue;
                }
                let (f0, f1) = (alpha(s0) - beta(s0), alpha(s1) - beta(s1));
                for target in [l2, -l2] {
                    if (f0 - target) * (f1 - target) < 0.0 {
                        candidates.push(s0 + (target - f0) * (s1 - s0) / (f1 - f0));
                    }
                }
            }
            for s in candidates {
                best = best.max(far(s));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{samples, EdgeId};

    #[test]
    fn interval_and_star() {
        assert_eq!(diameter(&samples::interval(1.0)), 1.0);
        assert_eq!(diameter(&samples::star(&[1.0, 1.0, 1.0])), 2.0);
        let p = samples::path(&[1.0, 2.0]);
        let a = GraphPoint::Vertex(p.vertex("v0").unwrap());
        let b = GraphPoint::Vertex(p.vertex("v2").unwrap());
        assert_eq!(distance(&p, &a, &b), 3.0);
        assert_eq!(distance(&p, &a, &a), 0.0);
    }

    #[test]
    fn parallel_edges_take_the_short_one() {
        let g = samples::two_edge_cycle(1.0, 3.0);
        let u = GraphPoint::Vertex(g.vertex("u").unwrap());
        let v = GraphPoint::Vertex(g.vertex("v").unwrap());
        assert_eq!(distance(&g, &u, &v), 1.0);
        // antipode of u on a cycle of length 4
        let far = GraphPoint::on_edge(&g, EdgeId(1), 2.0).unwrap();
        assert_eq!(distance(&g, &u, &far), 2.0);
        assert_eq!(diameter(&g), 2.0);
    }

    #[test]
    fn same_edge_shortcut() {
        let g = samples::two_edge_cycle(2.0, 2.0);
        let p = GraphPoint::on_edge(&g, EdgeId(0), 0.25).unwrap();
        let q = GraphPoint::on_edge(&g, EdgeId(0), 1.5).unwrap();
        assert_eq!(distance(&g, &p, &q), 1.25);
        let r = GraphPoint::on_edge(&g, EdgeId(1), 0.25).unwrap();
        assert_eq!(distance(&g, &p, &r), 0.5);
    }

    #[test]
    fn cycle_diameter_matches_dense_sampling() {
        let g = samples::two_edge_cycle(2.0, 2.0);
        let n = 400;
        let pts: Vec<GraphPoint> = g
            .edge_ids()
            .flat_map(|e| (0..=n).map(move |k| (e, k)))
            .map(|(e, k)| GraphPoint::on_edge(&g, e, 2.0 * k as f64 / n as f64).unwrap())
            .collect();
        let brute = pts
            .iter()
            .flat_map(|p| pts.iter().map(|q| distance(&g, p, q)))
            .fold(0.0f64, f64::max);
        assert!((brute - 2.0).abs() < 1e-12);
        assert_eq!(diameter(&g), 2.0);
    }
}
