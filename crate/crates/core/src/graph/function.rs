use super::{EdgeId, GraphPoint, MetricGraph, PiecewiseConstant, Weight};

/// Nodal values of a linear interpolant along one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeNodes {
    pub offsets: Vec<f64>,
    pub values: Vec<f64>,
}

impl EdgeNodes {
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.offsets.partition_point(|&o| o <= t).clamp(1, self.offsets.len() - 1);
        let (t0, t1) = (self.offsets[i - 1], self.offsets[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// Restriction to `[a, b]`, re-based to start at `0`.
    pub fn restrict(&self, a: f64, b: f64) -> Self {
        let mut offsets = vec![0.0];
        let mut values = vec![self.eval(a)];
        for (&t, &v) in self.offsets.iter().zip(&self.values) {
            if t > a && t < b {
                offsets.push(t - a);
                values.push(v);
            }
        }
        offsets.push(b - a);
        values.push(self.eval(b));
        Self { offsets, values }
    }

    /// `∫_a^b |u - c|² V dt`, exact for linear `u` and constant `V` pieces.
    pub fn weighted_sq_deviation(&self, a: f64, b: f64, c: f64, weight: &PiecewiseConstant) -> f64 {
        let mut cuts: Vec<f64> = self
            .offsets
            .iter()
            .chain(weight.breakpoints())
            .copied()
            .filter(|&t| t > a && t < b)
            .collect();
        cuts.push(a);
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.windows(2)
            .map(|w| {
                let (p, q) = (w[0], w[1]);
                let v = weight.value_at(0.5 * (p + q));
                if v == 0.0 {
                    return 0.0;
                }
                let (f0, f1) = (self.eval(p) - c, self.eval(q) - c);
                v * (q - p) * (f0 * f0 + f0 * f1 + f1 * f1) / 3.0
            })
            .sum()
    }

    /// `∫ |u'|² dt`.
    pub fn energy(&self) -> f64 {
        self.offsets
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| (v[1] - v[0]).powi(2) / (t[1] - t[0]))
            .sum()
    }
}

/// Continuous piecewise-linear function on a metric graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    edges: Vec<EdgeNodes>,
}

impl PiecewiseLinear {
    /// Assembles a function from per-edge nodal data, in edge order. The
    /// caller guarantees agreement at shared vertices.
    pub fn from_edge_nodes(edges: Vec<EdgeNodes>) -> Self {
        Self { edges }
    }

    /// Builds the function from its vertex values and, per edge, interior
    /// nodes `(offset, value)` with `0 < offset < length`. Continuity at the
    /// vertices holds by construction.
    pub fn from_nodes(
        g: &MetricGraph,
        vertex_values: &[f64],
        interior: &[Vec<(f64, f64)>],
    ) -> Self {
        assert_eq!(vertex_values.len(), g.vertex_count());
        assert_eq!(interior.len(), g.edge_count());
        let edges = g
            .edges()
            .iter()
            .zip(interior)
            .map(|(e, inner)| {
                let mut inner = inner.clone();
                inner.sort_by(|a, b| a.0.total_cmp(&b.0));
                inner.retain(|&(t, _)| t > 0.0 && t < e.length);
                inner.dedup_by(|a, b| a.0 == b.0);
                let mut offsets = vec![0.0];
                let mut values = vec![vertex_values[e.from.0]];
                for (t, v) in inner {
                    offsets.push(t);
                    values.push(v);
                }
                offsets.push(e.length);
                values.push(vertex_values[e.to.0]);
                EdgeNodes { offsets, values }
            })
            .collect();
        Self { edges }
    }

    /// Builds a function from a closure of `(edge, offset)` sampled at the
    /// given interior offsets. The closure must agree at shared vertices.
    pub fn sample(
        g: &MetricGraph,
        offsets: &[Vec<f64>],
        f: impl Fn(EdgeId, f64) -> f64,
    ) -> Self {
        let mut vertex_values = vec![0.0; g.vertex_count()];
        for e in g.edge_ids() {
            let edge = g.edge(e);
            vertex_values[edge.from.0] = f(e, 0.0);
            vertex_values[edge.to.0] = f(e, edge.length);
        }
        let interior = g
            .edge_ids()
            .map(|e| offsets[e.0].iter().map(|&t| (t, f(e, t))).collect())
            .collect::<Vec<_>>();
        Self::from_nodes(g, &vertex_values, &interior)
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeNodes {
        &self.edges[e.0]
    }

    pub fn eval(&self, p: &GraphPoint, g: &MetricGraph) -> f64 {
        match *p {
            GraphPoint::Vertex(v) => {
                let e = g.incident(v)[0];
                let nodes = &self.edges[e.0];
                if g.edge(e).from == v {
                    nodes.values[0]
                } else {
                    *nodes.values.last().unwrap()
                }
            }
            GraphPoint::Interior { edge, offset } => self.edges[edge.0].eval(offset),
        }
    }

    /// `‖u'‖²₂`.
    pub fn energy(&self) -> f64 {
        self.edges.iter().map(EdgeNodes::energy).sum()
    }

    /// `∫ |u|² V dx`, exact.
    pub fn weighted_l2_sq(&self, weight: &Weight) -> f64 {
        self.edges
            .iter()
            .zip(weight.edges())
            .map(|(n, w)| n.weighted_sq_deviation(0.0, w.length(), 0.0, w))
            .sum()
    }
}
