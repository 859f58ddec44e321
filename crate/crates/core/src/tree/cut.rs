use std::collections::BTreeMap;

use super::{Fragment, TreeError};
use crate::graph::{
    EdgeId, EdgeNodes, GraphPoint, MetricGraph, PiecewiseLinear, VertexId, Weight,
};

/// A tree obtained from a graph by cutting every cycle, with the map back.
///
/// Each cut replaces an edge `e = (u, w)` of length `l` by `e/a = (u, e/1)`
/// and `e/b = (e/2, w)`, both of length `l/2`. The cut map `τ` glues `e/1`
/// and `e/2` back to the midpoint of `e`; it is length preserving and onto.
#[derive(Debug, Clone, PartialEq)]
pub struct CutReport {
    pub source: MetricGraph,
    pub tree: MetricGraph,
    /// Source fragment covered by each tree edge, in tree edge order.
    pub origin: Vec<Fragment>,
    /// Tree vertices glued together by `τ`, one pair per cut.
    pub pairs: Vec<(VertexId, VertexId)>,
}

/// Cuts the smallest-index edge on a cycle at its midpoint until no cycle is
/// left. A tree is returned unchanged.
pub fn cut_cycles(g: &MetricGraph) -> Result<CutReport, TreeError> {
    let mut current = g.clone();
    let mut origin: BTreeMap<String, Fragment> =
        g.edge_ids().map(|e| (g.edge(e).id.clone(), Fragment::full(g, e))).collect();
    let mut cut_names = Vec::new();
    while let Some(e) = current.edge_ids().find(|&e| current.on_cycle(e)) {
        let edge = current.edge(e).clone();
        let f = origin.remove(&edge.id).expect("every edge has an origin");
        let mid = f.a + 0.5 * f.length();
        let mut spec = current.to_spec();
        spec.edges.retain(|s| s.id != edge.id);
        let (x1, x2) = (format!("{}/1", edge.id), format!("{}/2", edge.id));
        spec = spec
            .vertex(x1.clone())
            .vertex(x2.clone())
            .edge(
                format!("{}/a", edge.id),
                current.vertex_name(edge.from),
                x1.clone(),
                mid - f.a,
            )
            .edge(
                format!("{}/b", edge.id),
                x2.clone(),
                current.vertex_name(edge.to),
                f.b - mid,
            );
        origin.insert(format!("{}/a", edge.id), Fragment { edge: f.edge, a: f.a, b: mid });
        origin.insert(format!("{}/b", edge.id), Fragment { edge: f.edge, a: mid, b: f.b });
        cut_names.push((x1, x2));
        current = MetricGraph::new(spec)?;
    }
    let pairs = cut_names
        .iter()
        .map(|(a, b)| Ok((current.vertex(a)?, current.vertex(b)?)))
        .collect::<Result<_, TreeError>>()?;
    let origin = current.edges().iter().map(|e| origin[&e.id]).collect();
    Ok(CutReport {
        source: g.clone(),
        tree: current,
        origin,
        pairs,
    })
}

impl CutReport {
    pub fn cuts(&self) -> usize {
        self.pairs.len()
    }

    fn source_offset(&self, k: EdgeId, t: f64) -> f64 {
        let f = self.origin[k.0];
        if t == 0.0 {
            f.a
        } else if t == self.tree.length(k) {
            f.b
        } else {
            f.a + t
        }
    }

    /// `τ(p)`. Both copies of a cut point map to the same source point.
    pub fn tau(&self, p: &GraphPoint) -> GraphPoint {
        let (k, t) = match *p {
            GraphPoint::Vertex(v) => {
                let k = self.tree.incident(v)[0];
                let t = if self.tree.edge(k).from == v { 0.0 } else { self.tree.length(k) };
                (k, t)
            }
            GraphPoint::Interior { edge, offset } => (edge, offset),
        };
        let src = self.origin[k.0].edge;
        GraphPoint::on_edge(&self.source, src, self.source_offset(k, t))
            .expect("origin fragments lie in their source edge")
    }

    /// `V ∘ τ`.
    pub fn pull_weight(&self, w: &Weight) -> Weight {
        let edges = self
            .origin
            .iter()
            .map(|f| w.edge(f.edge).restrict(f.a, f.b))
            .collect();
        Weight::from_edges(&self.tree, edges).expect("restricted pieces match tree edge lengths")
    }

    /// `u ∘ τ`.
    pub fn pull_function(&self, u: &PiecewiseLinear) -> PiecewiseLinear {
        PiecewiseLinear::from_edge_nodes(
            self.origin
                .iter()
                .map(|f| u.edge(f.edge).restrict(f.a, f.b))
                .collect::<Vec<EdgeNodes>>(),
        )
    }

    /// Images of tree fragments in source coordinates. Two images may share
    /// a source edge.
    pub fn push_fragments(&self, fragments: &[Fragment]) -> Vec<Fragment> {
        fragments
            .iter()
            .map(|f| Fragment {
                edge: self.origin[f.edge.0].edge,
                a: self.source_offset(f.edge, f.a),
                b: self.source_offset(f.edge, f.b),
            })
            .collect()
    }

    /// Tree length mapped onto each source edge.
    pub fn length_by_source(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.source.edge_count()];
        for (k, f) in self.origin.iter().enumerate() {
            acc[f.edge.0] += self.tree.length(EdgeId(k));
        }
        acc
    }

    /// `Σ_e |Σ_{pieces of e}| - |e||`, zero when `τ` preserves length exactly.
    pub fn length_defect(&self) -> f64 {
        self.length_by_source()
            .iter()
            .zip(self.source.edges())
            .map(|(l, e)| (l - e.length).abs())
            .sum()
    }
}
