use super::{Fragment, Subtree, TreeError};
use crate::graph::{EdgeId, GraphPoint, GraphSpec, MetricGraph, VertexId};

/// The topology of a subtree as a stand-alone tree.
///
/// Local edge `k` is fragment `k` of the subtree (both are sorted by host
/// edge id), oriented like its host edge. Fragment ends inside a host edge
/// become leaves named `edge@offset`.
#[derive(Debug, Clone)]
pub(crate) struct LocalTree {
    pub graph: MetricGraph,
    pub origin: Vec<Fragment>,
}

/// Location of a host point in a local tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Located {
    Vertex(VertexId),
    /// Inside local edge `edge` at host offset `t`.
    Interior { edge: EdgeId, t: f64 },
}

/// A local tree hung from one of its vertices.
#[derive(Debug, Clone)]
pub(crate) struct Hanging {
    /// `(edge, child)` pairs below each vertex, in edge order.
    pub children: Vec<Vec<(EdgeId, VertexId)>>,
    /// All edges below each vertex.
    pub below: Vec<Vec<EdgeId>>,
}

impl LocalTree {
    pub fn new(host: &MetricGraph, sub: &Subtree) -> Result<Self, TreeError> {
        let name = |f: &Fragment, t: f64| -> String {
            let e = host.edge(f.edge);
            if t == 0.0 {
                host.vertex_name(e.from).to_string()
            } else if t == e.length {
                host.vertex_name(e.to).to_string()
            } else {
                format!("{}@{}", e.id, t)
            }
        };
        let mut spec = GraphSpec::new();
        let mut seen = std::collections::BTreeSet::new();
        for f in sub.fragments() {
            let (u, v) = (name(f, f.a), name(f, f.b));
            for w in [&u, &v] {
                if seen.insert(w.clone()) {
                    spec.vertices.push(w.clone());
                }
            }
            spec = spec.edge(host.edge(f.edge).id.clone(), u, v, f.length());
        }
        let graph = MetricGraph::new(spec)
            .map_err(|e| TreeError::InvalidFragments(format!("fragments do not form a subtree: {e}")))?;
        if !graph.is_tree() {
            return Err(TreeError::NotATree);
        }
        Ok(Self {
            graph,
            origin: sub.fragments().to_vec(),
        })
    }

    /// The host point of local vertex `v`.
    pub fn host_point(&self, host: &MetricGraph, v: VertexId) -> GraphPoint {
        let k = self.graph.incident(v)[0];
        let f = &self.origin[k.0];
        let t = if self.graph.edge(k).from == v { f.a } else { f.b };
        GraphPoint::on_edge(host, f.edge, t).expect("fragment ends lie on the host edge")
    }

    pub fn locate(&self, host: &MetricGraph, p: &GraphPoint) -> Option<Located> {
        for (k, f) in self.origin.iter().enumerate() {
            let Some(t) = p.offset_on(host, f.edge) else {
                continue;
            };
            let local = self.graph.edge(EdgeId(k));
            if t == f.a {
                return Some(Located::Vertex(local.from));
            }
            if t == f.b {
                return Some(Located::Vertex(local.to));
            }
            if f.a < t && t < f.b {
                return Some(Located::Interior { edge: EdgeId(k), t });
            }
        }
        None
    }

    pub fn fragments_of(&self, edges: &[EdgeId]) -> Vec<Fragment> {
        edges.iter().map(|k| self.origin[k.0]).collect()
    }

    /// The subtree hung from `top`.
    pub fn hang(&self, top: VertexId) -> Hanging {
        let g = &self.graph;
        let n = g.vertex_count();
        let mut children = vec![Vec::new(); n];
        let mut order = vec![top];
        let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
        let mut visited = vec![false; n];
        visited[top.0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &e in g.incident(v) {
                if Some(e) == parent_edge[v.0] {
                    continue;
                }
                let w = g.edge(e).other(v);
                if !visited[w.0] {
                    visited[w.0] = true;
                    parent_edge[w.0] = Some(e);
                    children[v.0].push((e, w));
                    order.push(w);
                }
            }
        }
        let mut below: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        for &v in order.iter().rev() {
            let mut acc = Vec::new();
            for &(e, c) in &children[v.0] {
                acc.push(e);
                acc.extend_from_slice(&below[c.0]);
            }
            acc.sort();
            below[v.0] = acc;
        }
        Hanging { children, below }
    }

    /// Edges of the branch entering `child` through `e`, including `e`.
    pub fn branch(&self, hanging: &Hanging, e: EdgeId, child: VertexId) -> Vec<EdgeId> {
        let mut b = hanging.below[child.0].clone();
        b.push(e);
        b.sort();
        b
    }
}
