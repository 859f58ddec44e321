use sha2::{Digest, Sha256};

use super::SpectralError;
use crate::graph::{EdgeId, GraphPoint, MetricGraph, Weight};

/// Finite-element mesh on a metric graph.
///
/// Every weight breakpoint and every constrained point is a node, and each
/// vertex is a single node shared by its incident edges. Interior nodes are
/// numbered edge by edge and vertex nodes last, which keeps the envelope of
/// the assembled matrices narrow.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    offsets: Vec<Vec<f64>>,
    nodes: Vec<Vec<usize>>,
    ends: Vec<(usize, usize)>,
    node_count: usize,
    vertex_base: usize,
    dirichlet: Vec<GraphPoint>,
    constrained: Vec<usize>,
    h: f64,
}

/// One element: `edge`, its offsets `t0 < t1` and global node indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Element {
    pub edge: EdgeId,
    pub t0: f64,
    pub t1: f64,
    pub i: usize,
    pub j: usize,
}

impl Element {
    pub fn length(&self) -> f64 {
        self.t1 - self.t0
    }
}

impl Mesh {
    /// Uniform refinement of every segment between consecutive breakpoints
    /// to spacing at most `h`; `dirichlet` points become constrained nodes.
    pub fn build(
        g: &MetricGraph,
        weight: &Weight,
        dirichlet: &[GraphPoint],
        h: f64,
    ) -> Result<Self, SpectralError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(SpectralError::NonpositiveStep(h));
        }
        let offsets = g
            .edge_ids()
            .map(|e| {
                let len = g.length(e);
                let mut cuts: Vec<f64> = weight.edge(e).breakpoints().to_vec();
                for p in dirichlet {
                    if let GraphPoint::Interior { edge, offset } = *p {
                        if edge == e {
                            cuts.push(offset);
                        }
                    }
                }
                cuts.push(0.0);
                cuts.push(len);
                cuts.retain(|&t| (0.0..=len).contains(&t));
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let mut nodes = vec![0.0];
                for w in cuts.windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let pieces = (((b - a) / h) - 1e-12).ceil().max(1.0) as usize;
                    for k in 1..pieces {
                        nodes.push(a + (b - a) * k as f64 / pieces as f64);
                    }
                    nodes.push(b);
                }
                nodes
            })
            .collect();
        let ends = g.edges().iter().map(|e| (e.from.0, e.to.0)).collect();
        Self::from_offsets(offsets, ends, g.vertex_count(), dirichlet.to_vec(), h)
    }

    fn from_offsets(
        offsets: Vec<Vec<f64>>,
        ends: Vec<(usize, usize)>,
        vertex_count: usize,
        dirichlet: Vec<GraphPoint>,
        h: f64,
    ) -> Result<Self, SpectralError> {
        let mut next = 0;
        let mut nodes: Vec<Vec<usize>> = offsets
            .iter()
            .map(|o| {
                let mut ids = vec![0; o.len()];
                for id in ids.iter_mut().take(o.len() - 1).skip(1) {
                    *id = next;
                    next += 1;
                }
                ids
            })
            .collect();
        let vertex_base = next;
        for (ids, &(from, to)) in nodes.iter_mut().zip(&ends) {
            ids[0] = vertex_base + from;
            *ids.last_mut().unwrap() = vertex_base + to;
        }
        let mut mesh = Self {
            offsets,
            nodes,
            ends,
            node_count: vertex_base + vertex_count,
            vertex_base,
            dirichlet: Vec::new(),
            constrained: Vec::new(),
            h,
        };
        let mut constrained = dirichlet
            .iter()
            .map(|p| mesh.node_at(p).ok_or_else(|| SpectralError::PointNotOnMesh(format!("{p:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        constrained.sort_unstable();
        constrained.dedup();
        mesh.dirichlet = dirichlet;
        mesh.constrained = constrained;
        Ok(mesh)
    }

    /// Bisects every element. The result is nested in `self`.
    pub fn refine(&self) -> Self {
        let offsets = self
            .offsets
            .iter()
            .map(|o| {
                let mut fine = Vec::with_capacity(2 * o.len() - 1);
                for w in o.windows(2) {
                    fine.push(w[0]);
                    fine.push(0.5 * (w[0] + w[1]));
                }
                fine.push(*o.last().unwrap());
                fine
            })
            .collect();
        Self::from_offsets(
            offsets,
            self.ends.clone(),
            self.node_count - self.vertex_base,
            self.dirichlet.clone(),
            0.5 * self.h,
        )
        .expect("refinement keeps constrained nodes")
    }

    /// Requested maximal spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.offsets.len()
    }

    pub fn element_count(&self) -> usize {
        self.offsets.iter().map(|o| o.len() - 1).sum()
    }

    pub fn offsets(&self, e: EdgeId) -> &[f64] {
        &self.offsets[e.0]
    }

    pub fn edge_nodes(&self, e: EdgeId) -> &[usize] {
        &self.nodes[e.0]
    }

    pub fn vertex_node(&self, v: usize) -> usize {
        self.vertex_base + v
    }

    /// Sorted indices of the nodes carrying the Dirichlet condition.
    pub fn constrained(&self) -> &[usize] {
        &self.constrained
    }

    pub fn dirichlet(&self) -> &[GraphPoint] {
        &self.dirichlet
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.offsets.iter().zip(&self.nodes).enumerate().flat_map(|(e, (o, ids))| {
            (0..o.len() - 1).map(move |k| Element {
                edge: EdgeId(e),
                t0: o[k],
                t1: o[k + 1],
                i: ids[k],
                j: ids[k + 1],
            })
        })
    }

    pub fn max_element_length(&self) -> f64 {
        self.elements().map(|el| el.length()).fold(0.0, f64::max)
    }

    /// Node index of a point, if the point is a node.
    pub fn node_at(&self, p: &GraphPoint) -> Option<usize> {
        match *p {
            GraphPoint::Vertex(v) => Some(self.vertex_base + v.0),
            GraphPoint::Interior { edge, offset } => {
                let o = &self.offsets[edge.0];
                o.iter().position(|&t| t == offset).map(|k| self.nodes[edge.0][k])
            }
        }
    }

    /// One `(edge, offset)` location per node, in node order. Vertex nodes use
    /// the first edge that reaches them.
    pub fn node_locations(&self) -> Vec<(EdgeId, f64)> {
        let mut loc = vec![None; self.node_count];
        for (e, (o, ids)) in self.offsets.iter().zip(&self.nodes).enumerate() {
            for (&t, &id) in o.iter().zip(ids) {
                loc[id].get_or_insert((EdgeId(e), t));
            }
        }
        loc.into_iter()
            .map(|l| l.expect("every node lies on an edge"))
            .collect()
    }

    /// Composite-trapezoid weights: half the length of each adjacent element.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.node_count];
        for el in self.elements() {
            w[el.i] += 0.5 * el.length();
            w[el.j] += 0.5 * el.length();
        }
        w
    }

    /// Short content hash of the node layout, used to pair sampled data with
    /// the mesh it was sampled on.
    pub fn hash(&self, g: &MetricGraph) -> String {
        let mut hasher = Sha256::new();
        for (e, o) in g.edges().iter().zip(&self.offsets) {
            hasher.update(e.id.as_bytes());
            hasher.update([0]);
            for t in o {
                hasher.update(t.to_le_bytes());
            }
        }
        hex::encode(&hasher.finalize()[..8])
    }
}

/// Mesh with the single Dirichlet point `root`.
pub fn build_mesh(
    g: &MetricGraph,
    weight: &Weight,
    root: &GraphPoint,
    h: f64,
) -> Result<Mesh, SpectralError> {
    Mesh::build(g, weight, std::slice::from_ref(root), h)
}
