//! Finite metric graphs: data model, validation, file ingestion and metric
//! geometry.
//!
//! A [`MetricGraph`] is a connected multigraph without loops whose edges are
//! line segments of positive finite length. Vertices and edges carry opaque
//! string ids and are stored sorted by id, so every downstream tie-break is
//! reproducible.

mod function;
mod io;
mod metric;
mod point;
pub mod samples;
mod weight;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use function::{EdgeNodes, PiecewiseLinear};
pub use io::{emit_graph, graph_hash, parse_graph, GraphFile, GraphInput, ParseError, RootRecord, WeightRecord};
pub use metric::{diameter, distance, vertex_distances, vertex_distances_from};
pub use point::GraphPoint;
pub use weight::{PiecewiseConstant, Weight, WeightError};

/// Index of a vertex in the id-sorted vertex list of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Index of an edge in the id-sorted edge list of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub from: VertexId,
    pub to: VertexId,
    pub length: f64,
}

impl Edge {
    /// The endpoint opposite to `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.from == v {
            self.to
        } else {
            self.from
        }
    }
}

/// Unvalidated description of a graph, as read from a file or built by hand.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: f64,
}

impl GraphSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(id.into());
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        length: f64,
    ) -> Self {
        self.edges.push(EdgeSpec {
            id: id.into(),
            from: from.into(),
            to: to.into(),
            length,
        });
        self
    }
}

/// A single broken invariant, naming the offending entity.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoVertices,
    NoEdges,
    DuplicateVertex(String),
    DuplicateEdge(String),
    UnknownEndpoint { edge: String, vertex: String },
    Loop { edge: String },
    NonpositiveLength { edge: String, length: f64 },
    NonfiniteLength { edge: String },
    IsolatedVertex { vertex: String },
    Disconnected { unreachable: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::NoEdges => write!(f, "graph has no edges"),
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex id {v:?}"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge id {e:?}"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge:?} refers to unknown vertex {vertex:?}")
            }
            Violation::Loop { edge } => write!(f, "edge {edge:?} is a loop"),
            Violation::NonpositiveLength { edge, length } => {
                write!(f, "edge {edge:?} has nonpositive length {length}")
            }
            Violation::NonfiniteLength { edge } => {
                write!(f, "edge {edge:?} has non-finite length")
            }
            Violation::IsolatedVertex { vertex } => write!(f, "vertex {vertex:?} has degree 0"),
            Violation::Disconnected { unreachable } => {
                write!(f, "disconnected: unreachable vertices {unreachable:?}")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("invalid graph: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("offset {offset} outside edge {edge:?} of length {length}")]
    OffsetOutOfRange {
        edge: String,
        offset: f64,
        length: f64,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Checks every [`MetricGraph`] invariant. An empty list means the description
/// is valid.
pub fn validate(spec: &GraphSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    if spec.vertices.is_empty() {
        out.push(Violation::NoVertices);
    }
    if spec.edges.is_empty() {
        out.push(Violation::NoEdges);
    }
    let mut index = BTreeMap::new();
    for v in &spec.vertices {
        if index.insert(v.as_str(), index.len()).is_some() {
            out.push(Violation::DuplicateVertex(v.clone()));
        }
    }
    let mut seen_edges = BTreeSet::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); index.len()];
    for e in &spec.edges {
        if !seen_edges.insert(e.id.as_str()) {
            out.push(Violation::DuplicateEdge(e.id.clone()));
        }
        if !e.length.is_finite() {
            out.push(Violation::NonfiniteLength { edge: e.id.clone() });
        } else if e.length <= 0.0 {
            out.push(Violation::NonpositiveLength {
                edge: e.id.clone(),
                length: e.length,
            });
        }
        let ends: Vec<Option<usize>> = [&e.from, &e.to]
            .iter()
            .map(|v| {
                let idx = index.get(v.as_str()).copied();
                if idx.is_none() {
                    out.push(Violation::UnknownEndpoint {
                        edge: e.id.clone(),
                        vertex: (*v).clone(),
                    });
                }
                idx
            })
            .collect();
        if e.from == e.to {
            out.push(Violation::Loop { edge: e.id.clone() });
        }
        if let (Some(a), Some(b)) = (ends[0], ends[1]) {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let names: Vec<&str> = {
        let mut n = vec![""; index.len()];
        for (name, &i) in &index {
            n[i] = name;
        }
        n
    };
    for (i, a) in adj.iter().enumerate() {
        if a.is_empty() {
            out.push(Violation::IsolatedVertex {
                vertex: names[i].to_string(),
            });
        }
    }
    if !adj.is_empty() {
        let mut reached = vec![false; adj.len()];
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !reached[w] {
                    reached[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let unreachable: Vec<String> = reached
            .iter()
            .enumerate()
            .filter(|(_, r)| !**r)
            .map(|(i, _)| names[i].to_string())
            .collect();
        if !unreachable.is_empty() {
            out.push(Violation::Disconnected { unreachable });
        }
    }
    out
}

/// A validated, immutable, connected metric graph.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeId>>,
}

impl MetricGraph {
    pub fn new(spec: GraphSpec) -> Result<Self, GraphError> {
        let violations = validate(&spec);
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let mut vertices = spec.vertices;
        vertices.sort();
        let lookup = |name: &str| VertexId(vertices.binary_search_by(|v| v.as_str().cmp(name)).unwrap());
        let mut edges: Vec<Edge> = spec
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id.clone(),
                from: lookup(&e.from),
                to: lookup(&e.to),
                length: e.length,
            })
            .collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let mut incident = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.from.0].push(EdgeId(i));
            incident[e.to.0].push(EdgeId(i));
        }
        Ok(Self {
            vertices,
            edges,
            incident,
        })
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    from: self.vertices[e.from.0].clone(),
                    to: self.vertices[e.to.0].clone(),
                    length: e.length,
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(name))
            .map(VertexId)
            .map_err(|_| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edges
            .binary_search_by(|e| e.id.as_str().cmp(name))
            .map(EdgeId)
            .map_err(|_| GraphError::UnknownEdge(name.to_string()))
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn length(&self, e: EdgeId) -> f64 {
        self.edges[e.0].length
    }

    /// Edges incident to `v`, in edge-id order. Parallel edges appear once each.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v.0].len()
    }

    /// Vertices of degree one.
    pub fn boundary(&self) -> Vec<VertexId> {
        self.vertex_ids().filter(|&v| self.degree(v) == 1).collect()
    }

    /// Sum of all edge lengths.
    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Number of independent cycles, `#E - #V + 1`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.cycle_rank() == 0
    }

    /// Whether `e` lies on a cycle, i.e. its endpoints stay connected after
    /// removing it.
    pub fn on_cycle(&self, e: EdgeId) -> bool {
        let edge = &self.edges[e.0];
        let mut reached = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([edge.from]);
        reached[edge.from.0] = true;
        while let Some(v) = queue.pop_front() {
            for &f in &self.incident[v.0] {
                if f == e {
                    continue;
                }
                let w = self.edges[f.0].other(v);
                if !reached[w.0] {
                    reached[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        reached[edge.to.0]
    }

    /// The same graph with every edge length multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.length *= c;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star3() -> MetricGraph {
        MetricGraph::new(
            GraphSpec::new()
                .vertex("c")
                .vertex("a")
                .vertex("b")
                .vertex("d")
                .edge("e1", "c", "a", 1.0)
                .edge("e2", "c", "b", 1.0)
                .edge("e3", "c", "d", 1.0),
        )
        .unwrap()
    }

    #[test]
    fn star_degrees_and_length() {
        let g = star3();
        let deg = |n: &str| g.degree(g.vertex(n).unwrap());
        assert_eq!((deg("c"), deg("a"), deg("b"), deg("d")), (3, 1, 1, 1));
        assert_eq!(g.total_length(), 3.0);
        assert!(g.is_tree());
        assert_eq!(g.boundary().len(), 3);
    }

    #[test]
    fn validate_reports_disconnected() {
        let spec = GraphSpec::new()
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .vertex("d")
            .edge("e1", "a", "b", 1.0)
            .edge("e2", "c", "d", 1.0);
        let v = validate(&spec);
        assert!(matches!(v.as_slice(), [Violation::Disconnected { unreachable }] if unreachable == &["c", "d"]));
    }

    #[test]
    fn validate_reports_zero_length_and_loop() {
        let spec = GraphSpec::new()
            .vertex("a")
            .vertex("b")
            .edge("e1", "a", "b", 0.0)
            .edge("e2", "a", "a", 1.0);
        let v = validate(&spec);
        assert!(v.contains(&Violation::NonpositiveLength {
            edge: "e1".into(),
            length: 0.0
        }));
        assert!(v.contains(&Violation::Loop { edge: "e2".into() }));
        assert!(validate(&star3().to_spec()).is_empty());
    }

    #[test]
    fn parallel_edges_are_cycles() {
        let g = MetricGraph::new(
            GraphSpec::new()
                .vertex("u")
                .vertex("v")
                .vertex("w")
                .edge("a", "u", "v", 1.0)
                .edge("b", "u", "v", 3.0)
                .edge("c", "v", "w", 1.0),
        )
        .unwrap();
        assert_eq!(g.cycle_rank(), 1);
        assert!(g.on_cycle(EdgeId(0)));
        assert!(g.on_cycle(EdgeId(1)));
        assert!(!g.on_cycle(EdgeId(2)));
    }
}
