//! The graph file format.
//!
//! ```json
//! {
//!   "vertices": ["a", "b"],
//!   "edges": [{"id": "e1", "from": "a", "to": "b", "length": 1.0}],
//!   "root": {"vertex": "a"},
//!   "weights": {"e1": {"breakpoints": [0.0, 0.5, 1.0], "values": [4.0, 0.0]}}
//! }
//! ```
//!
//! `root` may also be `{"edge": "e1", "offset": 0.25}`. Missing weights mean
//! `V ≡ 0` on that edge; a missing root means the first declared vertex.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{EdgeSpec, GraphError, GraphPoint, GraphSpec, MetricGraph, Weight, WeightError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<RootRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub weights: BTreeMap<String, WeightRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootRecord {
    Vertex { vertex: String },
    Edge { edge: String, offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightRecord {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

/// A parsed graph file.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInput {
    pub graph: MetricGraph,
    pub weight: Weight,
    pub root: GraphPoint,
}

pub fn parse_graph(text: &str) -> Result<GraphInput, ParseError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    GraphInput::from_file(file)
}

impl GraphInput {
    pub fn from_file(file: GraphFile) -> Result<Self, ParseError> {
        let first = file.vertices.first().cloned();
        let graph = MetricGraph::new(GraphSpec {
            vertices: file.vertices,
            edges: file.edges,
        })?;
        let map = file
            .weights
            .into_iter()
            .map(|(k, w)| (k, (w.breakpoints, w.values)))
            .collect();
        let weight = Weight::from_map(&graph, &map)?;
        let root = match file.root {
            None => GraphPoint::Vertex(graph.vertex(first.as_deref().unwrap_or_default())?),
            Some(RootRecord::Vertex { vertex }) => GraphPoint::Vertex(graph.vertex(&vertex)?),
            Some(RootRecord::Edge { edge, offset }) => {
                let e = graph.edge_by_name(&edge)?;
                GraphPoint::on_edge(&graph, e, offset)?
            }
        };
        Ok(Self {
            graph,
            weight,
            root,
        })
    }

    pub fn to_file(&self) -> GraphFile {
        let spec = self.graph.to_spec();
        let root = Some(match self.root {
            GraphPoint::Vertex(v) => RootRecord::Vertex {
                vertex: self.graph.vertex_name(v).to_string(),
            },
            GraphPoint::Interior { edge, offset } => RootRecord::Edge {
                edge: self.graph.edge(edge).id.clone(),
                offset,
            },
        });
        let weights = self
            .graph
            .edge_ids()
            .filter_map(|e| {
                let pc = self.weight.edge(e);
                let trivial = pc.values().len() == 1 && pc.values()[0] == 0.0;
                (!trivial).then(|| {
                    (
                        self.graph.edge(e).id.clone(),
                        WeightRecord {
                            breakpoints: pc.breakpoints().to_vec(),
                            values: pc.values().to_vec(),
                        },
                    )
                })
            })
            .collect();
        GraphFile {
            vertices: spec.vertices,
            edges: spec.edges,
            root,
            weights,
        }
    }
}

/// Serializes a graph, weight and root in the graph file format.
pub fn emit_graph(input: &GraphInput) -> String {
    serde_json::to_string_pretty(&input.to_file()).expect("graph file serializes")
}

/// Short content hash of the emitted graph file.
pub fn graph_hash(input: &GraphInput) -> String {
    let digest = Sha256::digest(emit_graph(input).as_bytes());
    hex::encode(&digest[..8])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_graph() {
        let text = r#"{"vertices": ["a", "b"], "edges": [{"id": "e1", "from": "a", "to": "b", "length": 1.0}]}"#;
        let input = parse_graph(text).unwrap();
        assert_eq!(input.graph.total_length(), 1.0);
        assert!(input.weight.is_zero());
        assert_eq!(input.root, GraphPoint::Vertex(input.graph.vertex("a").unwrap()));
    }

    #[test]
    fn default_root_is_first_declared_vertex() {
        let text = r#"{"vertices": ["z", "a"], "edges": [{"id": "e1", "from": "a", "to": "z", "length": 2.0}]}"#;
        let input = parse_graph(text).unwrap();
        assert_eq!(input.graph.vertex_name(input.root.as_vertex().unwrap()), "z");
    }

    #[test]
    fn loop_is_rejected() {
        let text = r#"{"vertices": ["a"], "edges": [{"id": "e1", "from": "a", "to": "a", "length": 1.0}]}"#;
        match parse_graph(text) {
            Err(ParseError::Graph(GraphError::Invalid(v))) => {
                assert!(v.contains(&super::super::Violation::Loop { edge: "e1".into() }))
            }
            other => panic!("expected loop rejection, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_position() {
        let text = "{\"vertices\": [\"a\",\n  \"b\"], \"edges\": [oops]}";
        match parse_graph(text) {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn interior_root_and_weights() {
        let text = r#"{
            "vertices": ["a", "b", "c", "d"],
            "edges": [
                {"id": "e1", "from": "c", "to": "a", "length": 1.0},
                {"id": "e2", "from": "c", "to": "b", "length": 1.0},
                {"id": "e3", "from": "c", "to": "d", "length": 1.0}
            ],
            "root": {"edge": "e2", "offset": 0.25},
            "weights": {"e1": {"breakpoints": [0.0, 0.5, 1.0], "values": [4.0, 0.0]}}
        }"#;
        let input = parse_graph(text).unwrap();
        assert_eq!(input.weight.integral(), 2.0);
        assert!(matches!(input.root, GraphPoint::Interior { offset, .. } if offset == 0.25));
        let again = parse_graph(&emit_graph(&input)).unwrap();
        assert_eq!(again, input);
    }
}
