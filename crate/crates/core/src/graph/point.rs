use std::cmp::Ordering;

use super::{EdgeId, GraphError, MetricGraph, VertexId};

/// A location on a metric graph.
///
/// Points at offset `0` or `length` of an edge are always stored as the
/// corresponding vertex, so equality is well defined at vertices shared by
/// several edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphPoint {
    Vertex(VertexId),
    /// Strictly interior point of an edge, `0 < offset < length`, measured
    /// from the edge's `from` endpoint.
    Interior { edge: EdgeId, offset: f64 },
}

impl GraphPoint {
    pub fn on_edge(g: &MetricGraph, edge: EdgeId, offset: f64) -> Result<Self, GraphError> {
        let e = g.edge(edge);
        if !(0.0..=e.length).contains(&offset) {
            return Err(GraphError::OffsetOutOfRange {
                edge: e.id.clone(),
                offset,
                length: e.length,
            });
        }
        Ok(if offset == 0.0 {
            GraphPoint::Vertex(e.from)
        } else if offset == e.length {
            GraphPoint::Vertex(e.to)
        } else {
            GraphPoint::Interior { edge, offset }
        })
    }

    pub fn vertex(v: VertexId) -> Self {
        GraphPoint::Vertex(v)
    }

    pub fn as_vertex(&self) -> Option<VertexId> {
        match *self {
            GraphPoint::Vertex(v) => Some(v),
            GraphPoint::Interior { .. } => None,
        }
    }

    /// Degree of the point; interior points have degree 2.
    pub fn degree(&self, g: &MetricGraph) -> usize {
        match *self {
            GraphPoint::Vertex(v) => g.degree(v),
            GraphPoint::Interior { .. } => 2,
        }
    }

    /// Offset of this point along `edge`, if it lies on that edge. A vertex
    /// returns the offset of the matching endpoint.
    pub fn offset_on(&self, g: &MetricGraph, edge: EdgeId) -> Option<f64> {
        match *self {
            GraphPoint::Interior { edge: e, offset } => (e == edge).then_some(offset),
            GraphPoint::Vertex(v) => {
                let e = g.edge(edge);
                if e.from == v {
                    Some(0.0)
                } else if e.to == v {
                    Some(e.length)
                } else {
                    None
                }
            }
        }
    }

    /// Deterministic ordering: vertices by id first, then interior points by
    /// edge id and offset.
    pub fn cmp_in(&self, other: &Self, g: &MetricGraph) -> Ordering {
        match (self, other) {
            (GraphPoint::Vertex(a), GraphPoint::Vertex(b)) => {
                g.vertex_name(*a).cmp(g.vertex_name(*b))
            }
            (GraphPoint::Vertex(_), GraphPoint::Interior { .. }) => Ordering::Less,
            (GraphPoint::Interior { .. }, GraphPoint::Vertex(_)) => Ordering::Greater,
            (
                GraphPoint::Interior { edge: e1, offset: t1 },
                GraphPoint::Interior { edge: e2, offset: t2 },
            ) => e1.cmp(e2).then(t1.total_cmp(t2)),
        }
    }

    pub fn describe(&self, g: &MetricGraph) -> String {
        match *self {
            GraphPoint::Vertex(v) => g.vertex_name(v).to_string(),
            GraphPoint::Interior { edge, offset } => format!("{}@{}", g.edge(edge).id, offset),
        }
    }
}
