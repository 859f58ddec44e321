//! Rooted metric trees and the partition machinery for superadditive set
//! functions.
//!
//! A [`Subtree`] is a connected set of edge fragments in host coordinates, so
//! pieces produced at any depth of a recursion refer to the same edges and
//! offsets as the tree they came from. A graph with cycles is first reduced
//! to a tree by [`cut_cycles`], which records how tree fragments map back.

mod approx;
mod cut;
mod local;
mod phi;
mod split;
mod superadd;

pub use approx::{
    approx_bound_check, random_test_function, step_projection, ApproxReport, ApproxSetup,
    StepFunction,
};
pub use cut::{cut_cycles, CutReport};
pub use phi::{higher_order_constant, SuperadditiveFn};
pub use split::{
    canonical_partition, partition_n, phi_tilde, split_once, split_subtree, Split, WalkStep,
};
pub use superadd::{
    check_superadditive, random_cut_partition, random_subtree, SuperadditivityReport,
};

use thiserror::Error;

use crate::graph::{distance, EdgeId, GraphError, GraphPoint, MetricGraph};

#[derive(Debug, Error, PartialEq)]
pub enum TreeError {
    #[error("graph is not a tree")]
    NotATree,
    #[error("point {0} is not in the subtree")]
    PointOutside(String),
    #[error("epsilon {epsilon} must lie strictly between 0 and {total}")]
    EpsilonOutOfRange { epsilon: f64, total: f64 },
    #[error("the number of pieces must be positive")]
    ZeroCount,
    #[error("mass functions need a nonnegative weight")]
    NegativeWeight,
    #[error("Hölder exponent {0} must lie strictly between 0 and 1")]
    InvalidExponent(f64),
    #[error("C({0}) overflows")]
    Overflow(u32),
    #[error("invalid fragment set: {0}")]
    InvalidFragments(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The part `[a, b]` of edge `edge`, `0 ≤ a ≤ b ≤ length`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub edge: EdgeId,
    pub a: f64,
    pub b: f64,
}

impl Fragment {
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn full(g: &MetricGraph, edge: EdgeId) -> Self {
        Self {
            edge,
            a: 0.0,
            b: g.length(edge),
        }
    }
}

/// Connected union of edge fragments, at most one per edge, sorted by edge.
/// A one-point subtree has no fragments and measure zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Subtree {
    fragments: Vec<Fragment>,
    point: Option<GraphPoint>,
}

impl Subtree {
    pub fn whole(g: &MetricGraph) -> Self {
        Self {
            fragments: g.edge_ids().map(|e| Fragment::full(g, e)).collect(),
            point: None,
        }
    }

    pub fn point(p: GraphPoint) -> Self {
        Self {
            fragments: Vec::new(),
            point: Some(p),
        }
    }

    /// Builds a subtree from fragments; empty fragments are dropped.
    /// Connectivity is checked by [`Subtree::is_connected`], not here.
    pub fn from_fragments(mut fragments: Vec<Fragment>) -> Result<Self, TreeError> {
        fragments.retain(|f| f.b > f.a);
        if fragments.is_empty() {
            return Err(TreeError::InvalidFragments("no fragment of positive length".into()));
        }
        fragments.sort_by_key(|f| f.edge);
        if fragments.windows(2).any(|w| w[0].edge == w[1].edge) {
            return Err(TreeError::InvalidFragments("two fragments on one edge".into()));
        }
        Ok(Self {
            fragments,
            point: None,
        })
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn is_point(&self) -> bool {
        self.fragments.is_empty()
    }

    /// `|T|`.
    pub fn measure(&self) -> f64 {
        self.fragments.iter().map(Fragment::length).sum()
    }

    pub fn contains(&self, g: &MetricGraph, p: &GraphPoint) -> bool {
        if let Some(q) = self.point {
            return q == *p;
        }
        self.fragments.iter().any(|f| match p.offset_on(g, f.edge) {
            Some(t) => f.a <= t && t <= f.b,
            None => false,
        })
    }

    pub fn is_connected(&self, g: &MetricGraph) -> bool {
        self.is_point() || local::LocalTree::new(g, self).is_ok()
    }

    /// Length of `self ∩ other`.
    pub fn overlap(&self, other: &Subtree) -> f64 {
        let mut total = 0.0;
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.fragments, &other.fragments);
        while i < x.len() && j < y.len() {
            match x[i].edge.cmp(&y[j].edge) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    total += (x[i].b.min(y[j].b) - x[i].a.max(y[j].a)).max(0.0);
                    i += 1;
                    j += 1;
                }
            }
        }
        total
    }
}

/// A subtree with a selected point in it.
#[derive(Debug, Clone, PartialEq)]
pub struct PuncturedSubtree {
    pub subtree: Subtree,
    pub puncture: GraphPoint,
}

/// Splitting of a tree into punctured subtrees.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub pieces: Vec<PuncturedSubtree>,
    /// Requested number of pieces `n`; the achieved count never exceeds it.
    pub target: usize,
}

impl Partition {
    pub fn achieved(&self) -> usize {
        self.pieces.len()
    }

    /// `max_j Φ̃(T_j, x_j)`.
    pub fn certificate(&self, g: &MetricGraph, phi: &SuperadditiveFn) -> f64 {
        self.pieces
            .iter()
            .map(|p| phi_tilde(phi, g, &p.subtree, &p.puncture).expect("puncture lies in its piece"))
            .fold(0.0, f64::max)
    }

    /// `|Σ_j |T_j| - |𝕋||`.
    pub fn coverage_defect(&self, g: &MetricGraph) -> f64 {
        (self.pieces.iter().map(|p| p.subtree.measure()).sum::<f64>() - g.total_length()).abs()
    }

    /// Largest pairwise overlap length.
    pub fn max_overlap(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, p) in self.pieces.iter().enumerate() {
            for q in &self.pieces[i + 1..] {
                worst = worst.max(p.subtree.overlap(&q.subtree));
            }
        }
        worst
    }
}

/// A metric tree with a distinguished root point.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedTree {
    graph: MetricGraph,
    root: GraphPoint,
}

impl RootedTree {
    pub fn new(graph: MetricGraph, root: GraphPoint) -> Result<Self, TreeError> {
        if !graph.is_tree() {
            return Err(TreeError::NotATree);
        }
        Ok(Self { graph, root })
    }

    /// Rooted at the lexicographically smallest leaf.
    pub fn at_first_leaf(graph: MetricGraph) -> Result<Self, TreeError> {
        let leaf = *graph.boundary().first().ok_or(TreeError::NotATree)?;
        Self::new(graph, GraphPoint::Vertex(leaf))
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn root(&self) -> &GraphPoint {
        &self.root
    }

    pub fn whole(&self) -> Subtree {
        Subtree::whole(&self.graph)
    }

    /// `x ⪯ y`, i.e. `x` lies on the path from the root to `y`.
    pub fn precedes(&self, x: &GraphPoint, y: &GraphPoint) -> bool {
        let g = &self.graph;
        let (rx, xy, ry) = (
            distance(g, &self.root, x),
            distance(g, x, y),
            distance(g, &self.root, y),
        );
        (rx + xy - ry).abs() <= 1e-12 * g.total_length()
    }

    /// Whether edge `e` runs away from the root in its stored orientation.
    /// For the edge carrying an interior root both halves point away; this
    /// reports the half from the root to `to`.
    pub fn points_down(&self, e: EdgeId) -> bool {
        let edge = self.graph.edge(e);
        let g = &self.graph;
        distance(g, &self.root, &GraphPoint::Vertex(edge.from))
            < distance(g, &self.root, &GraphPoint::Vertex(edge.to))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{samples, VertexId};

    #[test]
    fn order_and_orientation() {
        let g = samples::path(&[1.0, 2.0]);
        let t = RootedTree::new(g, GraphPoint::Vertex(VertexId(0))).unwrap();
        let mid = GraphPoint::on_edge(t.graph(), EdgeId(1), 1.0).unwrap();
        let end = GraphPoint::Vertex(VertexId(2));
        assert!(t.precedes(&mid, &end));
        assert!(!t.precedes(&end, &mid));
        assert!(t.points_down(EdgeId(0)) && t.points_down(EdgeId(1)));
    }

    #[test]
    fn cycles_are_not_trees() {
        assert_eq!(
            RootedTree::new(samples::triangle(), GraphPoint::Vertex(VertexId(0))).unwrap_err(),
            TreeError::NotATree
        );
    }

    #[test]
    fn overlap_and_containment() {
        let g = samples::interval(1.0);
        let a = Subtree::from_fragments(vec![Fragment { edge: EdgeId(0), a: 0.0, b: 0.6 }]).unwrap();
        let b = Subtree::from_fragments(vec![Fragment { edge: EdgeId(0), a: 0.5, b: 1.0 }]).unwrap();
        assert!((a.overlap(&b) - 0.1).abs() < 1e-15);
        assert!(a.contains(&g, &GraphPoint::Vertex(VertexId(0))));
        assert!(!b.contains(&g, &GraphPoint::Vertex(VertexId(0))));
    }
}
