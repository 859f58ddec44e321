use std::collections::BTreeMap;

use thiserror::Error;

use super::{EdgeId, MetricGraph};

#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    #[error("weight given for unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("edge {edge:?}: {reason}")]
    Malformed { edge: String, reason: String },
}

/// A piecewise-constant function on `[0, breaks.last()]`.
///
/// `values[i]` holds on `[breaks[i], breaks[i+1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self, String> {
        if breaks.len() < 2 {
            return Err("need at least two breakpoints".into());
        }
        if values.len() + 1 != breaks.len() {
            return Err(format!(
                "{} breakpoints need {} values, got {}",
                breaks.len(),
                breaks.len() - 1,
                values.len()
            ));
        }
        if breaks[0] != 0.0 {
            return Err("first breakpoint must be 0".into());
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err("breakpoints must be strictly increasing".into());
        }
        if values.iter().chain(&breaks).any(|x| !x.is_finite()) {
            return Err("non-finite breakpoint or value".into());
        }
        Ok(Self { breaks, values })
    }

    pub fn constant(length: f64, value: f64) -> Self {
        Self {
            breaks: vec![0.0, length],
            values: vec![value],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn length(&self) -> f64 {
        *self.breaks.last().unwrap()
    }

    /// Value at `t`, right-continuous; the last piece is closed at the end.
    pub fn value_at(&self, t: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b <= t);
        self.values[i.saturating_sub(1).min(self.values.len() - 1)]
    }

    /// Constant pieces `(lo, hi, value)` intersected with `[a, b]`.
    pub fn pieces_in(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .filter_map(move |(w, &v)| {
                let lo = w[0].max(a);
                let hi = w[1].min(b);
                (hi > lo).then_some((lo, hi, v))
            })
    }

    pub fn integral(&self) -> f64 {
        self.integral_of(|v| v)
    }

    /// `∫ f(V(t)) dt` over the whole edge.
    pub fn integral_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.pieces_in(0.0, self.length())
            .map(|(lo, hi, v)| (hi - lo) * f(v))
            .sum()
    }

    /// `∫_a^b V(t) dt`.
    pub fn integral_over(&self, a: f64, b: f64) -> f64 {
        self.pieces_in(a, b).map(|(lo, hi, v)| (hi - lo) * v).sum()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// The restriction to `[a, b]`, re-based to start at `0`.
    pub fn restrict(&self, a: f64, b: f64) -> Self {
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        for (_, hi, v) in self.pieces_in(a, b) {
            values.push(v);
            breaks.push(hi - a);
        }
        if values.is_empty() {
            return Self::constant(b - a, self.value_at(a));
        }
        *breaks.last_mut().unwrap() = b - a;
        Self { breaks, values }
    }

    /// Stretches the domain by `c`.
    pub fn scale_domain(&self, c: f64) -> Self {
        Self {
            breaks: self.breaks.iter().map(|b| b * c).collect(),
            values: self.values.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// Signed piecewise-constant weight `V` on the edges of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    edges: Vec<PiecewiseConstant>,
}

impl Weight {
    pub fn zero(g: &MetricGraph) -> Self {
        Self::constant(g, 0.0)
    }

    pub fn constant(g: &MetricGraph, v: f64) -> Self {
        Self {
            edges: g
                .edges()
                .iter()
                .map(|e| PiecewiseConstant::constant(e.length, v))
                .collect(),
        }
    }

    /// Builds a weight from per-edge `(breakpoints, values)` keyed by edge id.
    /// Edges not present carry `V ≡ 0`.
    pub fn from_map(
        g: &MetricGraph,
        map: &BTreeMap<String, (Vec<f64>, Vec<f64>)>,
    ) -> Result<Self, WeightError> {
        let mut w = Self::zero(g);
        for (name, (breaks, values)) in map {
            let e = g
                .edge_by_name(name)
                .map_err(|_| WeightError::UnknownEdge(name.clone()))?;
            w.set_edge(g, e, breaks.clone(), values.clone())?;
        }
        Ok(w)
    }

    pub fn set_edge(
        &mut self,
        g: &MetricGraph,
        e: EdgeId,
        breaks: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<(), WeightError> {
        let edge = g.edge(e);
        let malformed = |reason: String| WeightError::Malformed {
            edge: edge.id.clone(),
            reason,
        };
        let pc = PiecewiseConstant::new(breaks, values).map_err(malformed)?;
        if pc.length() != edge.length {
            return Err(malformed(format!(
                "last breakpoint {} differs from edge length {}",
                pc.length(),
                edge.length
            )));
        }
        self.edges[e.0] = pc;
        Ok(())
    }

    /// Builds a weight directly from per-edge pieces, in edge order.
    pub fn from_edges(g: &MetricGraph, edges: Vec<PiecewiseConstant>) -> Result<Self, WeightError> {
        assert_eq!(edges.len(), g.edge_count(), "one piecewise function per edge");
        for (e, pc) in g.edges().iter().zip(&edges) {
            if pc.length() != e.length {
                return Err(WeightError::Malformed {
                    edge: e.id.clone(),
                    reason: format!("domain {} differs from edge length {}", pc.length(), e.length),
                });
            }
        }
        Ok(Self { edges })
    }

    pub fn edge(&self, e: EdgeId) -> &PiecewiseConstant {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[PiecewiseConstant] {
        &self.edges
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Copy) -> Self {
        Self {
            edges: self.edges.iter().map(|p| p.map(f)).collect(),
        }
    }

    /// `V₊ = (|V| + V) / 2`.
    pub fn positive_part(&self) -> Self {
        self.map(|v| v.max(0.0))
    }

    /// `V₋ = (|V| - V) / 2`.
    pub fn negative_part(&self) -> Self {
        self.map(|v| (-v).max(0.0))
    }

    pub fn negated(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(move |v| c * v)
    }

    /// Moves the weight onto the graph with all lengths multiplied by `c`,
    /// keeping its values.
    pub fn transported(&self, c: f64) -> Self {
        Self {
            edges: self.edges.iter().map(|p| p.scale_domain(c)).collect(),
        }
    }

    pub fn integral(&self) -> f64 {
        self.edges.iter().map(|p| p.integral()).sum()
    }

    pub fn integral_of(&self, f: impl Fn(f64) -> f64 + Copy) -> f64 {
        self.edges.iter().map(|p| p.integral_of(f)).sum()
    }

    pub fn integral_abs(&self) -> f64 {
        self.integral_of(f64::abs)
    }

    pub fn integral_pos(&self) -> f64 {
        self.integral_of(|v| v.max(0.0))
    }

    pub fn integral_neg(&self) -> f64 {
        self.integral_of(|v| (-v).max(0.0))
    }

    /// `∫ √V₊` and `∫ √V₋`, the Weyl coefficients times `π`.
    pub fn sqrt_integrals(&self) -> (f64, f64) {
        (
            self.integral_of(|v| v.max(0.0).sqrt()),
            self.integral_of(|v| (-v).max(0.0).sqrt()),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.edges.iter().all(|p| p.values().iter().all(|&v| v >= 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.edges.iter().all(|p| p.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.edges
            .iter()
            .flat_map(|p| p.values().iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples;

    #[test]
    fn parts_split_the_weight() {
        let g = samples::interval(1.0);
        let mut w = Weight::zero(&g);
        w.set_edge(&g, EdgeId(0), vec![0.0, 0.5, 1.0], vec![4.0, -2.0])
            .unwrap();
        assert_eq!(w.integral(), 1.0);
        assert_eq!(w.integral_pos(), 2.0);
        assert_eq!(w.integral_neg(), 1.0);
        assert_eq!(w.integral_abs(), 3.0);
        let (p, m) = w.sqrt_integrals();
        assert_eq!(p, 1.0);
        assert!((m - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        let vp = w.positive_part();
        let vm = w.negative_part();
        for t in [0.1, 0.5, 0.9] {
            let (a, b) = (vp.edge(EdgeId(0)).value_at(t), vm.edge(EdgeId(0)).value_at(t));
            assert_eq!(a - b, w.edge(EdgeId(0)).value_at(t));
            assert_eq!(a * b, 0.0);
        }
    }

    #[test]
    fn malformed_breakpoints_are_rejected() {
        let g = samples::interval(1.0);
        let mut w = Weight::zero(&g);
        assert!(w.set_edge(&g, EdgeId(0), vec![0.0, 0.7, 0.5, 1.0], vec![1.0; 3]).is_err());
        assert!(w.set_edge(&g, EdgeId(0), vec![0.1, 1.0], vec![1.0]).is_err());
        assert!(w.set_edge(&g, EdgeId(0), vec![0.0, 0.9], vec![1.0]).is_err());
        assert!(w.set_edge(&g, EdgeId(0), vec![0.0, 1.0], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn restriction_rebases() {
        let pc = PiecewiseConstant::new(vec![0.0, 0.3, 1.0], vec![2.0, 5.0]).unwrap();
        let r = pc.restrict(0.2, 0.6);
        assert_eq!(r.breakpoints().len(), 3);
        assert!((r.breakpoints()[1] - 0.1).abs() < 1e-15);
        assert_eq!(r.length(), 0.6 - 0.2);
        assert!((r.integral() - (0.1 * 2.0 + 0.3 * 5.0)).abs() < 1e-15);
    }
}
