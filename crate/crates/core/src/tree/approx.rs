use rand::Rng;
use serde::Serialize;

use super::{cut_cycles, partition_n, CutReport, Fragment, Partition, RootedTree, SuperadditiveFn, TreeError};
use crate::graph::{MetricGraph, PiecewiseLinear, Weight};

/// Continuous piecewise-linear function with vertex values in `[-1, 1]` and
/// up to three interior nodes per edge.
pub fn random_test_function<R: Rng + ?Sized>(g: &MetricGraph, rng: &mut R) -> PiecewiseLinear {
    let vertex_values: Vec<f64> = (0..g.vertex_count()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let interior: Vec<Vec<(f64, f64)>> = g
        .edges()
        .iter()
        .map(|e| {
            let k = rng.random_range(0..=3);
            (0..k)
                .map(|_| (rng.random_range(0.0..e.length), rng.random_range(-1.0..=1.0)))
                .collect()
        })
        .collect();
    PiecewiseLinear::from_nodes(g, &vertex_values, &interior)
}

/// `Pu = Σ_j u(x_j) χ_{T_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    pub pieces: Vec<(Vec<Fragment>, f64)>,
}

impl StepFunction {
    pub fn rank(&self) -> usize {
        self.pieces.len()
    }

    /// `∫ |u - Pu|² V`, exact for piecewise-linear `u`.
    pub fn weighted_sq_error(&self, u: &PiecewiseLinear, weight: &Weight) -> f64 {
        self.pieces
            .iter()
            .flat_map(|(frs, c)| frs.iter().map(move |f| (f, *c)))
            .map(|(f, c)| u.edge(f.edge).weighted_sq_deviation(f.a, f.b, c, weight.edge(f.edge)))
            .sum()
    }
}

pub fn step_projection(p: &Partition, u: &PiecewiseLinear, g: &MetricGraph) -> StepFunction {
    StepFunction {
        pieces: p
            .pieces
            .iter()
            .map(|piece| (piece.subtree.fragments().to_vec(), u.eval(&piece.puncture, g)))
            .collect(),
    }
}

/// The partition of a graph used for step approximation, built on its cut
/// tree with `Φ_V` of the pulled-back weight.
#[derive(Debug, Clone)]
pub struct ApproxSetup {
    pub cut: CutReport,
    pub tree: RootedTree,
    pub weight: Weight,
    pub partition: Partition,
    /// `|Γ| ∫V / (n+1)²`.
    pub factor: f64,
}

impl ApproxSetup {
    pub fn new(g: &MetricGraph, v: &Weight, n: usize) -> Result<Self, TreeError> {
        if !v.is_nonnegative() {
            return Err(TreeError::NegativeWeight);
        }
        let cut = cut_cycles(g)?;
        let tree = RootedTree::at_first_leaf(cut.tree.clone())?;
        let weight = cut.pull_weight(v);
        let phi = SuperadditiveFn::phi_v(weight.clone())?;
        let partition = partition_n(&tree, &phi, n)?;
        let factor = g.total_length() * v.integral() / ((n + 1) * (n + 1)) as f64;
        Ok(Self {
            cut,
            tree,
            weight,
            partition,
            factor,
        })
    }

    /// `(∫ |u - Pu|² V, |Γ| ∫V (n+1)⁻² ‖u'‖²)` for `u` on the source graph.
    pub fn evaluate(&self, u: &PiecewiseLinear) -> (f64, f64) {
        let pulled = self.cut.pull_function(u);
        let step = step_projection(&self.partition, &pulled, self.tree.graph());
        (step.weighted_sq_error(&pulled, &self.weight), self.factor * u.energy())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    pub n: usize,
    pub pieces: usize,
    pub cuts: usize,
    pub trials: usize,
    /// Largest `lhs / rhs` over trials with `rhs > 0`.
    pub worst_ratio: f64,
    pub violations: usize,
}

/// Checks `∫|u - Pu|²V ≤ |Γ| ∫V (n+1)⁻² ‖u'‖²` on random test functions,
/// counting a violation when `lhs > rhs (1 + slack)`.
pub fn approx_bound_check<R: Rng + ?Sized>(
    g: &MetricGraph,
    v: &Weight,
    n: usize,
    trials: usize,
    slack: f64,
    rng: &mut R,
) -> Result<ApproxReport, TreeError> {
    let setup = ApproxSetup::new(g, v, n)?;
    let mut worst = 0.0f64;
    let mut violations = 0;
    for _ in 0..trials {
        let u = random_test_function(g, rng);
        let (lhs, rhs) = setup.evaluate(&u);
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
        if lhs > rhs * (1.0 + slack) {
            violations += 1;
        }
    }
    Ok(ApproxReport {
        n,
        pieces: setup.partition.achieved(),
        cuts: setup.cut.cuts(),
        trials,
        worst_ratio: worst,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples;

    #[test]
    fn linear_function_on_interval() {
        let g = samples::interval(1.0);
        let u = PiecewiseLinear::from_nodes(&g, &[0.0, 1.0], &[vec![]]);
        let setup = ApproxSetup::new(&g, &Weight::constant(&g, 1.0), 1).unwrap();
        let (lhs, rhs) = setup.evaluate(&u);
        assert!((lhs - 1.0 / 12.0).abs() < 1e-12);
        assert!((rhs - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constants_are_reproduced() {
        let g = samples::triangle();
        let u = PiecewiseLinear::from_nodes(&g, &[0.3; 3], &[vec![], vec![], vec![]]);
        let setup = ApproxSetup::new(&g, &Weight::constant(&g, 2.0), 3).unwrap();
        assert_eq!(setup.evaluate(&u).0, 0.0);
    }
}
