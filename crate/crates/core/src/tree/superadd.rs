use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::{Fragment, RootedTree, Subtree, SuperadditiveFn, TreeError};
use crate::graph::{diameter, vertex_distances_from, EdgeId, GraphPoint, MetricGraph};

/// Closed metric ball of random radius in `(0, diam]` around a random point
/// of a tree. Balls in trees are connected with one fragment per edge.
pub fn random_subtree<R: Rng + ?Sized>(g: &MetricGraph, rng: &mut R) -> Result<Subtree, TreeError> {
    if !g.is_tree() {
        return Err(TreeError::NotATree);
    }
    let e = EdgeId(rng.random_range(0..g.edge_count()));
    let center = GraphPoint::on_edge(g, e, rng.random_range(0.0..g.length(e)))?;
    let radius = diameter(g) * (1.0 - rng.random::<f64>());
    let dist = vertex_distances_from(g, &center);
    let fragments = g
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(k, edge)| {
            let l = edge.length;
            let (du, dw) = (dist[edge.from.0], dist[edge.to.0]);
            let (a, b) = match center.offset_on(g, EdgeId(k)) {
                Some(tc) => ((tc - radius).max(0.0), (tc + radius).min(l)),
                None if du <= dw && radius > du => (0.0, (radius - du).min(l)),
                None if dw < du && radius > dw => ((l - (radius - dw)).max(0.0), l),
                None => return None,
            };
            Some(Fragment { edge: EdgeId(k), a, b })
        })
        .collect();
    Subtree::from_fragments(fragments)
}

/// Splits a subtree at one to four random interior points into the closures
/// of the connected components of the complement.
pub fn random_cut_partition<R: Rng + ?Sized>(
    g: &MetricGraph,
    sub: &Subtree,
    rng: &mut R,
) -> Vec<Subtree> {
    let frs = sub.fragments();
    if frs.is_empty() {
        return vec![sub.clone()];
    }
    let mut cuts: Vec<Vec<f64>> = vec![Vec::new(); frs.len()];
    for _ in 0..rng.random_range(1..=4) {
        let i = rng.random_range(0..frs.len());
        let t = rng.random_range(frs[i].a..frs[i].b);
        if t > frs[i].a {
            cuts[i].push(t);
        }
    }
    let mut segments = Vec::new();
    for (f, c) in frs.iter().zip(&mut cuts) {
        c.sort_by(f64::total_cmp);
        c.dedup();
        let mut lo = f.a;
        for &t in c.iter() {
            segments.push(Fragment { edge: f.edge, a: lo, b: t });
            lo = t;
        }
        segments.push(Fragment { edge: f.edge, a: lo, b: f.b });
    }

    let mut parent: Vec<usize> = (0..segments.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut at_vertex: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, s) in segments.iter().enumerate() {
        let edge = g.edge(s.edge);
        for (t, v) in [(s.a, edge.from), (s.b, edge.to)] {
            let at_end = if v == edge.from { t == 0.0 } else { t == edge.length };
            if !at_end {
                continue;
            }
            match at_vertex.get(&v.0) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
                None => {
                    at_vertex.insert(v.0, i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Fragment>> = BTreeMap::new();
    for (i, s) in segments.into_iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(s);
    }
    groups
        .into_values()
        .map(|frs| Subtree::from_fragments(frs).expect("components are disjoint fragment sets"))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SuperadditivityReport {
    pub trials: usize,
    /// Smallest `(Φ(T) - Σ Φ(T_j)) / Φ(T)`.
    pub worst_margin: f64,
    /// Trials with margin below `-1e-12`.
    pub violations: usize,
    /// Pieces with `Φ(T_j) > Φ(T) (1 + 1e-12)`.
    pub monotone_violations: usize,
}

/// Checks `Σ Φ(T_j) ≤ Φ(T)` and `Φ(T_j) ≤ Φ(T)` on random partitions of
/// random subtrees.
pub fn check_superadditive<R: Rng + ?Sized>(
    phi: &SuperadditiveFn,
    tree: &RootedTree,
    trials: usize,
    rng: &mut R,
) -> Result<SuperadditivityReport, TreeError> {
    const TOL: f64 = 1e-12;
    let g = tree.graph();
    let mut report = SuperadditivityReport {
        trials,
        worst_margin: f64::INFINITY,
        violations: 0,
        monotone_violations: 0,
    };
    for _ in 0..trials {
        let sub = random_subtree(g, rng)?;
        let parts = random_cut_partition(g, &sub, rng);
        let whole = phi.eval_subtree(&sub);
        let values: Vec<f64> = parts.iter().map(|p| phi.eval_subtree(p)).collect();
        let sum: f64 = values.iter().sum();
        let margin = if whole > 0.0 { (whole - sum) / whole } else { -sum };
        report.worst_margin = report.worst_margin.min(margin);
        if margin < -TOL {
            report.violations += 1;
        }
        report.monotone_violations += values.iter().filter(|&&v| v > whole * (1.0 + TOL)).count();
    }
    if trials == 0 {
        report.worst_margin = 0.0;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{samples, Weight};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partitions_cover_the_subtree() {
        let g = samples::star(&[1.0, 2.0, 0.5]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let sub = random_subtree(&g, &mut rng).unwrap();
            assert!(sub.is_connected(&g));
            let parts = random_cut_partition(&g, &sub, &mut rng);
            let total: f64 = parts.iter().map(Subtree::measure).sum();
            assert!((total - sub.measure()).abs() < 1e-12);
            assert!(parts.iter().all(|p| p.is_connected(&g)));
        }
    }

    #[test]
    fn measure_is_additive() {
        let g = samples::path(&[1.0, 1.0, 2.0]);
        let tree = RootedTree::at_first_leaf(g.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = check_superadditive(&SuperadditiveFn::measure(), &tree, 100, &mut rng).unwrap();
        assert!(r.worst_margin.abs() < 1e-12);
        assert_eq!(r.violations, 0);
        let phi = SuperadditiveFn::phi_v(Weight::constant(&g, 1.0)).unwrap();
        let r = check_superadditive(&phi, &tree, 100, &mut rng).unwrap();
        assert_eq!((r.violations, r.monotone_violations), (0, 0));
    }
}
