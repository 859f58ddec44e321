use std::collections::BTreeSet;

use super::local::{Located, LocalTree};
use super::{Fragment, Partition, PuncturedSubtree, RootedTree, Subtree, SuperadditiveFn, TreeError};
use crate::graph::{EdgeId, GraphPoint, MetricGraph};

/// Branches `Θ_j` of `sub` at `x`, each meeting `x` with degree one.
pub fn canonical_partition(
    g: &MetricGraph,
    sub: &Subtree,
    x: &GraphPoint,
) -> Result<Vec<Subtree>, TreeError> {
    let outside = || TreeError::PointOutside(x.describe(g));
    if sub.is_point() {
        return if sub.contains(g, x) { Ok(Vec::new()) } else { Err(outside()) };
    }
    let local = LocalTree::new(g, sub)?;
    match local.locate(g, x).ok_or_else(outside)? {
        Located::Vertex(v) => {
            let hanging = local.hang(v);
            hanging.children[v.0]
                .iter()
                .map(|&(e, c)| Subtree::from_fragments(local.fragments_of(&local.branch(&hanging, e, c))))
                .collect()
        }
        Located::Interior { edge, t } => {
            let le = local.graph.edge(edge);
            let hanging = local.hang(le.from);
            let f = local.origin[edge.0];
            let mut ahead = local.fragments_of(&hanging.below[le.to.0]);
            ahead.push(Fragment { edge: f.edge, a: t, b: f.b });
            let skip: BTreeSet<EdgeId> = hanging.below[le.to.0].iter().copied().chain([edge]).collect();
            let mut behind: Vec<Fragment> = (0..local.origin.len())
                .map(EdgeId)
                .filter(|k| !skip.contains(k))
                .map(|k| local.origin[k.0])
                .collect();
            behind.push(Fragment { edge: f.edge, a: f.a, b: t });
            Ok(vec![Subtree::from_fragments(behind)?, Subtree::from_fragments(ahead)?])
        }
    }
}

/// `Φ̃(T, x) = max_j Φ(Θ_j)` over the canonical partition at `x`.
pub fn phi_tilde(
    phi: &SuperadditiveFn,
    g: &MetricGraph,
    sub: &Subtree,
    x: &GraphPoint,
) -> Result<f64, TreeError> {
    Ok(canonical_partition(g, sub, x)?
        .iter()
        .map(|t| phi.eval_subtree(t))
        .fold(0.0, f64::max))
}

/// One recorded value of `F(x) = Φ(T_x⁺)` along the walk; `s` is the path
/// length from the start vertex. At a vertex the value and then its right
/// limit are recorded at the same `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkStep {
    pub s: f64,
    pub value: f64,
    pub point: GraphPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    /// `(T_x⁺, x)`, with `Φ̃(T_x⁺, x) ≤ ε ≤ Φ(T_x⁺)`.
    pub piece: PuncturedSubtree,
    /// `T_x⁻`, with `Φ(T_x⁻) ≤ Φ(T) - ε`.
    pub rest: Subtree,
    pub start: GraphPoint,
    pub epsilon: f64,
    pub trace: Vec<WalkStep>,
}

/// [`split_subtree`] applied to the whole tree.
pub fn split_once(tree: &RootedTree, phi: &SuperadditiveFn, epsilon: f64) -> Result<Split, TreeError> {
    split_subtree(tree, &tree.whole(), phi, epsilon)
}

/// Splits `sub` into `T ∪ T′` meeting at one point `x`.
///
/// The walk starts at the root if it is a leaf of `sub`, otherwise at the
/// lexicographically smallest leaf, and always follows the branch of largest
/// `Φ` (smaller edge id on ties). It stops at the first vertex whose largest
/// forward branch is at most `ε`, or at the crossing `F(x) = ε` inside an
/// edge, located by bisection to `1e-12` of the edge length from the side
/// where `F ≥ ε`.
pub fn split_subtree(
    tree: &RootedTree,
    sub: &Subtree,
    phi: &SuperadditiveFn,
    epsilon: f64,
) -> Result<Split, TreeError> {
    let g = tree.graph();
    let total = phi.eval_subtree(sub);
    if !(epsilon > 0.0 && epsilon < total) {
        return Err(TreeError::EpsilonOutOfRange { epsilon, total });
    }
    let local = LocalTree::new(g, sub)?;
    let lg = &local.graph;
    let v0 = match local.locate(g, tree.root()) {
        Some(Located::Vertex(v)) if lg.degree(v) == 1 => v,
        _ => lg.boundary()[0],
    };
    let hanging = local.hang(v0);
    let all: Vec<EdgeId> = lg.edge_ids().collect();
    let complement = |keep: &[EdgeId]| -> Vec<Fragment> {
        let keep: BTreeSet<EdgeId> = keep.iter().copied().collect();
        all.iter().filter(|k| !keep.contains(k)).map(|k| local.origin[k.0]).collect()
    };
    let start = local.host_point(g, v0);
    let mut trace = vec![WalkStep {
        s: 0.0,
        value: total,
        point: start,
    }];
    let mut v = v0;
    let mut s = 0.0;
    loop {
        let here = local.host_point(g, v);
        let mut best: Option<(EdgeId, _, f64)> = None;
        for &(e, c) in &hanging.children[v.0] {
            let val = phi.eval(&local.fragments_of(&local.branch(&hanging, e, c)));
            if best.is_none_or(|(_, _, b)| val > b) {
                best = Some((e, c, val));
            }
        }
        let (e, c, right_limit) = best.expect("the walk ends before reaching a leaf");
        trace.push(WalkStep {
            s,
            value: right_limit,
            point: here,
        });
        if right_limit <= epsilon {
            let plus = Subtree::from_fragments(local.fragments_of(&hanging.below[v.0]))?;
            let minus = complement(&hanging.below[v.0]);
            let rest = if minus.is_empty() {
                Subtree::point(here)
            } else {
                Subtree::from_fragments(minus)?
            };
            return Ok(Split {
                piece: PuncturedSubtree {
                    subtree: plus,
                    puncture: here,
                },
                rest,
                start,
                epsilon,
                trace,
            });
        }

        let f = local.origin[e.0];
        let forward = lg.edge(e).from == v;
        let len = f.length();
        let host_t = |u: f64| if forward { f.a + u } else { f.b - u };
        let ahead = |t: f64| {
            if forward {
                Fragment { edge: f.edge, a: t, b: f.b }
            } else {
                Fragment { edge: f.edge, a: f.a, b: t }
            }
        };
        let behind = |t: f64| {
            if forward {
                Fragment { edge: f.edge, a: f.a, b: t }
            } else {
                Fragment { edge: f.edge, a: t, b: f.b }
            }
        };
        let below_c = local.fragments_of(&hanging.below[c.0]);
        let value_at = |t: f64| {
            let mut frs = below_c.clone();
            frs.push(ahead(t));
            phi.eval(&frs)
        };
        let next = phi.eval(&below_c);
        if next >= epsilon {
            for q in [0.25, 0.5, 0.75] {
                let t = host_t(q * len);
                trace.push(WalkStep {
                    s: s + q * len,
                    value: value_at(t),
                    point: GraphPoint::on_edge(g, f.edge, t)?,
                });
            }
            s += len;
            v = c;
            trace.push(WalkStep {
                s,
                value: next,
                point: local.host_point(g, c),
            });
            continue;
        }

        let (mut lo, mut hi) = (0.0, len);
        while hi - lo > 1e-12 * len {
            let mid = 0.5 * (lo + hi);
            if value_at(host_t(mid)) >= epsilon {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = if lo > 0.0 { lo } else { hi };
        let t = host_t(u);
        let x = GraphPoint::on_edge(g, f.edge, t)?;
        trace.push(WalkStep {
            s: s + u,
            value: value_at(t),
            point: x,
        });
        let mut plus = below_c.clone();
        plus.push(ahead(t));
        let mut skip = hanging.below[c.0].clone();
        skip.push(e);
        let mut minus = complement(&skip);
        minus.push(behind(t));
        return Ok(Split {
            piece: PuncturedSubtree {
                subtree: Subtree::from_fragments(plus)?,
                puncture: x,
            },
            rest: Subtree::from_fragments(minus)?,
            start,
            epsilon,
            trace,
        });
    }
}

/// Splits the tree into at most `n` punctured subtrees with
/// `max_j Φ̃(T_j, x_j) ≤ Φ(𝕋) / (n + 1)`.
pub fn partition_n(tree: &RootedTree, phi: &SuperadditiveFn, n: usize) -> Result<Partition, TreeError> {
    if n == 0 {
        return Err(TreeError::ZeroCount);
    }
    let mut pieces = Vec::with_capacity(n);
    partition_rec(tree, tree.whole(), phi, n, &mut pieces)?;
    Ok(Partition { pieces, target: n })
}

fn partition_rec(
    tree: &RootedTree,
    sub: Subtree,
    phi: &SuperadditiveFn,
    n: usize,
    out: &mut Vec<PuncturedSubtree>,
) -> Result<(), TreeError> {
    let total = phi.eval_subtree(&sub);
    if total == 0.0 || sub.is_point() {
        let puncture = if sub.contains(tree.graph(), tree.root()) {
            *tree.root()
        } else if let Some(f) = sub.fragments().first() {
            GraphPoint::on_edge(tree.graph(), f.edge, f.a)?
        } else {
            *tree.root()
        };
        out.push(PuncturedSubtree {
            subtree: sub,
            puncture,
        });
        return Ok(());
    }
    if n == 1 {
        let split = split_subtree(tree, &sub, phi, 0.5 * total)?;
        out.push(PuncturedSubtree {
            subtree: sub,
            puncture: split.piece.puncture,
        });
        return Ok(());
    }
    let split = split_subtree(tree, &sub, phi, total / (n + 1) as f64)?;
    partition_rec(tree, split.rest, phi, n - 1, out)?;
    out.push(split.piece);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{samples, VertexId, Weight};

    fn unit_phi(g: &MetricGraph) -> SuperadditiveFn {
        SuperadditiveFn::phi_v(Weight::constant(g, 1.0)).unwrap()
    }

    #[test]
    fn interval_halves() {
        let g = samples::interval(1.0);
        let phi = unit_phi(&g);
        let x = GraphPoint::on_edge(&g, EdgeId(0), 0.5).unwrap();
        let parts = canonical_partition(&g, &Subtree::whole(&g), &x).unwrap();
        assert_eq!(parts.len(), 2);
        assert!((phi_tilde(&phi, &g, &Subtree::whole(&g), &x).unwrap() - 0.5).abs() < 1e-15);
        let leaf = GraphPoint::Vertex(VertexId(0));
        assert_eq!(canonical_partition(&g, &Subtree::whole(&g), &leaf).unwrap().len(), 1);
    }

    #[test]
    fn interval_split_at_midpoint() {
        let g = samples::interval(1.0);
        let phi = unit_phi(&g);
        let tree = RootedTree::new(g.clone(), GraphPoint::Vertex(VertexId(0))).unwrap();
        let sp = split_once(&tree, &phi, 0.5).unwrap();
        match sp.piece.puncture {
            GraphPoint::Interior { offset, .. } => assert!((offset - 0.5).abs() < 1e-11),
            other => panic!("expected interior cut, got {other:?}"),
        }
        assert!((phi.eval_subtree(&sp.rest) - 0.5).abs() < 1e-11);
    }

    #[test]
    fn star_split_at_center() {
        let g = samples::star(&[1.0, 1.0, 1.0]);
        let phi = SuperadditiveFn::mass(Weight::constant(&g, 1.0)).unwrap();
        let leaf = g.vertex("l1").unwrap();
        let tree = RootedTree::new(g.clone(), GraphPoint::Vertex(leaf)).unwrap();
        let sp = split_once(&tree, &phi, 1.5).unwrap();
        assert_eq!(sp.piece.puncture, GraphPoint::Vertex(g.vertex("c").unwrap()));
        assert_eq!(phi_tilde(&phi, &g, &sp.piece.subtree, &sp.piece.puncture).unwrap(), 1.0);
        assert_eq!(phi.eval_subtree(&sp.piece.subtree), 2.0);
    }

    #[test]
    fn partition_of_star_with_one_piece() {
        let g = samples::star(&[1.0, 1.0, 1.0]);
        let phi = unit_phi(&g);
        let tree = RootedTree::new(g.clone(), GraphPoint::Vertex(g.vertex("l1").unwrap())).unwrap();
        let p = partition_n(&tree, &phi, 1).unwrap();
        assert_eq!(p.achieved(), 1);
        assert_eq!(p.pieces[0].puncture, GraphPoint::Vertex(g.vertex("c").unwrap()));
        assert!((p.certificate(&g, &phi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_mass_gives_trivial_partition() {
        let g = samples::star(&[1.0, 2.0]);
        let phi = SuperadditiveFn::mass(Weight::zero(&g)).unwrap();
        let tree = RootedTree::at_first_leaf(g.clone()).unwrap();
        let p = partition_n(&tree, &phi, 4).unwrap();
        assert_eq!(p.achieved(), 1);
        assert_eq!(p.certificate(&g, &phi), 0.0);
    }
}
