//! Partition of a weighted tree into at most `n` punctured subtrees with
//! `Φ̃ ≤ Φ(T) / (n + 1)`, for each superadditive function.

use metric_spectra::graph::{samples, GraphPoint, PiecewiseConstant, Weight};
use metric_spectra::tree::{partition_n, phi_tilde, RootedTree, SuperadditiveFn};

fn main() {
    let g = samples::star(&[1.0, 1.5, 0.75, 2.0]);
    let pieces = g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| PiecewiseConstant::constant(e.length, 0.5 + k as f64))
        .collect();
    let v = Weight::from_edges(&g, pieces).expect("weight");
    let root = GraphPoint::Vertex(g.vertex("l1").unwrap());
    let tree = RootedTree::new(g, root).expect("tree");
    let g = tree.graph();
    for phi in [
        SuperadditiveFn::phi_v(v.clone()).unwrap(),
        SuperadditiveFn::phi_l(v.clone(), 2).unwrap(),
        SuperadditiveFn::measure(),
    ] {
        let total = phi.eval_subtree(&tree.whole());
        for n in [1, 3, 6] {
            let p = partition_n(&tree, &phi, n).expect("partition");
            println!(
                "{:<10} n={n}  pieces={}  max Φ̃ = {:.5}  Φ(T)/(n+1) = {:.5}",
                phi.label(),
                p.achieved(),
                p.certificate(g, &phi),
                total / (n + 1) as f64
            );
        }
        let p = partition_n(&tree, &phi, 3).expect("partition");
        for piece in &p.pieces {
            let frs: Vec<String> = piece
                .subtree
                .fragments()
                .iter()
                .map(|f| format!("{}[{:.3},{:.3}]", g.edge(f.edge).id, f.a, f.b))
                .collect();
            let t = phi_tilde(&phi, g, &piece.subtree, &piece.puncture).unwrap();
            println!("    at {:<12} Φ̃ {t:.5}  {}", piece.puncture.describe(g), frs.join(" "));
        }
    }
}
