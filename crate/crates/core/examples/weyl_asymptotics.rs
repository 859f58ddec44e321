//! Weyl ratios `n √λ_n π / ∫√V±` on a ladder of refined meshes. The ratio
//! tends to `1` for each sign.

use metric_spectra::graph::{samples, GraphPoint, PiecewiseConstant, VertexId, Weight};
use metric_spectra::spectral::weyl_check;

fn main() {
    let g = samples::interval(1.0);
    let v = Weight::from_edges(&g, vec![PiecewiseConstant::new(vec![0.0, 0.5, 1.0], vec![4.0, -1.0]).unwrap()])
        .expect("weight");
    let rep = weyl_check(&g, &v, &GraphPoint::Vertex(VertexId(0)), 25, 0.008, 2).expect("weyl");
    println!("mesh steps {:?}  dof {:?}", rep.steps, rep.dof);
    for (sign, b) in [("+", &rep.plus), ("-", &rep.minus)] {
        let Some(b) = b else { continue };
        println!("branch {sign}: ∫√V = {:.4}", b.integral_sqrt);
        for n in [1, 2, 5, 10, 15, 20, 25] {
            println!("  n = {n:>2}  r_n = {:.5}", b.ratios[n - 1]);
        }
        println!("  |r_25 - 1| = {:.4}  last refinement change {:.1e}", b.deviation, b.last_change);
    }
}
