//! s-numbers of `a (-Δ)^{-1/2}` against `|Γ|^{1/2} ‖a‖₂ / n`.

use metric_spectra::graph::{samples, GraphPoint, PiecewiseConstant, VertexId, Weight};
use metric_spectra::spectral::snumbers_halfinv;

fn main() {
    let g = samples::path(&[1.0, 0.5, 1.5]);
    let a = Weight::from_edges(
        &g,
        vec![
            PiecewiseConstant::constant(1.0, 1.0),
            PiecewiseConstant::new(vec![0.0, 0.25, 0.5], vec![-3.0, 0.5]).unwrap(),
            PiecewiseConstant::constant(1.5, 0.2),
        ],
    )
    .expect("amplitude");
    let r = snumbers_halfinv(&g, &a, &GraphPoint::Vertex(VertexId(0)), 0.005, 1e-9).expect("solve");
    println!("‖a‖₂ = {:.5}  |Γ|^½‖a‖₂ = {:.5}", r.norm_a, r.constant);
    for n in 1..=10 {
        println!("n = {n:>2}  s_n = {:.6}  bound {:.6}", r.s[n - 1], r.constant / n as f64);
    }
    println!("violations {}  worst n s_n / bound {:.4}", r.violations, r.worst_ratio);
}
