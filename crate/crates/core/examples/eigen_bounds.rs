//! Eigenvalue bounds on a star with a sign-changing weight: both branches
//! of the spectrum against `|Γ| ∫V±`, the diameter refinement, and the
//! `V ≡ 1` bound `|Γ|² μ_n ≥ n²`.

use metric_spectra::graph::{samples, GraphPoint, PiecewiseConstant, Weight};
use metric_spectra::spectral::{bound_check, laplacian_check, laplacian_spectrum, spectrum, SolveOptions};

fn main() {
    let g = samples::star(&[1.0, 2.0, 0.5]);
    let pieces = vec![
        PiecewiseConstant::new(vec![0.0, 0.4, 1.0], vec![3.0, -1.0]).unwrap(),
        PiecewiseConstant::new(vec![0.0, 2.0], vec![0.5]).unwrap(),
        PiecewiseConstant::new(vec![0.0, 0.5], vec![-2.0]).unwrap(),
    ];
    let v = Weight::from_edges(&g, pieces).expect("weight");
    let root = GraphPoint::Vertex(g.vertex("l1").unwrap());
    let h = g.total_length() / 400.0;
    let s = spectrum(&g, &v, &[root], h, SolveOptions::default()).expect("solve");
    let r = bound_check(&s, &g, &v, Some(8), 1e-9);
    println!("|Γ| = {}  diam = {}  ∫V+ = {}  ∫V- = {}", r.total_length, r.diameter, r.integral_plus, r.integral_minus);
    println!("{:>4} {:>3} {:>12} {:>12} {:>12} {:>12}", "sign", "n", "λ_n", "n²λ_n", "|Γ|∫V±", "refined");
    for (sign, rows) in [("+", &r.plus), ("-", &r.minus)] {
        for row in rows {
            println!(
                "{sign:>4} {:>3} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                row.n, row.lambda, row.lhs, row.rhs, row.refined_rhs
            );
        }
    }
    println!("violations {}  worst n²λ/(|Γ|∫V) {:.4}", r.violations, r.worst_ratio);

    let mu = laplacian_spectrum(&g, &root, h).expect("laplacian");
    let l = laplacian_check(&mu, g.total_length(), 8, 1e-9);
    println!("min |Γ|² μ_n / n² = {:.4} over n ≤ 8", l.worst_ratio);
}
