//! Eigenvalues of `-λu″ = u` on `[0, 1]` with `u(1) = 0`, compared with the
//! closed form `4 / ((2n - 1)² π²)`.

use std::time::Instant;

use metric_spectra::graph::{samples, GraphPoint, VertexId, Weight};
use metric_spectra::spectral::{exact_interval_spectrum, spectrum, Boundary, SolveOptions};

fn main() {
    let g = samples::interval(1.0);
    let v = Weight::constant(&g, 1.0);
    let root = GraphPoint::Vertex(VertexId(1));
    let start = Instant::now();
    let s = spectrum(&g, &v, &[root], 1.0 / 2000.0, SolveOptions::default()).expect("solve");
    let elapsed = start.elapsed();
    let exact = exact_interval_spectrum(1.0, Boundary::OnePoint, 10);
    println!("{:>3} {:>14} {:>14} {:>10}", "n", "computed", "exact", "rel.err");
    for (n, (l, e)) in s.plus.iter().zip(&exact).enumerate() {
        println!("{:>3} {:>14.10} {:>14.10} {:>10.2e}", n + 1, l, e, (l - e).abs() / e);
    }
    println!("dof {}  max residual {:.2e}  time {:.2?}", s.dof, s.max_residual(), elapsed);
}
