//! Singular numbers of integral operators on the unit interval and the bound
//! `Σ n² s_n² ≤ 32 |Γ|² M(K, Γ)`.
//!
//! For the Green kernel `min(x, y)` the exact s-numbers are
//! `4 / ((2n - 1)² π²)`, so the series is known in closed form.

use metric_spectra::graph::{samples, GraphPoint, VertexId};
use metric_spectra::integral::{check_kernel_bound, KernelOptions, KernelSpec};

fn main() {
    let g = samples::interval(1.0);
    let root = GraphPoint::Vertex(VertexId(0));
    let opts = KernelOptions {
        tail_tol: 1e-2,
        ..KernelOptions::default()
    };
    let exact: f64 = (1..200_000)
        .map(|n| {
            let s = 4.0 / ((2 * n - 1) as f64 * std::f64::consts::PI).powi(2);
            (n * n) as f64 * s * s
        })
        .sum();
    for (src, vanishing) in [("1", false), ("x", true), ("min(x, y)", true), ("sin(pi*x)*cos(pi*y)", false)] {
        let k = KernelSpec::expression(src).expect("kernel").vanishing(vanishing);
        let t = std::time::Instant::now();
        let r = check_kernel_bound(&k, &g, &root, 1.0 / 400.0, opts).expect("check");
        println!(
            "{src:<22} N={:<4} series={:.6} (tail {:.1e})  32|Γ|²M={:.4}  8|Γ|²D={}  C={:.4}  {:.2?}",
            r.s.len(),
            r.series,
            r.tail,
            r.bound,
            r.refined_bound.map_or("-".into(), |b| format!("{b:.4}")),
            r.constant,
            t.elapsed()
        );
    }
    println!("min(x, y) exact series {exact:.6}");
}
