//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use metric_spectra::graph::{samples, GraphPoint, MetricGraph, PiecewiseConstant, VertexId, Weight};
use metric_spectra::integral::{check_kernel_bound, KernelOptions, KernelSpec};
use metric_spectra::spectral::{
    dirichlet_interval_ratios, exact_interval_spectrum, sharpness_search, snumbers_halfinv, spectrum,
    weyl_check, Boundary, SolveOptions, SpectralError,
};
use metric_spectra::suite::{run_suite, SuiteConfig, SuiteKind, SuiteReport};

const SEED: u64 = 20240611;

struct Line {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn suite(kind: SuiteKind, trials: usize) -> SuiteReport {
    run_suite(&SuiteConfig::new(kind, trials, SEED))
}

fn summary(r: &SuiteReport) -> String {
    format!(
        "{} trials, {} checks, {} violations, {} errors",
        r.trials, r.checks, r.violations, r.errors
    )
}

fn extra(r: &SuiteReport, key: &str, fold: fn(f64, f64) -> f64, init: f64) -> f64 {
    r.outcomes
        .iter()
        .filter_map(|o| o.extra.get(key).copied())
        .fold(init, fold)
}

fn unit_weight(g: &MetricGraph) -> Weight {
    Weight::constant(g, 1.0)
}

fn indefinite_interval(g: &MetricGraph) -> Weight {
    let pc = PiecewiseConstant::new(vec![0.0, 0.5, 1.0], vec![4.0, -1.0]).unwrap();
    Weight::from_edges(g, vec![pc]).unwrap()
}

fn indefinite_star(g: &MetricGraph) -> Weight {
    let pcs = vec![
        PiecewiseConstant::new(vec![0.0, 1.0], vec![1.0]).unwrap(),
        PiecewiseConstant::new(vec![0.0, 0.5, 1.0], vec![2.0, -1.0]).unwrap(),
        PiecewiseConstant::new(vec![0.0, 1.0], vec![-0.5]).unwrap(),
    ];
    Weight::from_edges(g, pcs).unwrap()
}

fn interval_oracle() -> Line {
    let start = Instant::now();
    let g = samples::interval(1.0);
    let s = spectrum(&g, &unit_weight(&g), &[GraphPoint::Vertex(VertexId(1))], 1.0 / 2000.0, SolveOptions { vectors: 0 })
        .expect("interval solve");
    let secs = start.elapsed().as_secs_f64();
    let exact = exact_interval_spectrum(1.0, Boundary::OnePoint, 10);
    let err = s.plus.iter().zip(&exact).map(|(l, e)| (l - e).abs() / e).fold(0.0, f64::max);
    Line {
        id: 1,
        name: "interval oracle",
        ok: s.plus.len() >= 10 && err <= 1e-4 && secs < 30.0,
        detail: format!("max rel err {err:.2e} (tol 1e-4) for n <= 10, {secs:.2} s (limit 30 s)"),
    }
}

fn weyl_case(g: &MetricGraph, w: &Weight, root: GraphPoint) -> Result<f64, SpectralError> {
    let mut h = g.total_length() / 200.0;
    loop {
        match weyl_check(g, w, &root, 25, h, 2) {
            Err(SpectralError::UnderResolved { h: fine, required }) if required < fine => {
                h *= 0.99 * required / fine;
            }
            Err(e) => return Err(e),
            Ok(rep) if rep.monotone_violations() > 0 => return Ok(f64::INFINITY),
            Ok(rep) => return Ok(rep.max_deviation()),
        }
    }
}

fn weyl() -> Line {
    let interval = samples::interval(1.0);
    let star = samples::star(&[1.0, 1.0, 1.0]);
    let leaf = GraphPoint::Vertex(star.vertex("l1").unwrap());
    let cases = [
        ("interval V=1", &interval, unit_weight(&interval), GraphPoint::Vertex(VertexId(0))),
        ("interval V=4|-1", &interval, indefinite_interval(&interval), GraphPoint::Vertex(VertexId(0))),
        ("3-star V=1", &star, unit_weight(&star), leaf),
        ("3-star signed V", &star, indefinite_star(&star), leaf),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, g, w, root) in cases {
        match weyl_case(g, &w, root) {
            Ok(d) => {
                ok &= d <= 0.03;
                parts.push(format!("{label} {d:.4}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{label} error: {e}"));
            }
        }
    }
    Line {
        id: 3,
        name: "Weyl ratios at n = 25",
        ok,
        detail: format!("deviation {} (tol 0.03)", parts.join(", ")),
    }
}

fn sharpness() -> Line {
    let bump = sharpness_search(1.0, 0.01, 1.0 / 1000.0).expect("bump solve");
    let ratios = dirichlet_interval_ratios(1.0, 10, 1.0 / 2000.0).expect("dirichlet solve");
    let target = 4.0 / (PI * PI);
    let dev = ratios.iter().map(|r| (r - target).abs() / target).fold(0.0, f64::max);
    let below = ratios.iter().all(|&r| r <= 1.0);
    Line {
        id: 7,
        name: "sharpness",
        ok: bump.ratio >= 0.95 && below && dev <= 1e-4 && ratios.len() == 10,
        detail: format!(
            "bump ratio {:.6} (>= 0.95); Dirichlet 4n^2 L_n/((b-a) int V) <= 1 for n <= 10, max rel dev from 4/pi^2 {dev:.2e}",
            bump.ratio
        ),
    }
}

fn snumbers() -> Line {
    let r = suite(SuiteKind::Snumbers, 50);
    let g = samples::interval(1.0);
    let s = snumbers_halfinv(&g, &unit_weight(&g), &GraphPoint::Vertex(VertexId(1)), 1.0 / 2000.0, 1e-9)
        .expect("a = 1 solve");
    let err = (1..=10)
        .map(|n| {
            let exact = 2.0 / ((2 * n - 1) as f64 * PI);
            (s.s[n - 1] - exact).abs() / exact
        })
        .fold(0.0, f64::max);
    Line {
        id: 8,
        name: "s-numbers of a(-D)^(-1/2)",
        ok: r.passed() && s.violations == 0 && err <= 1e-4,
        detail: format!("{}; a = 1 interval max rel err {err:.2e} (tol 1e-4) for n <= 10", summary(&r)),
    }
}

/// `Σ n² s_n²` for `min(x, y)` on `[0, 1]`, whose singular values are
/// `1 / ((n - 1/2)² π²)`.
fn min_kernel_series() -> f64 {
    (1..=2_000_000u64)
        .map(|n| {
            let n = n as f64;
            let s = 1.0 / ((n - 0.5).powi(2) * PI * PI);
            n * n * s * s
        })
        .sum()
}

fn kernels() -> Line {
    let opts = KernelOptions { tail_tol: 1e-2, slack: 1e-9 };
    let interval = samples::interval(1.0);
    let star = samples::star(&[1.0, 1.0, 1.0]);
    let i_root = GraphPoint::Vertex(VertexId(0));
    let s_root = GraphPoint::Vertex(star.vertex("l1").unwrap());
    let cases = [
        ("1", false, &interval, i_root, 1.0 / 400.0),
        ("x", true, &interval, i_root, 1.0 / 400.0),
        ("min(x,y)", true, &interval, i_root, 1.0 / 400.0),
        ("sin(pi*x)*cos(pi*y)", false, &interval, i_root, 1.0 / 400.0),
        ("x*exp(-y)", true, &star, s_root, 3.0 / 600.0),
    ];
    let exact = min_kernel_series();
    let mut ok = true;
    let mut parts = Vec::new();
    for (src, vanishing, g, root, h) in cases {
        let spec = KernelSpec::expression(src).unwrap().vanishing(vanishing);
        match check_kernel_bound(&spec, g, &root, h, opts) {
            Ok(r) => {
                ok &= r.passed() && r.refined_bound.is_some() == vanishing;
                if src == "min(x,y)" {
                    let err = (r.series - exact).abs();
                    ok &= err <= 1e-3;
                    parts.push(format!("min(x,y) series {:.6} vs oracle {exact:.6} (tol 1e-3)", r.series));
                }
                parts.push(format!("{src} C {:.4}{}", r.constant, if r.passed() { "" } else { " violated" }));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{src} error: {e}"));
            }
        }
    }
    Line {
        id: 9,
        name: "integral operator s-numbers",
        ok,
        detail: parts.join("; "),
    }
}

fn main() {
    let total = Instant::now();
    let mut lines = vec![interval_oracle()];

    let bounds = suite(SuiteKind::Bounds, 250);
    let cyclic = bounds.outcomes.iter().filter(|o| o.graph == "cyclic").count();
    lines.push(Line {
        id: 2,
        name: "eigenvalue bounds",
        ok: bounds.passed() && cyclic == 50,
        detail: format!("{}; {} trees, {cyclic} cyclic", summary(&bounds), bounds.trials - cyclic),
    });
    lines.push(weyl());

    let r = suite(SuiteKind::Partition, 100);
    lines.push(Line { id: 4, name: "tree partitions", ok: r.passed(), detail: summary(&r) });

    let r = suite(SuiteKind::Approx, 200);
    lines.push(Line { id: 5, name: "approximation bound", ok: r.passed(), detail: summary(&r) });

    // 40 partitions per trial
    let r = suite(SuiteKind::Superadditive, 25);
    let margin = extra(&r, "worst_margin", f64::min, f64::INFINITY);
    lines.push(Line {
        id: 6,
        name: "superadditivity",
        ok: r.passed() && margin >= -1e-12,
        detail: format!("{}; worst margin {margin:.3e} (>= -1e-12)", summary(&r)),
    });

    lines.push(sharpness());
    lines.push(snumbers());
    lines.push(kernels());

    let r = suite(SuiteKind::Cuts, 50);
    let rel = extra(&r, "pullback_rel", f64::max, 0.0);
    lines.push(Line {
        id: 10,
        name: "cycle cutting",
        ok: r.passed() && rel <= 1e-12,
        detail: format!("{}; pullback rel err {rel:.2e} (tol 1e-12)", summary(&r)),
    });

    let lap = extra(&bounds, "laplacian_ratio", f64::min, f64::INFINITY);
    let hom = extra(&bounds, "homogeneity_rel", f64::max, 0.0);
    lines.push(Line {
        id: 11,
        name: "V = 1 bound and homogeneity",
        ok: bounds.passed() && lap >= 1.0 - 1e-9 && hom <= 1e-10,
        detail: format!("min |G|^2 mu_n / n^2 {lap:.6} (>= 1); homogeneity rel err {hom:.2e} (tol 1e-10)"),
    });

    let mut failed = 0;
    for l in &lines {
        println!("{} criterion {:>2} {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.id, l.name, l.detail);
        failed += usize::from(!l.ok);
    }
    println!("{} of {} criteria pass ({:.1} s)", lines.len() - failed, lines.len(), total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
