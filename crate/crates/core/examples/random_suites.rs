//! Every randomized suite at a small trial count. Trials are reproducible
//! from the seed alone.

use metric_spectra::suite::{run_suite, SuiteConfig, SuiteKind};

fn main() {
    let seed = 42;
    for kind in SuiteKind::ALL {
        let t = std::time::Instant::now();
        let r = run_suite(&SuiteConfig::new(kind, 20, seed));
        println!(
            "{kind:<14} trials {:>3}  checks {:>6}  violations {}  errors {}  worst {:.4}  {:.2?}",
            r.trials,
            r.checks,
            r.violations,
            r.errors,
            r.worst,
            t.elapsed()
        );
    }
}
