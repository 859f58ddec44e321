//! Step-function approximation from a partition of the cut tree:
//! `∫|u - Pu|² V ≤ |Γ| ∫V (n + 1)⁻² ∫|u'|²`.

use metric_spectra::graph::{samples, Weight};
use metric_spectra::tree::{approx_bound_check, random_test_function, ApproxSetup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let g = samples::triangle();
    let v = Weight::constant(&g, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [1, 2, 4, 8] {
        let setup = ApproxSetup::new(&g, &v, n).expect("setup");
        let u = random_test_function(&g, &mut rng);
        let (lhs, rhs) = setup.evaluate(&u);
        println!("n = {n}  pieces {}  ∫|u-Pu|²V = {lhs:.6}  bound {rhs:.6}", setup.partition.achieved());
    }
    let rep = approx_bound_check(&g, &v, 4, 200, 1e-9, &mut rng).expect("check");
    println!("{} functions at n = 4: {} violations, worst ratio {:.4}", rep.trials, rep.violations, rep.worst_ratio);
}
