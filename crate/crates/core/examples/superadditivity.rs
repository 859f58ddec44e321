//! Superadditivity of `Φ_V`, `Φ_2`, the measure and a Hölder combination on
//! random partitions of random subtrees.

use metric_spectra::graph::{samples, GraphPoint, VertexId, Weight};
use metric_spectra::tree::{check_superadditive, RootedTree, SuperadditiveFn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let g = samples::star(&[1.0, 2.0, 0.5, 1.25]);
    let v = Weight::constant(&g, 0.8);
    let tree = RootedTree::new(g, GraphPoint::Vertex(VertexId(0))).expect("tree");
    let mass = SuperadditiveFn::mass(v.clone()).unwrap();
    let holder = SuperadditiveFn::holder(SuperadditiveFn::measure(), mass, 0.3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for phi in [
        SuperadditiveFn::phi_v(v.clone()).unwrap(),
        SuperadditiveFn::phi_l(v, 2).unwrap(),
        SuperadditiveFn::measure(),
        holder,
    ] {
        let r = check_superadditive(&phi, &tree, 500, &mut rng).expect("check");
        println!(
            "{:<28} worst margin {:+.3e}  violations {}  monotone {}",
            phi.label(),
            r.worst_margin,
            r.violations,
            r.monotone_violations
        );
    }
}
