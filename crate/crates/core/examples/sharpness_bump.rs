//! A unit mass concentrated at the free end nearly attains
//! `λ_1 ≤ |Γ| ∫V`, while a uniform weight stays at `4/π²`.

use metric_spectra::spectral::{dirichlet_interval_ratios, sharpness_search};

fn main() {
    for w in [1.0, 0.5, 0.1, 0.05, 0.01, 0.002] {
        let r = sharpness_search(1.0, w, 1.0 / 400.0).expect("solve");
        println!("width {w:<6} λ_1/(|Γ|∫V) = {:.6}  Rayleigh of 1 - x = {:.6}", r.ratio, r.rayleigh_ratio);
    }
    let d = dirichlet_interval_ratios(1.0, 5, 1.0 / 400.0).expect("solve");
    println!("both ends fixed, V ≡ 1: 4n²Λ_n/((b-a)∫V) = {d:.6?}");
}
