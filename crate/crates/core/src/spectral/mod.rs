//! The eigenvalue problem `-λ Δu = V u` with Kirchhoff matching at the
//! vertices and `u = 0` at the root.
//!
//! Continuous piecewise-linear elements with shared vertex nodes are conforming
//! in the form domain, so the Kirchhoff condition is natural and every
//! discrete eigenvalue satisfies `λ_n^h ≤ λ_n` for both signs. Upper bounds
//! checked on any mesh therefore hold for the continuous problem as well.

mod checks;
mod mesh;
mod problem;

pub use checks::{
    bound_check, dirichlet_interval_ratios, exact_interval_spectrum, laplacian_check,
    laplacian_spectrum, sharpness_search, snumbers_halfinv, weyl_check, Boundary, BoundReport,
    BoundRow, LaplacianReport, SharpnessReport, SnumberReport, WeylBranch, WeylReport,
};
pub use mesh::{build_mesh, Element, Mesh};
pub use problem::{assemble, solve_generalized, DiscreteProblem, SolveOptions, Spectrum};

use thiserror::Error;

use crate::graph::{GraphPoint, MetricGraph, Weight};
use crate::linalg::LinalgError;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("mesh step must be positive and finite, got {0}")]
    NonpositiveStep(f64),
    #[error("constrained point {0} is not a mesh node")]
    PointNotOnMesh(String),
    #[error("eigensolver failed: {0}")]
    Linalg(#[from] LinalgError),
    #[error("mesh step {h} is too coarse; at most {required} resolves the requested eigenvalues")]
    UnderResolved { h: f64, required: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Builds, assembles and solves the problem with Dirichlet points `dirichlet`.
pub fn spectrum(
    g: &MetricGraph,
    weight: &Weight,
    dirichlet: &[GraphPoint],
    h: f64,
    opts: SolveOptions,
) -> Result<Spectrum, SpectralError> {
    let mesh = Mesh::build(g, weight, dirichlet, h)?;
    solve_generalized(&assemble(&mesh, weight), opts)
}
