//! Spectral estimates for the weighted Laplacian on metric graphs.
//!
//! The crate covers the eigenvalue problem `-λ Δu = V u` on a finite connected
//! metric graph with Kirchhoff matching at vertices and a single Dirichlet
//! point, together with the combinatorial tool behind its uniform bound: the
//! partition of a rooted tree into punctured subtrees controlled by a
//! superadditive set function.
//!
//! * [`graph`]: metric graphs, points, piecewise-constant weights, file format.
//! * [`tree`]: cycle cutting, canonical partitions, the partition algorithm and
//!   the step-function approximation bound.
//! * [`spectral`]: finite-element discretization, the generalized eigensolver
//!   and checkers for the eigenvalue bound, Weyl asymptotics and s-numbers.
//! * [`integral`]: integral operators on graphs and their singular numbers.
//! * [`suite`]: seeded random instance generators and randomized checks.
//! * [`report`]: experiment configuration, dispatch and report files.

pub mod graph;
pub mod linalg;
pub mod spectral;
pub mod tree;
pub mod integral;
pub mod suite;
pub mod report;
