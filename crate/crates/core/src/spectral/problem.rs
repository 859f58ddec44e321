use serde::Serialize;

use super::{Mesh, SpectralError};
use crate::graph::Weight;
use crate::linalg::{dot, norm2, DenseMatrix, EnvelopeCholesky, SymSparse, Tridiagonalization};

/// Stiffness `A` and weighted mass `B` of the form pair `(‖u′‖², ∫|u|²V)`
/// on a mesh, together with the nodes left free by the Dirichlet condition.
#[derive(Debug, Clone)]
pub struct DiscreteProblem {
    stiffness: SymSparse,
    mass: SymSparse,
    free: Vec<usize>,
    dof_a: SymSparse,
    dof_b: SymSparse,
    h: f64,
    max_element: f64,
}

/// Assembles the element integrals, exact for piecewise-constant `V`:
/// stiffness `(1/h)[[1,-1],[-1,1]]`, mass `V h/6 [[2,1],[1,2]]`.
pub fn assemble(mesh: &Mesh, weight: &Weight) -> DiscreteProblem {
    let n = mesh.node_count();
    let mut a = Vec::with_capacity(4 * mesh.element_count());
    let mut b = Vec::with_capacity(4 * mesh.element_count());
    for el in mesh.elements() {
        let h = el.length();
        let k = 1.0 / h;
        a.extend([(el.i, el.i, k), (el.j, el.j, k), (el.i, el.j, -k), (el.j, el.i, -k)]);
        let v = weight.edge(el.edge).value_at(0.5 * (el.t0 + el.t1));
        if v != 0.0 {
            let m = v * h / 6.0;
            b.extend([
                (el.i, el.i, 2.0 * m),
                (el.j, el.j, 2.0 * m),
                (el.i, el.j, m),
                (el.j, el.i, m),
            ]);
        }
    }
    let stiffness = SymSparse::from_triplets(n, a);
    let mass = SymSparse::from_triplets(n, b);
    let constrained = mesh.constrained();
    let free: Vec<usize> = (0..n).filter(|i| constrained.binary_search(i).is_err()).collect();
    DiscreteProblem {
        dof_a: stiffness.principal(&free),
        dof_b: mass.principal(&free),
        stiffness,
        mass,
        free,
        h: mesh.h(),
        max_element: mesh.max_element_length(),
    }
}

impl DiscreteProblem {
    /// Stiffness matrix before the constraint is applied.
    pub fn stiffness_full(&self) -> &SymSparse {
        &self.stiffness
    }

    /// Weighted mass matrix before the constraint is applied.
    pub fn mass_full(&self) -> &SymSparse {
        &self.mass
    }

    pub fn stiffness(&self) -> &SymSparse {
        &self.dof_a
    }

    pub fn mass(&self) -> &SymSparse {
        &self.dof_b
    }

    pub fn free_nodes(&self) -> &[usize] {
        &self.free
    }

    pub fn dof(&self) -> usize {
        self.free.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Leading eigenpairs of each sign whose residual is computed.
    pub vectors: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { vectors: 10 }
    }
}

/// Discrete spectrum of `B u = λ A u`, split by sign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Positive eigenvalues, descending.
    pub plus: Vec<f64>,
    /// Absolute values of the negative eigenvalues, descending.
    pub minus: Vec<f64>,
    pub dof: usize,
    pub h: f64,
    pub max_element: f64,
    /// `‖Bu - λAu‖ / ‖Au‖` for the leading eigenpairs of each sign.
    pub residual_plus: Vec<f64>,
    pub residual_minus: Vec<f64>,
}

impl Spectrum {
    pub fn max_residual(&self) -> f64 {
        self.residual_plus
            .iter()
            .chain(&self.residual_minus)
            .fold(0.0, |m, &r| m.max(r))
    }
}

/// Leading eigenvalues of each sign refined by a Rayleigh quotient.
const REFINED: usize = 40;

/// Reduces `B u = λ A u` to `C y = λ y` with `C = L⁻¹ B L⁻ᵀ`, `A = L Lᵀ`,
/// and diagonalizes `C` densely. Eigenvalues within a relative
/// `1e-13 · dof` of zero are dropped as the kernel of `B`.
pub fn solve_generalized(p: &DiscreteProblem, opts: SolveOptions) -> Result<Spectrum, SpectralError> {
    let n = p.dof();
    let chol = EnvelopeCholesky::factor(&p.dof_a)?;
    let mut c = DenseMatrix::zeros(n);
    if !p.dof_b.is_zero() {
        // rows of Y are L⁻¹ b_k; C = L⁻¹ Yᵀ
        let mut y = DenseMatrix::zeros(n);
        for k in 0..n {
            let row = p.dof_b.row(k);
            if row.iter().all(|&(_, v)| v == 0.0) {
                continue;
            }
            let start = row[0].0;
            let x = y.row_mut(k);
            for &(j, v) in row {
                x[j] = v;
            }
            chol.solve_lower_from(x, start);
        }
        let mut z = y.transpose();
        drop(y);
        for j in 0..n {
            let x = z.row_mut(j);
            let start = x.iter().position(|&v| v != 0.0).unwrap_or(n);
            chol.solve_lower_from(x, start);
        }
        c = z;
    }
    let tri = Tridiagonalization::new(c);
    let eig = tri.eigenvalues()?;
    let scale = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zero = 1e-13 * n as f64 * scale;
    let mut plus: Vec<f64> = eig.iter().rev().copied().filter(|&l| l > zero).collect();
    let mut minus: Vec<f64> = eig.iter().copied().filter(|&l| l < -zero).map(f64::abs).collect();

    let vector = |lambda: f64| {
        let mut u = tri.eigenvector(lambda);
        chol.solve_upper(&mut u);
        u
    };
    // the dense values carry an absolute error of order ε‖C‖; the Rayleigh
    // quotient on the sparse pencil is accurate relative to each eigenvalue
    let window = 16.0 * f64::EPSILON * n as f64 * scale;
    let refine = |branch: &mut Vec<f64>, sign: f64| {
        for l in branch.iter_mut().take(REFINED) {
            let u = vector(sign * *l);
            let q = sign * dot(&u, &p.dof_b.matvec(&u)) / dot(&u, &p.dof_a.matvec(&u));
            if (q - *l).abs() <= window {
                *l = q;
            }
        }
        branch.sort_by(|x, y| y.total_cmp(x));
    };
    refine(&mut plus, 1.0);
    refine(&mut minus, -1.0);

    let residual = |lambda: f64| {
        let u = vector(lambda);
        let au = p.dof_a.matvec(&u);
        let bu = p.dof_b.matvec(&u);
        let r: Vec<f64> = bu.iter().zip(&au).map(|(b, a)| b - lambda * a).collect();
        norm2(&r) / norm2(&au)
    };
    let residual_plus = plus.iter().take(opts.vectors).map(|&l| residual(l)).collect();
    let residual_minus = minus.iter().take(opts.vectors).map(|&l| residual(-l)).collect();
    Ok(Spectrum {
        plus,
        minus,
        dof: n,
        h: p.h,
        max_element: p.max_element,
        residual_plus,
        residual_minus,
    })
}
