//! Dense and sparse symmetric linear algebra used by the spectral and
//! integral-operator modules.
//!
//! The generalized problem `B u = λ A u` with `A` symmetric positive definite
//! is reduced to a standard symmetric one through an envelope Cholesky
//! factorization of `A`; the standard problem is tridiagonalized by
//! Householder reflections and diagonalized by implicit QL sweeps of Givens
//! rotations. A cyclic Jacobi solver is kept as an independent route for
//! small matrices.

mod envelope;
mod svd;
mod symeig;

pub use envelope::EnvelopeCholesky;
pub use svd::singular_values;
pub use symeig::{jacobi_eigen, Tridiagonalization};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("QL iteration did not converge for eigenvalue {index}")]
    NoConvergence { index: usize },
}

/// Square symmetric sparse matrix with both triangles stored, rows sorted by
/// column.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSparse {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SymSparse {
    pub fn zeros(n: usize) -> Self {
        Self {
            rows: vec![Vec::new(); n],
        }
    }

    /// Builds the matrix from `(i, j, v)` contributions; duplicates are summed.
    /// Each off-diagonal contribution must be given in both orders.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, v) in triplets {
            rows[i].push((j, v));
        }
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some((k, acc)) if *k == j => *acc += v,
                    _ => merged.push((j, v)),
                }
            }
            *row = merged;
        }
        Self { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|p| self.rows[i][p].1)
            .unwrap_or(0.0)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Principal submatrix on the rows and columns in `keep` (in that order).
    pub fn principal(&self, keep: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let rows = keep
            .iter()
            .map(|&old| {
                let mut row: Vec<(usize, f64)> = self.rows[old]
                    .iter()
                    .filter(|&&(j, _)| position[j] != usize::MAX)
                    .map(|&(j, v)| (position[j], v))
                    .collect();
                row.sort_by_key(|&(j, _)| j);
                row
            })
            .collect();
        Self { rows }
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|&(_, v)| v == 0.0))
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        let mut d = DenseMatrix::zeros(n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d.data[i * n + j] = v;
            }
        }
        d
    }
}

/// Dense square matrix in row-major order. Routines that treat it as
/// symmetric read only the lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Symmetric matrix-vector product from the lower triangle.
    pub fn sym_matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let row = self.row(i);
            let mut s = row[i] * x[i];
            for j in 0..i {
                s += row[j] * x[j];
                y[j] += row[j] * x[i];
            }
            y[i] += s;
        }
        y
    }
}

/// Eigenvalues (ascending) of a dense symmetric matrix given by its lower
/// triangle, via Householder tridiagonalization and implicit QL.
pub fn symmetric_eigenvalues(a: DenseMatrix) -> Result<Vec<f64>, LinalgError> {
    Tridiagonalization::new(a).eigenvalues()
}

pub(crate) fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_principal() {
        let m = SymSparse::from_triplets(
            3,
            [(0, 0, 1.0), (0, 0, 1.0), (0, 1, -1.0), (1, 0, -1.0), (2, 2, 5.0)],
        );
        assert_eq!(m.get(0, 0), 2.0);
        assert_eq!(m.asymmetry(), 0.0);
        let p = m.principal(&[2, 0]);
        assert_eq!(p.get(0, 0), 5.0);
        assert_eq!(p.get(1, 1), 2.0);
        assert_eq!(p.get(0, 1), 0.0);
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![1.0, -1.0, 5.0]);
    }
}
