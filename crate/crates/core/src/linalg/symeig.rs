use super::{norm2, DenseMatrix, LinalgError};

/// Householder reduction `A = Q T Qᵀ` of a dense symmetric matrix to a
/// symmetric tridiagonal `T`.
///
/// The reflector vectors are kept in the strictly lower part of the working
/// matrix so eigenvectors of `T` can be mapped back to eigenvectors of `A`.
#[derive(Debug, Clone)]
pub struct Tridiagonalization {
    work: DenseMatrix,
    betas: Vec<f64>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonalization {
    pub fn new(mut a: DenseMatrix) -> Self {
        let n = a.n();
        let mut betas = vec![0.0; n.saturating_sub(2)];
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        let mut v = vec![0.0; n];
        let mut p = vec![0.0; n];
        for k in 0..n.saturating_sub(2) {
            let m = n - k - 1;
            for i in 0..m {
                v[i] = a.get(k + 1 + i, k);
            }
            let xnorm = norm2(&v[..m]);
            let tail = norm2(&v[1..m]);
            if tail == 0.0 {
                off[k] = v[0];
                betas[k] = 0.0;
                for i in 0..m {
                    a.set(k + 1 + i, k, 0.0);
                }
                continue;
            }
            // normalized first so that vᵀv ≥ 2 at any scale
            v[..m].iter_mut().for_each(|x| *x /= xnorm);
            let sign = if v[0] > 0.0 { -1.0 } else { 1.0 };
            let alpha = sign * xnorm;
            v[0] -= sign;
            let vv: f64 = v[..m].iter().map(|x| x * x).sum();
            let beta = 2.0 / vv;
            off[k] = alpha;
            betas[k] = beta;

            // p = beta * S v, with S the trailing block (lower triangle)
            p[..m].iter_mut().for_each(|x| *x = 0.0);
            for i in 0..m {
                let row = &a.row(k + 1 + i)[k + 1..k + 2 + i];
                let vi = v[i];
                let mut s = row[i] * vi;
                for j in 0..i {
                    s += row[j] * v[j];
                    p[j] += row[j] * vi;
                }
                p[i] += s;
            }
            let mut pv = 0.0;
            for i in 0..m {
                p[i] *= beta;
                pv += p[i] * v[i];
            }
            let kcoef = 0.5 * beta * pv;
            for i in 0..m {
                p[i] -= kcoef * v[i];
            }
            for i in 0..m {
                let (vi, wi) = (v[i], p[i]);
                let row = &mut a.row_mut(k + 1 + i)[k + 1..k + 2 + i];
                for j in 0..=i {
                    row[j] -= vi * p[j] + wi * v[j];
                }
            }
            for i in 0..m {
                a.set(k + 1 + i, k, v[i]);
            }
        }
        for k in 0..n {
            diag[k] = a.get(k, k);
        }
        if n >= 2 {
            off[n - 2] = a.get(n - 1, n - 2);
        }
        Self {
            work: a,
            betas,
            diag,
            off,
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off
    }

    /// Eigenvalues of `T` (hence of `A`) in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, LinalgError> {
        let mut d = self.diag.clone();
        tridiagonal_ql(&mut d, &self.off)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// Unit eigenvector of `A` for the (already computed) eigenvalue
    /// `lambda`, by inverse iteration on `T` and back-transformation.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let mut y = tridiagonal_inverse_iteration(&self.diag, &self.off, lambda);
        self.apply_q(&mut y);
        y
    }

    /// `y ← Q y`.
    pub fn apply_q(&self, y: &mut [f64]) {
        let n = self.diag.len();
        for k in (0..self.betas.len()).rev() {
            let beta = self.betas[k];
            if beta == 0.0 {
                continue;
            }
            let mut s = 0.0;
            for i in k + 1..n {
                s += self.work.get(i, k) * y[i];
            }
            s *= beta;
            for i in k + 1..n {
                y[i] -= s * self.work.get(i, k);
            }
        }
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `d` is overwritten with the (unsorted) eigenvalues. An off-diagonal entry
/// is deflated once `|e_m| ≤ ε (|d_m| + |d_{m+1}|)` or `|e_m| ≤ ε ‖T‖`; the
/// absolute floor lets blocks at noise level split even with a zero diagonal.
pub(crate) fn tridiagonal_ql(d: &mut [f64], off: &[f64]) -> Result<(), LinalgError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    let floor = f64::EPSILON
        * d.iter()
            .zip(&e)
            .map(|(x, y)| x.abs() + y.abs())
            .fold(0.0, f64::max);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(LinalgError::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Inverse iteration `(T - λ I) x = b` with partial pivoting.
fn tridiagonal_inverse_iteration(d: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = d.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = d
        .iter()
        .map(|x| x.abs())
        .chain(off.iter().map(|x| 2.0 * x.abs()))
        .fold(f64::MIN_POSITIVE, f64::max);
    let tiny = f64::EPSILON * scale;
    // LU of T - λI with row interchanges: U has bands u0 (diag), u1, u2.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut mult = vec![0.0; n];
    let mut swapped = vec![false; n];
    let mut a_diag = d[0] - lambda;
    let mut a_sup = off[0];
    for i in 0..n - 1 {
        let below_sub = off[i];
        let below_diag = d[i + 1] - lambda;
        let below_sup = if i + 2 < n { off[i + 1] } else { 0.0 };
        if a_diag.abs() >= below_sub.abs() {
            let piv = if a_diag == 0.0 { tiny } else { a_diag };
            u0[i] = piv;
            u1[i] = a_sup;
            u2[i] = 0.0;
            let m = below_sub / piv;
            mult[i] = m;
            a_diag = below_diag - m * a_sup;
            a_sup = below_sup;
        } else {
            swapped[i] = true;
            u0[i] = below_sub;
            u1[i] = below_diag;
            u2[i] = below_sup;
            let m = a_diag / below_sub;
            mult[i] = m;
            a_diag = a_sup - m * below_diag;
            a_sup = -m * below_sup;
        }
    }
    u0[n - 1] = if a_diag.abs() < tiny { tiny } else { a_diag };

    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64 * 1e-3).collect();
    for _ in 0..4 {
        // forward elimination on the right-hand side
        let mut b = x.clone();
        for i in 0..n - 1 {
            if swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= mult[i] * b[i];
        }
        // back substitution
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= u1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * b[i + 2];
            }
            let piv = if u0[i] == 0.0 { tiny } else { u0[i] };
            b[i] = s / piv;
        }
        let nb = norm2(&b);
        if !nb.is_finite() || nb == 0.0 {
            break;
        }
        x = b.iter().map(|v| v / nb).collect();
    }
    x
}

/// Cyclic Jacobi eigen-decomposition of a small dense symmetric matrix (full
/// storage). Returns ascending eigenvalues and the matching eigenvectors as
/// columns of a row-major matrix.
pub fn jacobi_eigen(a: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = a.n();
    let mut m = a.clone();
    let mut v = DenseMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 });
    let frob: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.get(i, j).powi(2))
        .sum::<f64>()
        .sqrt();
    for _sweep in 0..100 {
        let offn: f64 = (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt();
        if offn <= 1e-14 * frob.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let (mpk, mqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).total_cmp(&m.get(j, j)));
    let vals = order.iter().map(|&i| m.get(i, i)).collect();
    let vecs = DenseMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigenvalues;

    fn test_matrix(n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            (a + 1.0) / (b + 2.0) + if i == j { (i as f64).cos() } else { 0.0 }
        })
    }

    #[test]
    fn ql_matches_jacobi() {
        for n in [1, 2, 3, 7, 30] {
            let a = test_matrix(n);
            let ql = symmetric_eigenvalues(a.clone()).unwrap();
            let (jac, _) = jacobi_eigen(&a);
            for (x, y) in ql.iter().zip(&jac) {
                assert!((x - y).abs() < 1e-12, "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn known_spectrum_of_path_laplacian() {
        let n = 40;
        let a = DenseMatrix::from_fn(n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let ev = symmetric_eigenvalues(a).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvectors_have_small_residual() {
        let a = test_matrix(25);
        let tri = Tridiagonalization::new(a.clone());
        for lambda in tri.eigenvalues().unwrap() {
            let x = tri.eigenvector(lambda);
            let ax = a.sym_matvec(&x);
            let r: f64 = ax.iter().zip(&x).map(|(p, q)| (p - lambda * q).powi(2)).sum::<f64>().sqrt();
            assert!(r < 1e-10, "residual {r} for {lambda}");
        }
    }

    #[test]
    fn jacobi_vectors_diagonalize() {
        let a = test_matrix(6);
        let (vals, vecs) = jacobi_eigen(&a);
        for (c, &lambda) in vals.iter().enumerate() {
            let x: Vec<f64> = (0..6).map(|r| vecs.get(r, c)).collect();
            let ax = a.sym_matvec(&x);
            for (p, q) in ax.iter().zip(&x) {
                assert!((p - lambda * q).abs() < 1e-12);
            }
        }
    }
}
