use super::{norm2, DenseMatrix, LinalgError};
use super::symeig::tridiagonal_ql;

/// Singular values of a square matrix in descending order.
///
/// Householder bidiagonalization from both sides, followed by the
/// eigenvalues of the Golub–Kahan tridiagonal (zero diagonal, bidiagonal
/// entries interleaved on the off-diagonal), whose spectrum is `±σ`.
pub fn singular_values(mut a: DenseMatrix) -> Result<Vec<f64>, LinalgError> {
    let n = a.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n {
        // left reflector: zero column k below the diagonal
        let m = n - k;
        for i in 0..m {
            v[i] = a.get(k + i, k);
        }
        if let Some((alpha, beta)) = reflector(&mut v[..m]) {
            diag[k] = alpha;
            w[k + 1..].iter_mut().for_each(|x| *x = 0.0);
            for i in 0..m {
                let vi = v[i];
                let row = a.row(k + i);
                for j in k + 1..n {
                    w[j] += vi * row[j];
                }
            }
            for i in 0..m {
                let s = beta * v[i];
                let row = a.row_mut(k + i);
                for j in k + 1..n {
                    row[j] -= s * w[j];
                }
            }
        } else {
            diag[k] = v[0];
        }
        if k + 1 >= n {
            break;
        }
        // right reflector: zero row k beyond the superdiagonal
        let m = n - k - 1;
        v[..m].copy_from_slice(&a.row(k)[k + 1..]);
        if let Some((alpha, beta)) = reflector(&mut v[..m]) {
            sup[k] = alpha;
            for i in k + 1..n {
                let row = &mut a.row_mut(i)[k + 1..];
                let s: f64 = row.iter().zip(&v[..m]).map(|(x, y)| x * y).sum::<f64>() * beta;
                for (x, y) in row.iter_mut().zip(&v[..m]) {
                    *x -= s * y;
                }
            }
        } else {
            sup[k] = v[0];
        }
    }
    let mut d = vec![0.0; 2 * n];
    let mut off = Vec::with_capacity(2 * n - 1);
    for k in 0..n {
        off.push(diag[k]);
        if k + 1 < n {
            off.push(sup[k]);
        }
    }
    tridiagonal_ql(&mut d, &off)?;
    d.sort_by(|x, y| y.total_cmp(x));
    d.truncate(n);
    Ok(d.into_iter().map(|s| s.max(0.0)).collect())
}

/// Turns `x` into the Householder vector `v` with `(I - β v vᵀ) x = α e₁`.
/// Returns `None` when `x` is already a multiple of `e₁`. `v` is formed from
/// `x / ‖x‖`, so `vᵀv ≥ 2` even when `x` is at underflow scale.
fn reflector(x: &mut [f64]) -> Option<(f64, f64)> {
    let tail = norm2(&x[1..]);
    if tail == 0.0 {
        return None;
    }
    let xnorm = norm2(x);
    x.iter_mut().for_each(|t| *t /= xnorm);
    let sign = if x[0] > 0.0 { -1.0 } else { 1.0 };
    x[0] -= sign;
    let vv: f64 = x.iter().map(|t| t * t).sum();
    Some((sign * xnorm, 2.0 / vv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigenvalues;

    #[test]
    fn matches_gram_eigenvalues() {
        let n = 12;
        let a = DenseMatrix::from_fn(n, |i, j| ((i * 3 + j * 7) % 11) as f64 - 5.0 + 0.1 * i as f64);
        let sv = singular_values(a.clone()).unwrap();
        let gram = DenseMatrix::from_fn(n, |i, j| (0..n).map(|k| a.get(k, i) * a.get(k, j)).sum());
        let mut ev = symmetric_eigenvalues(gram).unwrap();
        ev.reverse();
        for (s, l) in sv.iter().zip(&ev) {
            assert!((s * s - l).abs() < 1e-9 * ev[0], "{s} {l}");
        }
    }

    #[test]
    fn rank_one_and_zero() {
        let n = 5;
        let a = DenseMatrix::from_fn(n, |i, j| (i + 1) as f64 * (j as f64 - 1.0));
        let sv = singular_values(a).unwrap();
        let fx: f64 = (1..=n).map(|i| (i * i) as f64).sum::<f64>().sqrt();
        let gy: f64 = (0..n).map(|j| (j as f64 - 1.0).powi(2)).sum::<f64>().sqrt();
        assert!((sv[0] - fx * gy).abs() < 1e-12 * sv[0]);
        assert!(sv[1..].iter().all(|&s| s < 1e-12 * sv[0]));
        assert_eq!(singular_values(DenseMatrix::zeros(4)).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn transpose_has_same_values() {
        let n = 9;
        let a = DenseMatrix::from_fn(n, |i, j| ((i as f64) - 2.0 * j as f64).exp().min(3.0) + (i * j) as f64 * 0.01);
        let s1 = singular_values(a.clone()).unwrap();
        let s2 = singular_values(a.transpose()).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            assert!((x - y).abs() <= 1e-13 * s1[0]);
        }
    }
}
