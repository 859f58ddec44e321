use super::{LinalgError, SymSparse};

/// Cholesky factor `A = L Lᵀ` stored by rows over the envelope of `A`.
///
/// Row `i` keeps columns `first[i]..=i`; fill-in never leaves the row
/// envelope, so graphs numbered with interior nodes first and vertex nodes
/// last factor in near-linear time.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    first: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &SymSparse) -> Result<Self, LinalgError> {
        let n = a.n();
        let first: Vec<usize> = (0..n)
            .map(|i| a.row(i).iter().map(|&(j, _)| j).filter(|&j| j <= i).min().unwrap_or(i))
            .collect();
        let mut rows: Vec<Vec<f64>> = (0..n).map(|i| vec![0.0; i - first[i] + 1]).collect();
        for i in 0..n {
            for &(j, v) in a.row(i) {
                if j <= i {
                    rows[i][j - first[i]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let start = fi.max(fj);
                let (done, rest) = rows.split_at_mut(i);
                let lj = &done[j];
                let li = &mut rest[0];
                let mut s = li[j - fi];
                for k in start..j {
                    s -= li[k - fi] * lj[k - fj];
                }
                li[j - fi] = s / lj[j - fj];
            }
            let li = &mut rows[i];
            let diag: f64 = li[i - fi] - li[..i - fi].iter().map(|x| x * x).sum::<f64>();
            if !(diag > 0.0) {
                return Err(LinalgError::NotPositiveDefinite { row: i, pivot: diag });
            }
            li[i - fi] = diag.sqrt();
        }
        Ok(Self { first, rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of stored entries of `L`.
    pub fn stored(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Solves `L x = b` in place.
    pub fn solve_lower(&self, b: &mut [f64]) {
        self.solve_lower_from(b, 0);
    }

    /// Solves `L x = b` in place when `b[..start]` is known to vanish.
    pub fn solve_lower_from(&self, b: &mut [f64], start: usize) {
        for i in start..self.n() {
            let fi = self.first[i].max(start);
            let row = &self.rows[i][fi - self.first[i]..];
            let mut s = b[i];
            for (k, l) in (fi..i).zip(row) {
                s -= l * b[k];
            }
            b[i] = s / row[i - fi];
        }
    }

    /// Solves `Lᵀ x = b` in place.
    pub fn solve_upper(&self, b: &mut [f64]) {
        for i in (0..self.n()).rev() {
            let fi = self.first[i];
            let row = &self.rows[i];
            b[i] /= row[i - fi];
            let xi = b[i];
            for k in fi..i {
                b[k] -= row[k - fi] * xi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_path(n: usize) -> SymSparse {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SymSparse::from_triplets(n, t)
    }

    #[test]
    fn solves_match_matrix() {
        let a = laplacian_path(6);
        let l = EnvelopeCholesky::factor(&a).unwrap();
        assert_eq!(l.stored(), 6 + 5);
        let x: Vec<f64> = (0..6).map(|i| (i as f64).sin() + 1.0).collect();
        let mut b = a.matvec(&x);
        l.solve_lower(&mut b);
        l.solve_upper(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn wide_row_last() {
        // star: center last, coupled to every other node
        let n = 5;
        let mut t = vec![(4, 4, 4.5)];
        for i in 0..4 {
            t.extend([(i, i, 1.5), (i, 4, -1.0), (4, i, -1.0)]);
        }
        let a = SymSparse::from_triplets(n, t);
        let l = EnvelopeCholesky::factor(&a).unwrap();
        let x = vec![1.0, -2.0, 0.5, 3.0, 1.0];
        let mut b = a.matvec(&x);
        l.solve_lower(&mut b);
        l.solve_upper(&mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn indefinite_is_rejected() {
        let a = SymSparse::from_triplets(2, [(0, 0, 1.0), (1, 1, 1.0), (0, 1, 2.0), (1, 0, 2.0)]);
        assert!(matches!(
            EnvelopeCholesky::factor(&a),
            Err(LinalgError::NotPositiveDefinite { row: 1, .. })
        ));
    }
}
