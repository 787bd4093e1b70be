//! Implicit QL iteration for symmetric tridiagonal matrices.

use nalgebra::DMatrix;

/// Eigen-decomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and sub/super-diagonal `off` (`off.len() == diag.len() − 1`).
///
/// Returns ascending eigenvalues and the matrix whose columns are the
/// corresponding orthonormal eigenvectors.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal length must be n − 1");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(off);
    let mut v = DMatrix::<f64>::identity(n, n);

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || iter >= 200 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 25;
        let (vals, vecs) = tridiagonal_eigen(&vec![2.0; n], &vec![-1.0; n - 1]);
        for (j, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (j + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
        let orth = vecs.transpose() * &vecs;
        assert!((orth - DMatrix::identity(n, n)).amax() < 1e-13);
    }

    #[test]
    fn matches_dense_on_random_tridiagonal() {
        let d = [0.3, -1.2, 2.5, 0.0, 0.7, 1.1];
        let o = [0.5, 1e-3, -2.0, 0.4, 0.9];
        let (vals, vecs) = tridiagonal_eigen(&d, &o);
        let mut t = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d));
        for (i, x) in o.iter().enumerate() {
            t[(i, i + 1)] = *x;
            t[(i + 1, i)] = *x;
        }
        for (j, lam) in vals.iter().enumerate() {
            let col = vecs.column(j);
            assert!((&t * col - col * *lam).amax() < 1e-13);
        }
    }

    #[test]
    fn single_element() {
        let (vals, vecs) = tridiagonal_eigen(&[4.0], &[]);
        assert_eq!(vals, vec![4.0]);
        assert_eq!(vecs[(0, 0)], 1.0);
    }
}
