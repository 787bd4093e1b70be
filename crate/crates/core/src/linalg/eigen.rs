//! Smallest eigenpairs of sparse symmetric matrices.
//!
//! Shift-invert Lanczos with full reorthogonalization: the shift sits below
//! the Gershgorin bound, so `M − σI` is positive definite and admits a banded
//! Cholesky factor. Converged pairs are locked and the search is repeated in
//! their orthogonal complement to pick up eigenvalues a single Krylov space
//! misses (exact multiplicities).

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling;

use super::band::BandCholesky;
use super::sparse::CsrMatrix;
use super::tridiagonal::tridiagonal_eigen;

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Bound on `‖M v − λ v‖ / ‖v‖` for every returned pair.
    pub tol: f64,
    /// Cap on Lanczos steps per run; `None` picks a size-based default.
    pub max_steps: Option<usize>,
    /// Seed of the starting vectors.
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_steps: None,
            seed: 0x70DA,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenPairs {
    /// Ascending.
    pub values: Vec<f64>,
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub lanczos_steps: usize,
    pub shift: f64,
}

pub fn eigen_solve(m: &CsrMatrix, k: usize) -> Result<EigenPairs> {
    eigen_solve_with(m, k, &EigenOptions::default())
}

pub fn eigen_solve_with(m: &CsrMatrix, k: usize, opts: &EigenOptions) -> Result<EigenPairs> {
    let dim = m.dim();
    if k == 0 || k > dim {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= {dim}, got {k}")));
    }
    let scale = (0..dim)
        .flat_map(|i| m.row(i).map(|(_, v)| v.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    if m.max_asymmetry() > 1e-14 * scale {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let lower = m.gershgorin_lower();
    let shift = lower - 0.1 * lower.abs().max(1.0);
    let factor = BandCholesky::factor(m, shift)?;
    let mut rng = sampling::rng(opts.seed);
    let max_steps = opts.max_steps.unwrap_or(50 * k + 500);

    let mut total_steps = 0;
    let mut pairs = lanczos(m, &factor, shift, k, &[], max_steps, opts.tol, &mut rng, &mut total_steps)?;

    // probe the complement of the locked pairs for eigenvalues that were missed
    while pairs.len() < dim {
        let locked: Vec<Vec<f64>> = pairs.iter().map(|p| p.1.clone()).collect();
        let probe = lanczos(m, &factor, shift, 1, &locked, max_steps, opts.tol, &mut rng, &mut total_steps)?;
        let Some(cand) = probe.into_iter().next() else { break };
        let worst = pairs.last().map(|p| p.0).unwrap_or(f64::INFINITY);
        if cand.0 < worst - 1e-10 * worst.abs().max(1.0) {
            pairs.push(cand);
            pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
            pairs.truncate(k);
        } else {
            break;
        }
    }

    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (lam, mut v) in pairs {
        // deterministic sign: largest-magnitude component positive
        let pivot = v.iter().cloned().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        residuals.push(residual(m, lam, &v));
        values.push(lam);
        vectors.push(v);
    }
    Ok(EigenPairs {
        values,
        vectors,
        residuals,
        lanczos_steps: total_steps,
        shift,
    })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(v, q);
            v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
        }
    }
}

fn residual(m: &CsrMatrix, lam: f64, v: &[f64]) -> f64 {
    let mv = m.mul(v);
    let r: f64 = mv.iter().zip(v).map(|(a, b)| (a - lam * b).powi(2)).sum();
    r.sqrt() / norm(v)
}

/// Fresh unit vector orthogonal to `locked` and `basis`, or `None` when the
/// complement is (numerically) exhausted.
fn fresh_vector<R: Rng>(dim: usize, locked: &[Vec<f64>], basis: &[Vec<f64>], rng: &mut R) -> Option<Vec<f64>> {
    for _ in 0..3 {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n0 = norm(&v);
        orthogonalize(&mut v, locked);
        orthogonalize(&mut v, basis);
        let nv = norm(&v);
        if nv > 1e-8 * n0 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

/// Lanczos on `(M − σI)⁻¹` restricted to the complement of `locked`;
/// returns up to `want` smallest eigenpairs of `M` with verified residuals.
#[allow(clippy::too_many_arguments)]
fn lanczos<R: Rng>(
    m: &CsrMatrix,
    factor: &BandCholesky,
    shift: f64,
    want: usize,
    locked: &[Vec<f64>],
    max_steps: usize,
    tol: f64,
    rng: &mut R,
    total_steps: &mut usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let dim = m.dim();
    let available = dim - locked.len();
    if available == 0 {
        return Ok(Vec::new());
    }
    let want = want.min(available);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let Some(mut v) = fresh_vector(dim, locked, &basis, rng) else {
        return Ok(Vec::new());
    };
    let mut worst = f64::INFINITY;
    let mut converged = 0;

    loop {
        basis.push(v.clone());
        *total_steps += 1;
        let mut w = v.clone();
        factor.solve_in_place(&mut w);
        let a = dot(&w, &v);
        alpha.push(a);
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);
        let steps = basis.len();
        let exhausted = steps >= available;

        let check = steps >= want && (steps.is_multiple_of(5) || exhausted || steps >= max_steps || b < 1e-12);
        if check {
            let (theta, s) = tridiagonal_eigen(&alpha, &beta);
            let mut out = Vec::with_capacity(want);
            worst = 0.0;
            converged = 0;
            for j in (0..steps).rev().take(want) {
                let th = theta[j];
                if th <= 0.0 {
                    continue;
                }
                let lam = shift + 1.0 / th;
                let mut y = vec![0.0; dim];
                for (i, q) in basis.iter().enumerate() {
                    let c = s[(i, j)];
                    y.iter_mut().zip(q).for_each(|(yy, qq)| *yy += c * qq);
                }
                let ny = norm(&y);
                y.iter_mut().for_each(|x| *x /= ny);
                let r = residual(m, lam, &y);
                worst = worst.max(r);
                if r < tol {
                    converged += 1;
                }
                out.push((lam, y));
            }
            if converged == want || (exhausted && out.len() == want) {
                if exhausted && worst >= tol {
                    break;
                }
                return Ok(out);
            }
        }
        if exhausted || steps >= max_steps {
            break;
        }
        if b < 1e-12 {
            // invariant subspace reached: restart in the remaining complement
            match fresh_vector(dim, locked, &basis, rng) {
                Some(nv) => {
                    beta.push(0.0);
                    v = nv;
                }
                None => break,
            }
        } else {
            beta.push(b);
            w.iter_mut().for_each(|x| *x /= b);
            v = w;
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: basis.len(),
        converged,
        requested: want,
        worst_residual: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spectrum() {
        let m = CsrMatrix::identity(12);
        let r = eigen_solve(&m, 12).unwrap();
        assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(r.residuals.iter().all(|v| *v < 1e-8));
    }

    #[test]
    fn rejects_bad_k() {
        let m = CsrMatrix::identity(3);
        assert!(eigen_solve(&m, 0).is_err());
        assert!(eigen_solve(&m, 4).is_err());
    }

    #[test]
    fn rejects_asymmetric() {
        let m = CsrMatrix::from_triplets(2, [(0, 0, 1.0), (0, 1, 0.5), (1, 1, 1.0)]);
        assert!(eigen_solve(&m, 1).is_err());
    }

    #[test]
    fn degenerate_pairs_are_found() {
        // 2D Dirichlet Laplacian on a square grid has exact double eigenvalues
        let n = 12;
        let idx = |i: usize, j: usize| i + n * j;
        let mut t = Vec::new();
        for j in 0..n {
            for i in 0..n {
                t.push((idx(i, j), idx(i, j), 4.0));
                if i + 1 < n {
                    t.push((idx(i, j), idx(i + 1, j), -1.0));
                    t.push((idx(i + 1, j), idx(i, j), -1.0));
                }
                if j + 1 < n {
                    t.push((idx(i, j), idx(i, j + 1), -1.0));
                    t.push((idx(i, j + 1), idx(i, j), -1.0));
                }
            }
        }
        let m = CsrMatrix::from_triplets(n * n, t);
        let r = eigen_solve(&m, 4).unwrap();
        let mu = |k: usize| 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / (n + 1) as f64).cos();
        let expected = [mu(1) + mu(1), mu(1) + mu(2), mu(2) + mu(1), mu(2) + mu(2)];
        for (v, e) in r.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-10, "{:?}", r.values);
        }
    }

    #[test]
    fn path_laplacian_closed_form() {
        let n = 200;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        let m = CsrMatrix::from_triplets(n, t);
        let r = eigen_solve(&m, 6).unwrap();
        for (k, v) in r.values.iter().enumerate() {
            let e = 2.0 - 2.0 * (std::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - e).abs() < 1e-10);
        }
        for (k, vec) in r.vectors.iter().enumerate() {
            let y = m.mul(vec);
            let res = y.iter().zip(vec).map(|(a, b)| (a - r.values[k] * b).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-8);
            let norm: f64 = vec.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-10, "vector {k} norm {norm}");
        }
    }

    #[test]
    fn full_spectrum_matches_dense() {
        let n = 9;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 1.0 + (i as f64).sin()));
            for j in 0..i {
                let v = ((i * 7 + j * 3) % 5) as f64 * 0.1 - 0.2;
                t.push((i, j, v));
                t.push((j, i, v));
            }
        }
        let m = CsrMatrix::from_triplets(n, t);
        let r = eigen_solve(&m, n).unwrap();
        let mut dense: Vec<f64> = m.to_dense().symmetric_eigenvalues().iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        for (v, e) in r.values.iter().zip(&dense) {
            assert!((v - e).abs() < 1e-10, "{:?} vs {dense:?}", r.values);
        }
    }
}
