//! Hermite-in-log orthonormal basis, truncated coherent states and the
//! reproducing kernel.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::{action_on_coordinates, GroupElement};
use crate::quantization::{act_on_section, weighted_inner_product, Section};
use crate::toda::TodaPhasePoint;

/// Orthonormal Hermite function `h_m` on the real line.
pub fn hermite_function(m: usize, x: f64) -> f64 {
    hermite_functions(m + 1, x)[m]
}

/// `[h_0(x), …, h_{count−1}(x)]` by the stable three-term recurrence.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let h0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if count == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * h0);
    for m in 1..count - 1 {
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * x * out[m] - (mf / (mf + 1.0)).sqrt() * out[m - 1];
        out.push(next);
    }
    out
}

/// Tensor Hermite basis in `x_k = log a_k`, `degree` functions per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasisSpec {
    pub n: usize,
    pub degree: usize,
}

impl BasisSpec {
    pub fn new(n: usize, degree: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::LatticeTooSmall(n));
        }
        if degree < 1 {
            return Err(Error::InvalidArgument("truncation degree must be at least 1".into()));
        }
        Ok(Self { n, degree })
    }

    pub fn axes(&self) -> usize {
        self.n - 1
    }

    /// `degree^(n−1)`.
    pub fn dim(&self) -> usize {
        self.degree.pow(self.axes() as u32)
    }

    /// Multi-index of flat index `i`; the first axis varies slowest.
    pub fn multi_index(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                degree: self.degree,
            });
        }
        let mut idx = vec![0; self.axes()];
        let mut rest = i;
        for k in (0..self.axes()).rev() {
            idx[k] = rest % self.degree;
            rest /= self.degree;
        }
        Ok(idx)
    }

    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.axes() {
            return Err(Error::DimensionMismatch {
                expected: self.axes(),
                found: multi.len(),
            });
        }
        let mut i = 0;
        for &m in multi {
            if m >= self.degree {
                return Err(Error::IndexOutOfRange {
                    index: m,
                    degree: self.degree,
                });
            }
            i = i * self.degree + m;
        }
        Ok(i)
    }

    /// Log-coordinate box outside which every basis function is negligible.
    pub fn extent(&self) -> Vec<(f64, f64)> {
        let x = (2.0 * self.degree as f64 + 1.0).sqrt() + 8.0;
        vec![(-x, x); self.axes()]
    }

    /// All basis values `φ_i(a)` in flat order.
    pub fn evaluate_all(&self, a: &[f64]) -> Result<Vec<f64>> {
        check_point(self.n, a)?;
        let per_axis: Vec<Vec<f64>> = a.iter().map(|ak| hermite_functions(self.degree, ak.ln())).collect();
        Ok((0..self.dim())
            .map(|i| {
                let mut rest = i;
                let mut v = 1.0;
                for k in (0..self.axes()).rev() {
                    v *= per_axis[k][rest % self.degree];
                    rest /= self.degree;
                }
                v
            })
            .collect())
    }
}

fn check_point(n: usize, a: &[f64]) -> Result<()> {
    if a.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: a.len(),
        });
    }
    for (index, &value) in a.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveOffDiagonal { index, value });
        }
    }
    Ok(())
}

/// `φ_i(a) = Π_k h_{i_k}(log a_k)`.
pub fn basis_function(spec: &BasisSpec, multi: &[usize], a: &[f64]) -> Result<f64> {
    spec.flat_index(multi)?;
    check_point(spec.n, a)?;
    Ok(multi
        .iter()
        .zip(a)
        .map(|(m, ak)| hermite_function(*m, ak.ln()))
        .product())
}

/// Projection of the coherent state at `x` onto the truncated span.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentVector {
    pub spec: BasisSpec,
    pub base_point: Vec<f64>,
    pub coefficients: Vec<f64>,
}

impl CoherentVector {
    pub fn section(&self) -> Section {
        Section::basis(self.spec, self.coefficients.clone())
    }

    /// `‖f_x‖² = K(x, x)`.
    pub fn norm_squared(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }
}

pub fn coherent_vector(spec: &BasisSpec, x: &[f64]) -> Result<CoherentVector> {
    Ok(CoherentVector {
        spec: *spec,
        base_point: x.to_vec(),
        coefficients: spec.evaluate_all(x)?,
    })
}

/// `K(x, y) = Σ_i φ_i(x) φ_i(y)`.
pub fn kernel(spec: &BasisSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    let fx = spec.evaluate_all(x)?;
    let fy = spec.evaluate_all(y)?;
    Ok(fx.iter().zip(&fy).map(|(u, v)| u * v).sum())
}

/// Kernel Gram matrix `[K(x_j, x_k)]`.
pub fn kernel_gram(spec: &BasisSpec, points: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let values: Vec<Vec<f64>> = points.iter().map(|p| spec.evaluate_all(p)).collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(points.len(), points.len(), |j, k| {
        values[j].iter().zip(&values[k]).map(|(u, v)| u * v).sum()
    }))
}

pub fn min_gram_eigenvalue(gram: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(gram.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproducingReport {
    pub spec: BasisSpec,
    pub points: usize,
    /// `max |⟨f_x, s⟩ − s(x)|` with the pairing computed by quadrature.
    pub max_error: f64,
}

/// Checks `⟨f_x, s⟩ = s(x)` for the section with coefficients `coeffs` at every point.
pub fn reproducing_check(spec: &BasisSpec, coeffs: &[f64], points: &[Vec<f64>]) -> Result<ReproducingReport> {
    if coeffs.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: coeffs.len(),
        });
    }
    let s = Section::basis(*spec, coeffs.to_vec());
    let mut max_error: f64 = 0.0;
    for x in points {
        let fx = coherent_vector(spec, x)?.section();
        let pairing = weighted_inner_product(&fx, &s)?;
        max_error = max_error.max((pairing - s.eval(x)).norm());
    }
    Ok(ReproducingReport {
        spec: *spec,
        points: points.len(),
        max_error,
    })
}

/// Max relative residual of `s₁(g·x)/s(g·x) = (g⁻¹·s₁)(x)/s(x)` over the
/// sample, with `s ≡ 1` and constant one.
///
/// The left side moves the point with the coordinate action; the right side
/// moves the section with [`act_on_section`].
pub fn group_coherent_check(g: &GroupElement, points: &[TodaPhasePoint], s1: &Section) -> Result<f64> {
    let trivial = |_: &[f64]| Complex64::new(1.0, 0.0);
    let moved = act_on_section(&g.inverse(), s1)?;
    let mut worst: f64 = 0.0;
    for x in points {
        let gx = action_on_coordinates(g, x)?;
        for value in [trivial(gx.a()), trivial(x.a())] {
            if value.norm() < 1e-12 {
                return Err(Error::TrivializationVanishes { value: value.norm() });
            }
        }
        let lhs = s1.eval(gx.a()) / trivial(gx.a());
        let rhs = moved.eval(x.a()) / trivial(x.a());
        let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(worst)
}
