//! Finite-dimensional representations on polynomial sections
//! `s = (a_1 ⋯ a_{n−1}) · P(a)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::quadrature::{CompositeRule, TensorRule};
use crate::orbit::GroupElement;

/// Monomials `(a_1 ⋯ a_{n−1}) a^α` with `|α| ≤ m` (or `|α| = m` when
/// homogeneous), ordered by total degree and then lexicographically with
/// `a_1` most significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinRepSpace {
    pub n: usize,
    pub degree: usize,
    pub homogeneous: bool,
    exponents: Vec<Vec<usize>>,
}

fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, out, prefix);
        prefix.pop();
    }
}

impl FinRepSpace {
    pub fn new(n: usize, degree: usize, homogeneous: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::LatticeTooSmall(n));
        }
        let mut exponents = Vec::new();
        let start = if homogeneous { degree } else { 0 };
        for total in start..=degree {
            compositions(total, n - 1, &mut exponents, &mut Vec::new());
        }
        Ok(Self {
            n,
            degree,
            homogeneous,
            exponents,
        })
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// `α` of each basis monomial.
    pub fn exponents(&self) -> &[Vec<usize>] {
        &self.exponents
    }

    /// Full exponent `1 + α_i` of each variable in basis element `k`.
    pub fn monomial_powers(&self, k: usize) -> Vec<usize> {
        self.exponents[k].iter().map(|e| e + 1).collect()
    }

    pub fn index_of(&self, alpha: &[usize]) -> Option<usize> {
        self.exponents.iter().position(|e| e == alpha)
    }

    pub fn evaluate(&self, k: usize, a: &[f64]) -> f64 {
        self.monomial_powers(k)
            .iter()
            .zip(a)
            .map(|(p, x)| x.powi(*p as i32))
            .product()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub matrix: DMatrix<f64>,
    pub g: GroupElement,
}

impl RepMatrix {
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }
}

/// `ρ(g)`: column `k` holds the basis coefficients of `s_k(g⁻¹·a)`.
///
/// Substituting `a_i ↦ (L_{i+1,i+1}/L_ii) a_i` into a monomial returns a
/// multiple of the same monomial, so the matrix is diagonal with entries
/// `Π_i (L_{i+1,i+1}/L_ii)^{1+α_i}`.
pub fn rep_matrix(g: &GroupElement, space: &FinRepSpace) -> Result<RepMatrix> {
    if g.n() != space.n {
        return Err(Error::DimensionMismatch {
            expected: space.n,
            found: g.n(),
        });
    }
    let r: Vec<f64> = g.a_scaling().iter().map(|x| 1.0 / x).collect();
    let dim = space.dim();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (k, alpha) in space.exponents.iter().enumerate() {
        let coeff: f64 = alpha.iter().zip(&r).map(|(e, ri)| ri.powi(*e as i32 + 1)).product();
        let image = space.index_of(alpha).expect("diagonal substitution keeps the monomial");
        matrix[(image, k)] += coeff;
    }
    Ok(RepMatrix { matrix, g: g.clone() })
}

/// `max |ρ(g₁g₂) − ρ(g₁)ρ(g₂)|` over matrix entries.
pub fn homomorphism_check(g1: &GroupElement, g2: &GroupElement, space: &FinRepSpace) -> Result<f64> {
    Ok(homomorphism_residuals(g1, g2, space)?.0)
}

/// Absolute max-entry residual and the same divided by `max |ρ(g₁g₂)|`.
pub fn homomorphism_residuals(g1: &GroupElement, g2: &GroupElement, space: &FinRepSpace) -> Result<(f64, f64)> {
    let lhs = rep_matrix(&g1.compose(g2), space)?.matrix;
    let rhs = rep_matrix(g1, space)?.matrix * rep_matrix(g2, space)?.matrix;
    let abs = (&lhs - rhs).amax();
    Ok((abs, abs / lhs.amax()))
}

/// `∫ s̄₁ s₂ e^{−Σ a_i²} Π da_i` over `(0, 10]^{n−1}` for coefficient vectors
/// in the monomial basis.
pub fn gaussian_inner_product(space: &FinRepSpace, c1: &[f64], c2: &[f64]) -> f64 {
    let rule = TensorRule::new(CompositeRule::default(), &vec![(0.0, 10.0); space.n - 1]);
    let mut total = 0.0;
    rule.for_each(|a, w| {
        let weight = (-a.iter().map(|x| x * x).sum::<f64>()).exp();
        if weight == 0.0 {
            return;
        }
        let mut u = 0.0;
        let mut v = 0.0;
        for k in 0..space.dim() {
            if c1[k] == 0.0 && c2[k] == 0.0 {
                continue;
            }
            let e = space.evaluate(k, a);
            u += c1[k] * e;
            v += c2[k] * e;
        }
        total += u * v * weight * w;
    });
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct NonUnitarityWitness {
    pub scale: f64,
    /// Diagonal of the witnessing `g`.
    pub diagonal: Vec<f64>,
    pub basis_index: usize,
    /// `‖ρ(g)s‖ / ‖s‖` under the Gaussian inner product.
    pub ratio: f64,
}

/// Searches `g = diag(d, 1/d, 1, …)`, `d ∈ {2, 4}`, for a basis monomial
/// whose Gaussian norm changes by more than 10%.
pub fn nonunitarity_witness(space: &FinRepSpace) -> Result<NonUnitarityWitness> {
    for d in [2.0, 4.0] {
        let mut diagonal = vec![1.0; space.n];
        diagonal[0] = d;
        diagonal[1] = 1.0 / d;
        let g = GroupElement::diagonal(&diagonal)?;
        let rho = rep_matrix(&g, space)?.matrix;
        for k in 0..space.dim() {
            let mut e = vec![0.0; space.dim()];
            e[k] = 1.0;
            let moved: Vec<f64> = rho.column(k).iter().copied().collect();
            let ratio = (gaussian_inner_product(space, &moved, &moved) / gaussian_inner_product(space, &e, &e)).sqrt();
            if (ratio - 1.0).abs() > 0.1 {
                return Ok(NonUnitarityWitness {
                    scale: d,
                    diagonal,
                    basis_index: k,
                    ratio,
                });
            }
        }
    }
    Err(Error::WitnessNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_order_and_dimension() {
        let s = FinRepSpace::new(3, 2, false).unwrap();
        assert_eq!(s.dim(), 6);
        assert_eq!(
            s.exponents(),
            &[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        let h = FinRepSpace::new(3, 2, true).unwrap();
        assert_eq!(h.dim(), 3);
        assert_eq!(FinRepSpace::new(4, 3, false).unwrap().dim(), 20);
    }

    #[test]
    fn identity_and_diagonal_examples() {
        let s = FinRepSpace::new(2, 1, false).unwrap();
        let id = rep_matrix(&GroupElement::identity(2), &s).unwrap();
        assert_eq!(id.matrix, DMatrix::identity(2, 2));
        let d: f64 = 3.0;
        let g = GroupElement::diagonal(&[d, 1.0 / d]).unwrap();
        let rho = rep_matrix(&g, &s).unwrap().matrix;
        assert!((rho[(0, 0)] - d.powi(-2)).abs() < 1e-15);
        assert!((rho[(1, 1)] - d.powi(-4)).abs() < 1e-15);
        assert_eq!(rho[(0, 1)], 0.0);
    }

    #[test]
    fn inverse_pair_gives_identity() {
        let s = FinRepSpace::new(3, 2, false).unwrap();
        let g = GroupElement::normalized(DMatrix::from_row_slice(
            3,
            3,
            &[1.5, 0.0, 0.0, 0.3, 0.8, 0.0, -1.0, 0.2, 1.1],
        ))
        .unwrap();
        let p = rep_matrix(&g, &s).unwrap().matrix * rep_matrix(&g.inverse(), &s).unwrap().matrix;
        assert!((p - DMatrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn witness_for_single_monomial() {
        let s = FinRepSpace::new(2, 0, false).unwrap();
        let w = nonunitarity_witness(&s).unwrap();
        assert_eq!(w.scale, 2.0);
        assert!((w.ratio - 0.25).abs() < 1e-12);
    }
}
