//! Finite-dimensional representation on polynomial sections and a witness
//! that it is not unitary for the Gaussian inner product.

use toda_quant::finrep::{homomorphism_residuals, nonunitarity_witness, rep_matrix, FinRepSpace};
use toda_quant::sampling::{self, random_group_element};

fn main() -> toda_quant::Result<()> {
    let space = FinRepSpace::new(3, 2, false)?;
    println!("basis exponents {:?}", space.exponents());

    let mut rng = sampling::rng(5);
    let g1 = random_group_element(3, &mut rng);
    let g2 = random_group_element(3, &mut rng);
    let rho = rep_matrix(&g1, &space)?;
    println!("rho(g) diagonal {:?}", rho.matrix.diagonal().as_slice());
    println!("det rho(g) = {:.6}", rho.determinant());

    let (abs, rel) = homomorphism_residuals(&g1, &g2, &space)?;
    println!("homomorphism residual {abs:.2e} (relative {rel:.2e})");

    let w = nonunitarity_witness(&space)?;
    println!("g = diag{:?} changes the norm of basis element {} by {:.4}", w.diagonal, w.basis_index, w.ratio);
    Ok(())
}
