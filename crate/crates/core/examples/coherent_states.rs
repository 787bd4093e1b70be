//! Truncated coherent states in the Hermite-in-log basis: the reproducing
//! property, the kernel and the group equivalence.

use toda_quant::coherent::{self, coherent_vector, kernel, BasisSpec};
use toda_quant::quantization::{weighted_inner_product, Section};
use toda_quant::sampling::{self, random_group_element, random_state};

fn main() -> toda_quant::Result<()> {
    let spec = BasisSpec::new(2, 12)?;
    let coeffs: Vec<f64> = (0..spec.dim()).map(|i| 1.0 / (1.0 + i as f64)).collect();
    let s = Section::basis(spec, coeffs);

    for x in [0.3, 1.0, 2.5] {
        let fx = coherent_vector(&spec, &[x])?;
        let pairing = weighted_inner_product(&fx.section(), &s)?;
        println!("x = {x}: <f_x, s> = {:.14}, s(x) = {:.14}, K(x, x) = {:.6}", pairing.re, s.eval(&[x]).re, fx.norm_squared());
    }
    for degree in [2, 4, 8, 16] {
        let k = kernel(&BasisSpec::new(2, degree)?, &[1.5], &[1.5])?;
        println!("N = {degree:2}: K(1.5, 1.5) = {k:.8}");
    }

    let mut rng = sampling::rng(3);
    let spec3 = BasisSpec::new(3, 3)?;
    let s1 = Section::basis(spec3, (0..spec3.dim()).map(|i| (i as f64).cos()).collect());
    let g = random_group_element(3, &mut rng);
    let points: Vec<_> = (0..8).map(|_| random_state(3, &mut rng)).collect();
    println!("group-moved state residual {:.2e}", coherent::group_coherent_check(&g, &points, &s1)?);
    Ok(())
}
