//! Polarized sections, the weighted inner product and the induced group
//! action, which preserves norms.

use nalgebra::DMatrix;
use toda_quant::orbit::GroupElement;
use toda_quant::quantization::{act_on_section, weighted_inner_product, weighted_inner_product_with, Section};
use toda_quant::linalg::quadrature::CompositeRule;

fn main() -> toda_quant::Result<()> {
    let s = Section::gaussian(&[0.3, -0.2], &[0.7, 0.9]);
    let g = GroupElement::normalized(DMatrix::from_row_slice(3, 3, &[1.7, 0.0, 0.0, 0.4, 0.6, 0.0, -1.1, 0.8, 1.0]))?;
    let gs = act_on_section(&g, &s)?;

    let before = weighted_inner_product(&s, &s)?;
    let after = weighted_inner_product(&gs, &gs)?;
    println!("<s, s>   = {:.15}", before.re);
    println!("<gs, gs> = {:.15}", after.re);
    println!("relative defect {:.2e}", (after.re - before.re).abs() / before.re);

    let overlap = weighted_inner_product_with(&s, &gs, CompositeRule::default())?;
    println!("<s, gs> = {:.12} (coarse rule {:.12})", overlap.value.re, overlap.coarse.re);
    Ok(())
}
