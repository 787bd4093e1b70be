//! The lower-triangular group acting on a Toda point: the dense projection
//! `[g L g⁻¹]₊` against the closed form on `(a, b)`.

use nalgebra::DMatrix;
use toda_quant::orbit::{action_on_coordinates, coadjoint_action, orbit_tangent_rank, GroupElement};
use toda_quant::toda::TodaPhasePoint;

fn main() -> toda_quant::Result<()> {
    let s = TodaPhasePoint::new(vec![0.8, 0.5], vec![0.3, -0.1, 0.4])?;
    let g = GroupElement::normalized(DMatrix::from_row_slice(
        3,
        3,
        &[1.2, 0.0, 0.0, 0.7, 0.9, 0.0, -0.4, 1.5, 1.1],
    ))?;

    let dense = coadjoint_action(&g, &s.lax_matrix())?;
    println!("[g L g^-1]_+ =\n{}", dense.matrix());

    let closed = action_on_coordinates(&g, &s)?;
    println!("closed form a = {:?}", closed.a());
    println!("            b = {:?}", closed.b());
    println!("trace before {:.15}, after {:.15}", s.trace_c(), closed.trace_c());

    let back = action_on_coordinates(&g.inverse(), &closed)?;
    println!("g^-1 g s     a = {:?}", back.a());
    println!("orbit tangent rank at s: {}", orbit_tangent_rank(&s));
    Ok(())
}
