//! The orbit symplectic form in Darboux coordinates, its invariance under the
//! group, and the Poisson bracket of two observables.

use nalgebra::DMatrix;
use toda_quant::orbit::{
    action_on_coordinates, bracket_sign, kk_form_coords, kk_form_matrix, omega_bracket, poisson_bracket,
    push_tangent, tangent_from_algebra, GroupElement, Tangent,
};
use toda_quant::toda::TodaPhasePoint;

fn main() -> toda_quant::Result<()> {
    let s = TodaPhasePoint::new(vec![0.6, 1.1], vec![0.2, 0.5, -0.4])?;
    let l1 = DMatrix::from_row_slice(3, 3, &[0.5, 0.0, 0.0, 1.0, -0.2, 0.0, 0.3, -0.7, -0.3]);
    let l2 = DMatrix::from_row_slice(3, 3, &[-0.1, 0.0, 0.0, 0.4, 0.6, 0.0, 0.9, 0.2, -0.5]);
    println!(
        "omega on algebra elements: matrix {:.12}, coordinates {:.12}",
        kk_form_matrix(&s, &l1, &l2),
        kk_form_coords(&s, &tangent_from_algebra(&s, &l1), &tangent_from_algebra(&s, &l2))
    );

    let g = GroupElement::normalized(DMatrix::from_row_slice(3, 3, &[0.8, 0.0, 0.0, -1.3, 1.4, 0.0, 0.5, 0.6, 0.9]))?;
    let t1 = Tangent { da: vec![0.3, -0.2], dp: vec![1.0, 0.4] };
    let t2 = Tangent { da: vec![-0.5, 0.1], dp: vec![0.2, -0.8] };
    let moved = action_on_coordinates(&g, &s)?;
    println!(
        "pullback: {:.15} vs {:.15}",
        kk_form_coords(&s, &t1, &t2),
        kk_form_coords(&moved, &push_tangent(&g, &t1), &push_tangent(&g, &t2))
    );

    // observables are functions of (a, b)
    let energy = |a: &[f64], b: &[f64]| 2.0 * (b.iter().map(|x| x * x).sum::<f64>() + 2.0 * a.iter().map(|x| x * x).sum::<f64>());
    let cubic = |a: &[f64], b: &[f64]| b.iter().map(|x| x.powi(3)).sum::<f64>() + 3.0 * a[0] * a[0] * (b[0] + b[1]) + 3.0 * a[1] * a[1] * (b[1] + b[2]);
    let moment = |a: &[f64], _: &[f64]| a[0] * a[1];
    println!("calibrated bracket sign {}", bracket_sign(&s));
    println!("{{H, Tr L^3}} = {:.3e}  (conserved)", omega_bracket(&energy, &cubic, &s));
    println!(
        "{{H, a1 a2}}: Adler {:.9}, omega {:.9}",
        bracket_sign(&s) * poisson_bracket(&energy, &moment, &s),
        omega_bracket(&energy, &moment, &s)
    );
    Ok(())
}
