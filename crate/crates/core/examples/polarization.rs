//! Strictly lower-triangular matrices as a polarization of the orbit, the
//! Hamiltonian fields it generates, and a subalgebra that fails.

use toda_quant::orbit::{algebra_basis, strictly_lower_basis, verify_polarization, verify_polarization_of, LieAlgebraElement};
use toda_quant::quantization::{hamiltonian_function, polarization_field, symplectic_potential};
use toda_quant::sampling::{self, random_state};

fn main() {
    let n = 4;
    let mut rng = sampling::rng(1);
    let states: Vec<_> = (0..10).map(|_| random_state(n, &mut rng)).collect();

    let report = verify_polarization(n, &states);
    println!("strictly lower: {report:#?}");

    let mut bad = strictly_lower_basis(n);
    bad.push(algebra_basis(n).pop().unwrap());
    let control = verify_polarization_of(n, &bad, &states);
    println!("with a diagonal element: isotropic {} (max pairing {:.3e})", control.isotropic, control.max_pairing);

    let s = &states[0];
    let l = LieAlgebraElement::subdiagonal(&[1.0, -0.5, 2.0]);
    let x = polarization_field(&l, s);
    println!("H_l = {:.6}", hamiltonian_function(&l, s));
    println!("X_H: da = {:?}, dp = {:?}", x.da, x.dp);
    println!("theta(X_H) = {}", symplectic_potential(s).apply(&x));
}
