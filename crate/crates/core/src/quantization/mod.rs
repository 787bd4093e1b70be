//! Polarized sections, the Gaussian-normalized inner product, the induced
//! group action, operator quantization and the box-regularized spectrum.

mod section;
mod spectrum;

pub use section::{
    act_on_section, hamiltonian_function, physicist_operators, polarization_field, prequantum_operator,
    symplectic_potential, weighted_inner_product, weighted_inner_product_with, Covector, InnerProduct, PhaseFn,
    PhysicistOperators, PrequantumOperator, Section, SectionFn, WeightedMeasure,
};
pub use spectrum::{
    build_hamiltonian, q_to_z, richardson, solve_spectrum, solve_spectrum_with, z_to_q, Chart, Discretization,
    Region, SpectralProblem, Spectrum,
};
