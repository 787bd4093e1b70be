//! Box-regularized spectrum of the quantum Toda Hamiltonian: grid
//! convergence for two particles and the two charts for three.

use toda_quant::quantization::{richardson, solve_spectrum, Chart, Region, SpectralProblem};

fn main() -> toda_quant::Result<()> {
    let mut lowest = Vec::new();
    for grid in [500, 1000, 2000] {
        let sp = solve_spectrum(&SpectralProblem::uniform(2, Chart::Q, -12.0, 4.0, grid), 4)?;
        println!("grid {grid:4}: {:?}", sp.eigenvalues);
        lowest.push(sp.eigenvalues[0]);
    }
    let (order, extrapolated) = richardson(lowest[0], lowest[1], lowest[2]);
    println!("observed order {order:.4}, extrapolated ground state {extrapolated:.10}");

    let q = SpectralProblem::uniform(3, Chart::Q, -8.0, 3.0, 60);
    let z = SpectralProblem {
        chart: Chart::Z,
        ..q.clone().with_region(Region::QBoxImage)
    };
    let eq = solve_spectrum(&q, 3)?;
    let ez = solve_spectrum(&z, 3)?;
    println!("n = 3, q chart: {:?} (dimension {})", eq.eigenvalues, eq.dimension);
    println!("n = 3, z chart: {:?} (dimension {})", ez.eigenvalues, ez.dimension);
    Ok(())
}
