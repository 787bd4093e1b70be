//! Runs the invariant suites for one lattice size and prints them as the
//! canonical JSON that the command-line tool writes.

use toda_quant::report::to_canonical_json;
use toda_quant::verify;

fn main() -> toda_quant::Result<()> {
    let (n, seed) = (4, 7);
    let suites = vec![
        verify::dynamics_suite(n, seed)?,
        verify::orbit_suite(n, seed, 10)?,
        verify::coherent_suite(n, seed)?,
        verify::finrep_suite(n, seed, 50)?,
    ];
    for s in &suites {
        eprintln!("{:<10} {}", s.name, if s.pass { "pass" } else { "FAIL" });
    }
    print!("{}", to_canonical_json(&suites)?);
    Ok(())
}
