//! Integrates the open Toda flow and watches the Lax spectrum stay put.
//!
//! ```text
//! cargo run --release --example isospectral_flow
//! ```

use toda_quant::dynamics::{conservation_report, integrate};
use toda_quant::sampling::{self, random_state};

fn main() -> toda_quant::Result<()> {
    let s = random_state(4, &mut sampling::rng(7));
    println!("start   a = {:?}", s.a());
    println!("        b = {:?}", s.b());

    let tr = integrate(&s.to_canonical(), s.trace_c(), 10.0, 1e-3)?;
    let end = tr.state_at(tr.len() - 1)?;
    println!("t = 10  a = {:?}", end.a());
    println!("        b = {:?}", end.b());

    for k in 1..=s.n() {
        println!("Tr L^{k}: {:.12} -> {:.12}", s.integral_of_motion(k)?, end.integral_of_motion(k)?);
    }
    let report = conservation_report(&tr)?;
    println!("eigenvalue drift {:.2e}, energy drift {:.2e}", report.eigenvalue_drift, report.energy_drift);
    Ok(())
}
