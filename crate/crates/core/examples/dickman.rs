//! Dickman's function ρ(u) and its integral identity.
//!
//!     cargo run --example dickman

use rmflab::smooth::{dickman_identity_residual, dickman_rho, psi};
use rmflab::{DickmanTable, PrimeTable, SmoothContext};

fn main() -> rmflab::Result<()> {
    for u in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 10.0] {
        println!("rho({u:>4}) = {:.12e}   identity residual {:.1e}", dickman_rho(u)?, dickman_identity_residual(u)?);
    }
    println!("1 - ln 2   = {:.12e}", 1.0 - 2f64.ln());

    // Ψ(x, x^{1/u}) / x approaches ρ(u) slowly.
    let table = PrimeTable::new(100_000)?;
    let x = 10_000_000u64;
    for u in [2.0f64, 3.0, 4.0] {
        let y = (x as f64).powf(1.0 / u) as u64;
        let ctx = SmoothContext::new(y, &table)?;
        println!("u = {u}: Psi(1e7, {y})/1e7 = {:.5}, rho = {:.5}", psi(x, &ctx) as f64 / x as f64, dickman_rho(u)?);
    }

    // A coarser range can be tabulated separately.
    let small = DickmanTable::new(6.0)?;
    println!("table step {}, {} grid points, integral of rho over [0, 6] = {:.10}", small.step(), small.grid().len(), small.integral(0.0, 6.0)?);
    Ok(())
}
