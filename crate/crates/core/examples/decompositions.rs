//! Exact identities: g = f * 1, the square-free rough decomposition and the
//! Buchstab-type identities.
//!
//!     cargo run --example decompositions

use rmflab::randmult::{elementary_decomposition, rough_decomposition};
use rmflab::smooth::{buchstab_residuals, psi_f};
use rmflab::{PrimeTable, SignModel, SmoothContext};

fn main() -> rmflab::Result<()> {
    let table = PrimeTable::new(100_000)?;
    for seed in 0..3 {
        let f = SignModel::rademacher(seed);
        let d = elementary_decomposition(&f, 100_000, &table)?;
        println!(
            "seed {seed}: harmonic {:.9}, g-sum {} (primes alone {}), fractional part {:.3}, residual {:.1e}",
            d.harmonic, d.g_sum, d.prime_part, d.frac_sum, d.residual
        );
    }

    let ctx = SmoothContext::new(10, &table)?;
    let f = SignModel::rademacher(7).with_forced_prefix(10);
    let (lhs, rhs) = rough_decomposition(&f, 50_000, &ctx)?;
    println!("rough decomposition at (5e4, 10): {lhs} = {rhs}");

    let ctx = SmoothContext::new(50, &table)?;
    let f = SignModel::rademacher(3);
    let r = buchstab_residuals(100_000, &ctx, Some(&f))?;
    println!(
        "Buchstab at (1e5, 50): unsigned relative {:.1e}, signed relative {:.1e}; Psi_f = {}",
        r.unsigned_relative(),
        r.signed_relative(),
        psi_f(100_000, &ctx, &f)
    );
    Ok(())
}
