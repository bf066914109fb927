//! The seeded random sign model and its partial-sum scans.
//!
//!     cargo run --example sign_model

use rmflab::randmult::{harmonic_scan, prefix_scan, sample_model};
use rmflab::{PrimeTable, SignModel};

fn main() -> rmflab::Result<()> {
    let table = PrimeTable::new(1_000_000)?;

    let f = SignModel::rademacher(42);
    let values = f.values(30, &table)?;
    println!("f(1..=30) for seed 42: {:?}", &values[1..]);
    assert_eq!(f.f_at(12, &table)?, values[4] * values[3]);

    // Forcing f(p) = +1 for p <= 50 and pinning f(53) = -1.
    let g = sample_model(42, Some(50), &[(53, -1)])?;
    println!("g(47) = {}, g(53) = {}, g(59) = {}", g.sign(47), g.sign(53), g.sign(59));

    for (name, m) in [("f", &f), ("g", &g), ("liouville", &SignModel::constant(-1))] {
        let s = prefix_scan(m, 1_000_000, &table)?;
        let h = harmonic_scan(m, 1_000_000, &table)?;
        println!(
            "{name:>9}: sum f(n) = {:>6}, min prefix {:>6} at {:>7}; harmonic sum {:.6}, min {:.6} at {}",
            s.final_sum, s.min_prefix, s.argmin, h.final_sum, h.min_prefix, h.argmin
        );
    }
    Ok(())
}
