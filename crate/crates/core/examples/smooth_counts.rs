//! Smooth-number counts, the saddle point α(x, y) and the bound checks.
//!
//!     cargo run --example smooth_counts

use rmflab::smooth::{alpha_asymptotic, bound_checks, psi, psi_star, solve_alpha, SmoothCounter};
use rmflab::{PrimeTable, SmoothContext};

fn main() -> rmflab::Result<()> {
    let table = PrimeTable::new(1_000_000)?;

    println!("{:>10} {:>5} {:>10} {:>10} {:>8} {:>8}", "x", "y", "psi", "psi*", "alpha", "main");
    for (x, y) in [(100u64, 5u64), (10_000, 20), (1_000_000, 100), (1_000_000_000, 1000)] {
        let ctx = SmoothContext::new(y, &table)?;
        let a = solve_alpha(x as f64, &ctx, 1e-12)?;
        println!(
            "{x:>10} {y:>5} {:>10} {:>10} {a:>8.5} {:>8.5}",
            psi(x, &ctx),
            psi_star(x, &ctx)?,
            alpha_asymptotic(x as f64, y as f64)
        );
    }

    // A counter tabulates Ψ(t, y) for every t once; useful for many queries.
    let ctx = SmoothContext::new(11, &table)?;
    let counter = SmoothCounter::new(&ctx, 100_000)?;
    let sample: Vec<u64> = [10u64, 100, 1000, 10_000, 100_000].iter().map(|&t| counter.psi(t)).collect();
    println!("Psi(t, 11) at t = 10..1e5: {sample:?}");

    let report = bound_checks(100_000, &ctx, &[(300, 200), (1000, 99)], &[2.0, 10.0, 100.0])?;
    println!(
        "triangle inequality: {:?}, Konyagin-Pomerance: {} ({} vs {:.1}), sup ratio {:.3}",
        report.triangle, report.konyagin_holds, report.konyagin_psi, report.konyagin_bound, report.ratio_sup
    );
    Ok(())
}
