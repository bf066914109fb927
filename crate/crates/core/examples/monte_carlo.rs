//! Probability estimates with Wilson intervals, and exhaustive oracles.
//!
//!     cargo run --release --example monte_carlo

use rmflab::montecarlo::{
    estimate_conditional_lplus, estimate_cov_a_fd, estimate_deviation, estimate_event_a, estimate_negative_harmonic,
    SiegelConfig,
};
use rmflab::{PrimeTable, Sampling, SmoothContext};

fn main() -> rmflab::Result<()> {
    let table = PrimeTable::new(100_000)?;
    let mc = |seed| Sampling::MonteCarlo { trials: 20_000, seed };

    println!("P(partial sums of f >= 0 up to x | f(p) = 1 for p <= y):");
    for (x, y) in [(1000u64, 10u64), (1000, 30), (10_000, 30), (10_000, 100)] {
        let e = estimate_conditional_lplus(x, y, mc(1), &table)?;
        println!("  x = {x:>6}, y = {y:>3}: {:.4} [{:.4}, {:.4}]", e.p_hat, e.ci_low, e.ci_high);
    }
    let exact = estimate_conditional_lplus(60, 7, Sampling::Exhaustive, &table)?;
    println!("  x = 60, y = 7 exhaustively: {}/{} = {:.6}", exact.successes, exact.trials, exact.p_hat);

    let neg = estimate_negative_harmonic(10_000, mc(2), &table)?;
    println!("P(sum f(n)/n < 0, n <= 1e4) = {} ({} of {})", neg.p_hat, neg.successes, neg.trials);

    let a = estimate_event_a(10_000, mc(3), &table)?;
    println!("P(A truncated at 1e4) = {:.4} [{:.4}, {:.4}]", a.p_hat, a.ci_low, a.ci_high);

    let cov = estimate_cov_a_fd(6, 1000, mc(4), &table)?;
    let siegel = SiegelConfig::new(1, Some(0.99))?;
    println!(
        "Cov(1_A, f(6)) = {:.5} +- {:.5}; hypothetical exceptional-zero correction at x = 1e6: {:.5}",
        cov.value,
        cov.std_error,
        siegel.correction(cov.value, 1e6)
    );

    let ctx = SmoothContext::new(10, &table)?;
    for delta in [0.1, 0.3, 0.5] {
        let e = estimate_deviation(100, &ctx, delta, Sampling::Exhaustive)?;
        println!("deviation event at (100, 10), delta = {delta}: {:.6}", e.p_hat);
    }
    Ok(())
}
