//! Euler products F_x(1 + it), Halász's L(x) and the smooth-restricted ratios.
//!
//!     cargo run --release --example halasz

use rmflab::analysis::{halasz_f, halasz_l, ratio_checks};
use rmflab::{PrimeTable, SignModel};

fn main() -> rmflab::Result<()> {
    let table = PrimeTable::new(100_000)?;
    let models = [("one", SignModel::constant(1)), ("liouville", SignModel::constant(-1)), ("seed 9", SignModel::rademacher(9))];
    for (name, m) in &models {
        let f0 = halasz_f(m, 10_000, 0.0, &table)?;
        let f1 = halasz_f(m, 10_000, 1.0, &table)?;
        let l = halasz_l(m, 10_000, 1.0 / 32.0, &table)?;
        println!("{name:>9}: F(1) = {:.4}, |F(1+i)| = {:.4}, L(1e4) >= {:.4}", f0.re, f1.norm(), l.value);
    }
    let gamma = 0.577_215_664_901_532_9f64;
    println!("e^gamma ln(1e4) = {:.4}", gamma.exp() * 10_000f64.ln());

    for (name, m) in &models {
        let r = ratio_checks(m, 100_000, 0.3, &table)?;
        println!("{name:>9}: smooth ratio (x^0.99) {:.5}, (x^0.3) {:.5}", r.prop310_ratio, r.conj1_ratio);
    }
    Ok(())
}
