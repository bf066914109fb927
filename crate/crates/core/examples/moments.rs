//! Exact Rademacher expectations, Bonami-Halász, Hoeffding and moment norms.
//!
//!     cargo run --release --example moments

use rmflab::analysis::{
    bonami_halasz_check, exact_expectation_product, hoeffding_bound, hoeffding_probe, moment_qnorm, prime_sign_terms,
    CoefficientSeq, FinitePrimeModel, MomentMode,
};
use rmflab::PrimeTable;

fn main() -> rmflab::Result<()> {
    let b = CoefficientSeq::new([(1, 0.5), (2, 1.0), (3, -1.0), (6, 1.0)])?;
    let bs = [b.clone(), b.clone(), b.clone(), b];
    let q = FinitePrimeModel::covering(&bs)?;
    let e = exact_expectation_product(&bs, &q)?;
    println!("E[(b f)^4] = {} (enumeration {:?})", e.value, e.by_enumeration);
    let r = bonami_halasz_check(&bs, &q)?;
    println!("Bonami-Halasz with m = 4: {} <= {:.4}: {}", r.lhs, r.rhs, r.holds);

    let ten = vec![(-1.0, 1.0); 10];
    println!("Hoeffding, ten signs, t = 5: {:.4}", hoeffding_bound(&ten, 5.0)?);
    let table = PrimeTable::new(10_000)?;
    for row in hoeffding_probe(&prime_sign_terms(100, &table), &[5.0, 10.0, 15.0], 50_000, 1)? {
        println!("  P(|sum_(p<=100) f(p)| >= {}) = {:.4} <= {:.4}", row.t, row.frequency, row.bound);
    }

    for q in [2u32, 4, 6] {
        let m = moment_qnorm(30, q, MomentMode::Exact, &table)?;
        let s = moment_qnorm(30, q, MomentMode::MonteCarlo { trials: 100_000, seed: 5 }, &table)?;
        println!("q = {q}: exact {:>10} (norm {:.4}); sampled {:.1} +- {:.1}", m.moment, m.qnorm, s.moment, s.std_error);
    }
    Ok(())
}
