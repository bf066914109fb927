//! Legendre-symbol survey: partial-sum positivity, certified harmonic
//! positivity and least quadratic non-residues.
//!
//!     cargo run --release --example character_scan

use rmflab::characters::{harmonic_positive_certified, least_qnr, lplus_member, scan_primes, ScanOptions, SCAN_CSV_HEADER};
use rmflab::PrimeTable;

fn main() -> rmflab::Result<()> {
    for p in [3u64, 5, 7, 23, 163] {
        let l = lplus_member(p)?;
        let h = harmonic_positive_certified(p, None, 1_000_000_000)?;
        println!(
            "p = {p:>3}: in L+ {:<5} (min {:>3}), n_p = {}, S({}) = {:.5} > {:.2e}: certified {}",
            l.in_lplus,
            l.min_fsum,
            least_qnr(p)?,
            h.y0,
            h.s_y0,
            h.tail_bound,
            h.certified
        );
    }

    let table = PrimeTable::new(2000)?;
    let scan = scan_primes(500, &ScanOptions::default(), &table)?;
    println!("{SCAN_CSV_HEADER}");
    for r in scan.records.iter().take(5) {
        println!("{}", r.csv_row());
    }
    let a = scan.aggregate;
    println!("... {} primes in (500, 1000]: L+ density {:.3}, certified positive fraction {:.3}", a.primes, a.lplus_density, a.p_tilde);
    Ok(())
}
