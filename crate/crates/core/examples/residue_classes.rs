//! Residue classes with prescribed quadratic symbols, from reciprocity.
//!
//!     cargo run --example residue_classes

use rmflab::characters::{jacobi_symbol, residue_count, residue_set, ResidueSpec};

fn main() -> rmflab::Result<()> {
    // Primes p with (-1/p) = -1, (2/p) = +1, (3/p) = -1, (5/p) = +1.
    let spec = ResidueSpec::from_pattern(5, 0b0101)?;
    println!("signs {:?}, k = {}", spec.signs(), spec.modulus());
    let set = residue_set(&spec)?;
    println!("classes mod {}: {set:?}", spec.modulus());
    let p = (set[0]..).step_by(spec.modulus() as usize).find(|&n| rmflab::arith::is_prime_small(n)).unwrap();
    println!("first prime in the first class: {p}; (3/p) = {}, (5/p) = {}", jacobi_symbol(3, p)?, jacobi_symbol(5, p)?);

    for n in [3u64, 7, 13, 23, 43] {
        let spec = ResidueSpec::from_pattern(n, 0)?;
        println!("N = {n:>2}: k = {:>20}, |S| = {}", spec.modulus(), residue_count(&spec));
    }
    Ok(())
}
