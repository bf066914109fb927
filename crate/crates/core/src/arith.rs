//! Prime tables, factorization and elementary multiplicative invariants.
//!
//! [`PrimeTable`] is a smallest-prime-factor sieve. Integers up to the table
//! limit factor in `O(log n)` steps by repeatedly dividing out the stored
//! smallest prime factor; larger integers fall back to trial division by the
//! tabulated primes and are rejected (never mis-factored) when the table is
//! too small to certify the remaining cofactor.

use crate::numeric::CompensatedSum;
use crate::randmult::SignModel;
use crate::{Error, Result};

/// Largest supported sieve limit.
pub const MAX_LIMIT: u64 = 1 << 31;

#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    // spf[n] for n <= limit; 0 marks "none" (n = 0, 1).
    spf: Vec<u32>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes recording the smallest prime factor of every
    /// `n <= limit`.
    pub fn new(limit: u64) -> Result<Self> {
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(Error::range("limit", limit, "2 <= limit <= 2^31"));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::with_capacity(prime_count_upper(limit));
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
                if let Some(start) = i.checked_mul(i) {
                    let mut j = start;
                    while j <= n {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
        }
        Ok(Self { limit, primes, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `<= limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= x` (clamped to the table).
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }

    /// Primes in the half-open interval `(lo, hi]`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p <= lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end.max(start)]
    }

    /// π(x) for `x <= limit`.
    pub fn pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// Smallest prime factor of `n`; `None` for `n < 2` or beyond the table.
    #[inline]
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    /// Raw smallest-prime-factor lookup for `2 <= n <= limit`.
    #[inline]
    pub(crate) fn spf_unchecked(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        if n <= self.limit {
            return Ok(n >= 2 && self.spf[n as usize] as u64 == n);
        }
        if self.limit.checked_mul(self.limit).map_or(true, |sq| sq >= n) {
            let r = crate::numeric::isqrt(n);
            return Ok(self.primes_up_to(r).iter().all(|&p| n % p != 0));
        }
        Err(Error::InsufficientTable { n, limit: self.limit })
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::range("n", 0, "n >= 1"));
        }
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        let push = |p: u64, pairs: &mut Vec<(u64, u32)>| match pairs.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => pairs.push((p, 1)),
        };
        let mut m = n;
        if m > self.limit {
            for &p in &self.primes {
                if p.checked_mul(p).map_or(true, |sq| sq > m) {
                    break;
                }
                while m % p == 0 {
                    push(p, &mut pairs);
                    m /= p;
                }
                if m <= self.limit {
                    break;
                }
            }
            if m > self.limit {
                // m has no prime factor <= min(limit, sqrt(m)) checked so far.
                let covered = self.limit.checked_mul(self.limit).map_or(true, |sq| sq >= m);
                if !covered {
                    return Err(Error::InsufficientTable { n, limit: self.limit });
                }
                pairs.push((m, 1));
                return Ok(Factorization { pairs });
            }
        }
        while m > 1 {
            let p = self.spf_unchecked(m);
            push(p, &mut pairs);
            m /= p;
        }
        Ok(Factorization { pairs })
    }
}

fn prime_count_upper(x: u64) -> usize {
    if x < 17 {
        return 7;
    }
    let xf = x as f64;
    (1.26 * xf / xf.ln()) as usize + 1
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing
/// primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Recomposes the factored integer with checked arithmetic.
    pub fn value(&self) -> Result<u64> {
        self.pairs.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e)
                .and_then(|pe| acc.checked_mul(pe))
                .ok_or(Error::Overflow("factorization product"))
        })
    }

    pub fn omega(&self) -> u32 {
        self.pairs.len() as u32
    }

    pub fn big_omega(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    pub fn liouville(&self) -> i8 {
        if self.big_omega() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_square_free(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    pub fn least_prime(&self) -> Option<u64> {
        self.pairs.first().map(|&(p, _)| p)
    }

    pub fn greatest_prime(&self) -> Option<u64> {
        self.pairs.last().map(|&(p, _)| p)
    }
}

/// ω, Ω, λ and the extreme prime factors of an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Invariants {
    pub omega: u32,
    pub big_omega: u32,
    pub liouville: i8,
    pub least_pf: Option<u64>,
    pub greatest_pf: Option<u64>,
}

pub fn multiplicative_invariants(n: u64, table: &PrimeTable) -> Result<Invariants> {
    let f = table.factorize(n)?;
    Ok(Invariants {
        omega: f.omega(),
        big_omega: f.big_omega(),
        liouville: f.liouville(),
        least_pf: f.least_prime(),
        greatest_pf: f.greatest_prime(),
    })
}

/// Σ_{p ≤ x} f(p)/p.
pub fn prime_recip_sum(model: &SignModel, x: u64, table: &PrimeTable) -> Result<f64> {
    if x < 2 {
        return Err(Error::range("x", x, "x >= 2"));
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    let sum: CompensatedSum = table
        .primes_up_to(x)
        .iter()
        .map(|&p| model.sign(p) as f64 / p as f64)
        .collect();
    Ok(sum.value())
}

/// Deterministic trial-division primality for inputs that may lie outside any
/// table. Intended for small arguments (override keys, character moduli).
pub fn is_prime_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    if n % 3 == 0 {
        return n == 3;
    }
    let mut d = 5u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}
