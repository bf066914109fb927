//! Quadratic characters: Jacobi symbols, prime scans for 𝓛⁺ and harmonic
//! positivity, least quadratic non-residues, and reciprocity residue classes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_small, PrimeTable};
use crate::numeric::{fmt_real, CompensatedSum};
use crate::{Error, Result};

/// Jacobi symbol `(a/n)` for odd `n >= 1`.
pub fn jacobi_symbol(a: i64, n: u64) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::range("n", n, "odd n >= 1"));
    }
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut s = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            s = -s;
        }
        if a % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    Ok(if n == 1 { s } else { 0 })
}

/// `∏_{p^α ∥ n} (m/p)^α`, where `(m/2)` is 1 for odd `m` and 0 for even `m`.
///
/// This differs from the Kronecker symbol at `p = 2`, which depends on
/// `m mod 8`.
pub fn extended_symbol(m: i64, n: u64, table: &PrimeTable) -> Result<i8> {
    if n == 0 {
        return Err(Error::range("n", n, "n >= 1"));
    }
    let mut s = 1i8;
    for &(p, e) in table.factorize(n)?.pairs() {
        let c = if p == 2 { (m % 2 != 0) as i8 } else { jacobi_symbol(m, p)? };
        if c == 0 {
            return Ok(0);
        }
        if e % 2 == 1 {
            s *= c;
        }
    }
    Ok(s)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime_small(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// The Legendre symbol `χ_p(n) = (n/p)` with a dense table over one period.
#[derive(Debug, Clone)]
pub struct CharacterContext {
    p: u64,
    chi: Vec<i8>,
}

impl CharacterContext {
    /// Builds the table by marking the squares mod `p`.
    pub fn new(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        if p > u32::MAX as u64 {
            return Err(Error::range("p", p, "p < 2^32 for a dense table"));
        }
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for i in 1..=p / 2 {
            chi[(i * i % p) as usize] = 1;
        }
        Ok(Self { p, chi })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn chi(&self, n: u64) -> i8 {
        self.chi[(n % self.p) as usize]
    }

    pub fn table(&self) -> &[i8] {
        &self.chi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LplusResult {
    pub in_lplus: bool,
    pub min_fsum: i64,
    pub argmin: u64,
}

/// Decides whether every partial sum `Σ_{n ≤ t} χ_p(n)` is nonnegative.
///
/// The sum over a full period vanishes, so the partial sums are
/// `p`-periodic and `t ∈ [1, p]` covers every `t`.
pub fn lplus_member(p: u64) -> Result<LplusResult> {
    lplus_with(&CharacterContext::new(p)?)
}

fn lplus_with(ctx: &CharacterContext) -> Result<LplusResult> {
    let (mut s, mut min, mut argmin) = (0i64, i64::MAX, 0u64);
    for t in 1..=ctx.p {
        s += ctx.chi(t) as i64;
        if s < min {
            min = s;
            argmin = t;
        }
    }
    Ok(LplusResult { in_lplus: min >= 0, min_fsum: min, argmin })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicCertificate {
    /// All scanned prefixes positive and the tail certificate holds.
    pub harmonic_positive: bool,
    /// `S(y0) > 2√p·ln p / y0` at the final `y0`.
    pub certified: bool,
    pub min_hsum: f64,
    pub y0: u64,
    pub s_y0: f64,
    pub tail_bound: f64,
    pub error_bound: f64,
}

/// Default certificate length `⌈4 p^{3/2}⌉`.
pub fn default_y0(p: u64) -> u64 {
    (4.0 * (p as f64).powf(1.5)).ceil() as u64
}

/// Scans `S(y) = Σ_{n ≤ y} χ_p(n)/n` up to `y0` and tries to certify
/// `S(y) > 0` for every `y > y0`.
///
/// By Pólya–Vinogradov and partial summation the tail beyond `y0` has size
/// at most `2√p·ln p / y0`; when `S(y0)` exceeds that (with the summation
/// error bound subtracted) the sign is settled for all `y`. Otherwise `y0`
/// grows tenfold until `cap`, and the result stays uncertified if it never
/// closes.
pub fn harmonic_positive_certified(p: u64, y0: Option<u64>, cap: u64) -> Result<HarmonicCertificate> {
    harmonic_with(&CharacterContext::new(p)?, y0, cap)
}

fn harmonic_with(ctx: &CharacterContext, y0: Option<u64>, cap: u64) -> Result<HarmonicCertificate> {
    let p = ctx.p;
    let mut y0 = y0.unwrap_or_else(|| default_y0(p));
    if y0 < 1 {
        return Err(Error::range("y0", y0, "y0 >= 1"));
    }
    let cap = cap.max(y0);
    let pf = p as f64;
    let pv = 2.0 * pf.sqrt() * pf.ln();
    let mut sum = CompensatedSum::new();
    let mut min = f64::INFINITY;
    let mut n = 0u64;
    loop {
        while n < y0 {
            n += 1;
            let c = ctx.chi(n);
            if c != 0 {
                sum.add(c as f64 / n as f64);
            }
            min = min.min(sum.value());
        }
        let tail = pv / y0 as f64;
        let s = sum.value();
        let certified = s - sum.error_bound() > tail;
        let positive = min > 0.0;
        if certified || !positive || y0 >= cap {
            return Ok(HarmonicCertificate {
                harmonic_positive: positive && certified,
                certified,
                min_hsum: min,
                y0,
                s_y0: s,
                tail_bound: tail,
                error_bound: sum.error_bound(),
            });
        }
        y0 = y0.saturating_mul(10).min(cap);
    }
}

/// Smallest `n >= 2` with `χ_p(n) = −1`; always a prime.
pub fn least_qnr(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let mut n = 2u64;
    while jacobi_symbol(n as i64, p)? != -1 {
        n += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub p: u64,
    pub in_lplus: bool,
    pub harmonic_positive: bool,
    pub certified: bool,
    pub least_qnr: u64,
    pub min_fsum: i64,
    pub min_hsum: f64,
}

pub const SCAN_CSV_HEADER: &str = "p,in_lplus,harmonic_positive,certified,least_qnr,min_fsum,min_hsum";

impl ScanRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.p,
            self.in_lplus,
            self.harmonic_positive,
            self.certified,
            self.least_qnr,
            self.min_fsum,
            fmt_real(self.min_hsum)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    /// Largest certificate length tried per prime.
    pub y0_cap: u64,
    /// Upper limit on `Σ_p y0(p)` over the scan, checked before any work.
    pub work_budget: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { y0_cap: 1_000_000_000, work_budget: 20_000_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanAggregate {
    pub x: u64,
    pub primes: u64,
    pub lplus_count: u64,
    pub certified_positive: u64,
    pub lplus_density: f64,
    /// Fraction of primes in `(x, 2x]` certified harmonic-positive.
    pub p_tilde: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub records: Vec<ScanRecord>,
    pub aggregate: ScanAggregate,
}

/// One [`ScanRecord`] per prime in `(x, 2x]`, in increasing order.
pub fn scan_primes(x: u64, options: &ScanOptions, table: &PrimeTable) -> Result<Scan> {
    if x < 1 {
        return Err(Error::range("x", x, "x >= 1"));
    }
    let hi = x.checked_mul(2).ok_or(Error::Overflow("2x"))?;
    if hi > table.limit() {
        return Err(Error::InsufficientTable { n: hi, limit: table.limit() });
    }
    let primes: Vec<u64> = table.primes_in(x, hi).iter().copied().filter(|&p| p > 2).collect();
    let work: u64 = primes.iter().map(|&p| default_y0(p).min(options.y0_cap) + p).sum();
    if work > options.work_budget {
        return Err(Error::Budget { what: "scan work", needed: work, limit: options.work_budget });
    }
    let records = primes
        .par_iter()
        .map(|&p| {
            let ctx = CharacterContext::new(p)?;
            let lp = lplus_with(&ctx)?;
            let y0 = default_y0(p).min(options.y0_cap);
            let h = harmonic_with(&ctx, Some(y0), options.y0_cap)?;
            Ok(ScanRecord {
                p,
                in_lplus: lp.in_lplus,
                harmonic_positive: h.harmonic_positive,
                certified: h.certified,
                least_qnr: least_qnr(p)?,
                min_fsum: lp.min_fsum,
                min_hsum: h.min_hsum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = records.len() as u64;
    let lplus_count = records.iter().filter(|r| r.in_lplus).count() as u64;
    let certified_positive = records.iter().filter(|r| r.harmonic_positive).count() as u64;
    let frac = |c: u64| if n == 0 { 0.0 } else { c as f64 / n as f64 };
    let aggregate = ScanAggregate {
        x,
        primes: n,
        lplus_count,
        certified_positive,
        lplus_density: frac(lplus_count),
        p_tilde: frac(certified_positive),
    };
    Ok(Scan { records, aggregate })
}

/// Largest `N` whose modulus `8·∏_{2<q≤N} q` fits in 64 bits.
pub const RESIDUE_MAX_N: u64 = 43;
/// Largest residue set [`residue_set`] will materialise.
pub const RESIDUE_BUDGET: u64 = 10_000_000;

/// Prescribed signs of `(−1/p)` and `(q/p)` for primes `q <= N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSpec {
    n: u64,
    signs: BTreeMap<i64, i8>,
}

impl ResidueSpec {
    /// `signs` must be keyed exactly on `−1` and the primes `<= n`.
    pub fn new(n: u64, signs: BTreeMap<i64, i8>) -> Result<Self> {
        if !(3..=RESIDUE_MAX_N).contains(&n) {
            return Err(Error::range("N", n, "3 <= N <= 43"));
        }
        let keys = Self::keys(n);
        if signs.len() != keys.len() || keys.iter().any(|k| !signs.contains_key(k)) {
            return Err(Error::Invalid(format!("signs must be keyed exactly on {keys:?}")));
        }
        if signs.values().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid("signs must be +1 or -1".into()));
        }
        Ok(Self { n, signs })
    }

    /// Pattern `bits` over [`ResidueSpec::keys`]: bit `i` set means sign −1.
    pub fn from_pattern(n: u64, bits: u64) -> Result<Self> {
        let keys = Self::keys(n);
        let signs = keys.iter().enumerate().map(|(i, &k)| (k, if bits >> i & 1 == 1 { -1 } else { 1 })).collect();
        Self::new(n, signs)
    }

    /// `[−1, 2, 3, 5, …]` up to `n`.
    pub fn keys(n: u64) -> Vec<i64> {
        std::iter::once(-1).chain((2..=n).filter(|&q| is_prime_small(q)).map(|q| q as i64)).collect()
    }

    pub fn pattern_count(n: u64) -> u64 {
        1 << Self::keys(n).len()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn signs(&self) -> &BTreeMap<i64, i8> {
        &self.signs
    }

    /// `k = 8·∏_{2<q≤N} q`.
    pub fn modulus(&self) -> u64 {
        self.odd_primes().product::<u64>() * 8
    }

    fn odd_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.signs.keys().filter(|&&q| q > 2).map(|&q| q as u64)
    }

    /// The unique class mod 8 matching the signs of −1 and 2.
    fn class_mod_8(&self) -> u64 {
        let want_minus = self.signs[&-1];
        let want_two = self.signs[&2];
        [1u64, 3, 5, 7]
            .into_iter()
            .find(|&l| {
                let minus = if l % 4 == 1 { 1 } else { -1 };
                let two = if l == 1 || l == 7 { 1 } else { -1 };
                minus == want_minus && two == want_two
            })
            .expect("every sign pair occurs mod 8")
    }

    /// Residues `a mod q` allowed for `l`, given `l ≡ r8 (mod 8)`.
    fn allowed_mod(&self, q: u64, r8: u64) -> Vec<u64> {
        // (q/p) = (p/q)·(−1)^{(p−1)/2·(q−1)/2}
        let flip = if r8 % 4 == 3 && q % 4 == 3 { -1 } else { 1 };
        let target = self.signs[&(q as i64)] * flip;
        (1..q).filter(|&a| jacobi_symbol(a as i64, q).unwrap() == target).collect()
    }
}

/// `|S| = φ(k)/2^{π(N)+1}`, without enumerating.
pub fn residue_count(spec: &ResidueSpec) -> u64 {
    spec.odd_primes().map(|q| (q - 1) / 2).product()
}

/// All `l mod k` such that every prime `p ≡ l (mod k)` has the prescribed
/// `(−1/p)` and `(q/p)`, assembled by the Chinese remainder theorem from the
/// reciprocity conditions on `l mod 8` and `l mod q`. Sorted ascending.
pub fn residue_set(spec: &ResidueSpec) -> Result<Vec<u64>> {
    let count = residue_count(spec);
    if count > RESIDUE_BUDGET {
        return Err(Error::Budget { what: "residue set size", needed: count, limit: RESIDUE_BUDGET });
    }
    let r8 = spec.class_mod_8();
    let mut residues = vec![r8];
    let mut m = 8u64;
    for q in spec.odd_primes().collect::<Vec<_>>() {
        let allowed = spec.allowed_mod(q, r8);
        let inv = mod_inverse(m % q, q);
        let mut next = Vec::with_capacity(residues.len() * allowed.len());
        for &r in &residues {
            for &a in &allowed {
                let t = ((a + q - r % q) % q) * inv % q;
                next.push(r + m * t);
            }
        }
        residues = next;
        m *= q;
    }
    residues.sort_unstable();
    Ok(residues)
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(m as i128) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharMoment {
    pub mean: f64,
    pub primes: u64,
    /// `(log x)·y·log y + (log x / x)·y³·log y` for `q = 2`, else `None`.
    pub shape: Option<f64>,
}

/// Mean over primes `p ∈ (x, 2x]` of `(Σ_{n ≤ y} c(n) χ_p(n))^q`, where
/// `coeffs[n − 1] = c(n)`.
pub fn empirical_char_moment(x: u64, coeffs: &[f64], q: u32, table: &PrimeTable) -> Result<CharMoment> {
    if q == 0 || q % 2 == 1 {
        return Err(Error::range("q", q, "even q >= 2"));
    }
    if coeffs.iter().any(|c| !(c.abs() <= 1.0)) {
        return Err(Error::Invalid("coefficients must satisfy |c(n)| <= 1".into()));
    }
    let hi = x.checked_mul(2).ok_or(Error::Overflow("2x"))?;
    if hi > table.limit() {
        return Err(Error::InsufficientTable { n: hi, limit: table.limit() });
    }
    let primes: Vec<u64> = table.primes_in(x, hi).iter().copied().filter(|&p| p > 2).collect();
    if primes.is_empty() {
        return Err(Error::Invalid(format!("no odd primes in ({x}, {hi}]")));
    }
    let powers: Vec<f64> = primes
        .par_iter()
        .map(|&p| {
            let s: CompensatedSum = coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c * jacobi_symbol(i as i64 + 1, p).unwrap() as f64)
                .collect();
            s.value().powi(q as i32)
        })
        .collect();
    let mean = powers.iter().copied().collect::<CompensatedSum>().value() / primes.len() as f64;
    let shape = (q == 2).then(|| {
        let (lx, y) = ((x as f64).ln(), coeffs.len() as f64);
        let ly = y.ln();
        lx * y * ly + lx / x as f64 * y.powi(3) * ly
    });
    Ok(CharMoment { mean, primes: primes.len() as u64, shape })
}
