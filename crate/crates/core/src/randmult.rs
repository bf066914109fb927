//! The random completely multiplicative ±1 model.
//!
//! A [`SignModel`] is a pure function from primes to signs. For a Rademacher
//! model the sign of `p` is the low bit of a SplitMix64 avalanche of the
//! (pre-mixed) seed XOR `p`, so every sign is reproducible regardless of the
//! order in which primes are queried, and ranges can be evaluated on any
//! number of threads.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::{is_prime_small, PrimeTable};
use crate::numeric::{mix64, CompensatedSum};
use crate::smooth::{SmoothContext, SmoothCounter};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignBase {
    /// Independent fair signs derived from a seed.
    Rademacher { seed: u64 },
    /// The same sign at every prime; `Constant(-1)` realizes λ.
    Constant(i8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignModel {
    base: SignBase,
    key: u64,
    forced_prefix_y: Option<u64>,
    overrides: BTreeMap<u64, i8>,
    sign_minus_one: i8,
}

impl SignModel {
    pub fn rademacher(seed: u64) -> Self {
        Self {
            base: SignBase::Rademacher { seed },
            key: mix64(seed),
            forced_prefix_y: None,
            overrides: BTreeMap::new(),
            sign_minus_one: 1,
        }
    }

    /// `f(p) = sign` for every prime. Panics unless `sign` is ±1.
    pub fn constant(sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        Self {
            base: SignBase::Constant(sign),
            key: 0,
            forced_prefix_y: None,
            overrides: BTreeMap::new(),
            sign_minus_one: 1,
        }
    }

    /// Forces `f(p) = +1` for every prime `p <= y`.
    pub fn with_forced_prefix(mut self, y: u64) -> Self {
        self.forced_prefix_y = Some(y);
        self
    }

    /// Pins the sign of a single prime. Overrides win over the forced prefix.
    pub fn with_override(mut self, p: u64, sign: i8) -> Result<Self> {
        check_sign(sign)?;
        if !is_prime_small(p) {
            return Err(Error::NotPrime(p));
        }
        self.overrides.insert(p, sign);
        Ok(self)
    }

    pub fn with_sign_minus_one(mut self, sign: i8) -> Result<Self> {
        check_sign(sign)?;
        self.sign_minus_one = sign;
        Ok(self)
    }

    pub fn base(&self) -> SignBase {
        self.base
    }

    pub fn forced_prefix_y(&self) -> Option<u64> {
        self.forced_prefix_y
    }

    pub fn overrides(&self) -> &BTreeMap<u64, i8> {
        &self.overrides
    }

    /// The sign attached to the formal symbol −1. It never enters `f(n)` for
    /// `n >= 1`.
    pub fn sign_minus_one(&self) -> i8 {
        self.sign_minus_one
    }

    /// Sign at a prime `p`. The argument is assumed prime.
    #[inline]
    pub fn sign(&self, p: u64) -> i8 {
        if !self.overrides.is_empty() {
            if let Some(&s) = self.overrides.get(&p) {
                return s;
            }
        }
        if self.forced_prefix_y.is_some_and(|y| p <= y) {
            return 1;
        }
        match self.base {
            SignBase::Constant(s) => s,
            SignBase::Rademacher { .. } => {
                if mix64(self.key ^ p) & 1 == 0 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// True when every prime `<= y` is guaranteed the sign +1.
    pub fn forces_positive_up_to(&self, y: u64) -> bool {
        let prefix_ok = matches!(self.base, SignBase::Constant(1))
            || self.forced_prefix_y.is_some_and(|fy| fy >= y);
        prefix_ok && self.overrides.range(..=y).all(|(_, &s)| s == 1)
    }

    /// `f(n)` by complete multiplicativity.
    pub fn f_at(&self, n: u64, table: &PrimeTable) -> Result<i8> {
        let fac = table.factorize(n)?;
        Ok(fac
            .pairs()
            .iter()
            .filter(|&&(_, e)| e % 2 == 1)
            .fold(1i8, |acc, &(p, _)| acc * self.sign(p)))
    }

    /// `f(0..=x)` with `f(0) = 0` as padding.
    pub fn values(&self, x: u64, table: &PrimeTable) -> Result<Vec<i8>> {
        let mut out = Vec::new();
        fill_values(x, table, |p| self.sign(p), &mut out)?;
        Ok(out)
    }
}

fn check_sign(sign: i8) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::range("sign", sign, "±1"))
    }
}

/// Builds a [`SignModel`] from a seed, an optional forced prefix and a list of
/// per-prime overrides. Overrides keyed on a non-prime are rejected.
pub fn sample_model(seed: u64, forced_prefix_y: Option<u64>, overrides: &[(u64, i8)]) -> Result<SignModel> {
    let mut model = SignModel::rademacher(seed);
    if let Some(y) = forced_prefix_y {
        model = model.with_forced_prefix(y);
    }
    for &(p, s) in overrides {
        model = model.with_override(p, s)?;
    }
    Ok(model)
}

/// Fills `out[0..=x]` with a completely multiplicative ±1 function given its
/// values at primes, using the smallest-prime-factor table.
pub(crate) fn fill_values(
    x: u64,
    table: &PrimeTable,
    sign: impl Fn(u64) -> i8,
    out: &mut Vec<i8>,
) -> Result<()> {
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    let n = x as usize;
    out.clear();
    out.resize(n + 1, 0);
    if n >= 1 {
        out[1] = 1;
    }
    for m in 2..=n {
        let p = table.spf_unchecked(m as u64) as usize;
        out[m] = if p == m { sign(p as u64) } else { out[p] * out[m / p] };
    }
    Ok(())
}

/// Partial-sum summary of `Σ_{n ≤ t} f(n)` for `1 <= t <= x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixScan {
    pub x: u64,
    pub final_sum: i64,
    pub min_prefix: i64,
    pub argmin: u64,
    pub all_nonneg: bool,
    pub all_positive: bool,
}

impl PrefixScan {
    /// Scans `values[1..]`; `values[0]` is ignored.
    pub fn from_values(values: &[i8]) -> Self {
        let mut chunk = ChunkSummary::empty(1);
        for (i, &v) in values.iter().enumerate().skip(1) {
            chunk.push(i as u64, v as i64);
        }
        chunk.finish(values.len().saturating_sub(1) as u64)
    }
}

#[derive(Debug, Clone, Copy)]
struct ChunkSummary {
    sum: i64,
    min: i64,
    argmin: u64,
}

impl ChunkSummary {
    fn empty(start: u64) -> Self {
        Self { sum: 0, min: i64::MAX, argmin: start }
    }

    #[inline]
    fn push(&mut self, n: u64, v: i64) {
        self.sum += v;
        if self.sum < self.min {
            self.min = self.sum;
            self.argmin = n;
        }
    }

    fn finish(self, x: u64) -> PrefixScan {
        PrefixScan {
            x,
            final_sum: self.sum,
            min_prefix: self.min,
            argmin: self.argmin,
            all_nonneg: self.min >= 0,
            all_positive: self.min > 0,
        }
    }
}

const PARALLEL_SCAN_THRESHOLD: u64 = 1 << 20;
const SCAN_CHUNK: u64 = 1 << 16;

/// Exact integer partial sums of `f(n)` up to `x`.
///
/// Large ranges are split into chunks evaluated in parallel; each chunk
/// reports its sum and local minimum, and the chunks are stitched together
/// with exact integer offsets, so the result does not depend on the pool
/// size.
pub fn prefix_scan(model: &SignModel, x: u64, table: &PrimeTable) -> Result<PrefixScan> {
    if x < 1 {
        return Err(Error::range("x", x, "x >= 1"));
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    if x < PARALLEL_SCAN_THRESHOLD {
        return Ok(PrefixScan::from_values(&model.values(x, table)?));
    }
    let chunks: Vec<ChunkSummary> = (0..x.div_ceil(SCAN_CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * SCAN_CHUNK + 1;
            let hi = ((c + 1) * SCAN_CHUNK).min(x);
            let mut s = ChunkSummary::empty(lo);
            for n in lo..=hi {
                s.push(n, f_by_spf_chain(model, n, table) as i64);
            }
            s
        })
        .collect();
    let mut total = ChunkSummary::empty(1);
    for c in chunks {
        if total.sum + c.min < total.min {
            total.min = total.sum + c.min;
            total.argmin = c.argmin;
        }
        total.sum += c.sum;
    }
    Ok(total.finish(x))
}

#[inline]
fn f_by_spf_chain(model: &SignModel, mut n: u64, table: &PrimeTable) -> i8 {
    let mut s = 1i8;
    while n > 1 {
        let p = table.spf_unchecked(n);
        s *= model.sign(p);
        n /= p;
    }
    s
}

/// Partial sums of `f(n)/n`, with compensated summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicScan {
    pub x: u64,
    pub final_sum: f64,
    pub min_prefix: f64,
    pub argmin: u64,
    pub all_nonneg: bool,
    pub all_positive: bool,
    /// Bound on the accumulated rounding error of `final_sum`.
    pub error_bound: f64,
}

impl HarmonicScan {
    pub fn from_values(values: &[i8]) -> Self {
        let mut sum = CompensatedSum::new();
        let mut min = f64::INFINITY;
        let mut argmin = 1;
        for (n, &v) in values.iter().enumerate().skip(1) {
            sum.add(v as f64 / n as f64);
            let cur = sum.value();
            if cur < min {
                min = cur;
                argmin = n as u64;
            }
        }
        HarmonicScan {
            x: values.len().saturating_sub(1) as u64,
            final_sum: sum.value(),
            min_prefix: min,
            argmin,
            all_nonneg: min >= 0.0,
            all_positive: min > 0.0,
            error_bound: sum.error_bound(),
        }
    }
}

pub fn harmonic_scan(model: &SignModel, x: u64, table: &PrimeTable) -> Result<HarmonicScan> {
    if x < 1 {
        return Err(Error::range("x", x, "x >= 1"));
    }
    Ok(HarmonicScan::from_values(&model.values(x, table)?))
}

/// Both sides of `Σ f(n)/n = (Σ g(n) + Σ f(n){x/n}) / x` with `g = f ∗ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementaryDecomposition {
    pub harmonic: f64,
    /// `Σ_{n ≤ x} g(n) = Σ_{d ≤ x} f(d)⌊x/d⌋`, exact.
    pub g_sum: i64,
    pub frac_sum: f64,
    pub residual: f64,
    /// `Σ_{p ≤ x} (1 + f(p))`, the prime-only part of `g_sum`.
    pub prime_part: i64,
}

pub fn elementary_decomposition(model: &SignModel, x: u64, table: &PrimeTable) -> Result<ElementaryDecomposition> {
    if x < 1 {
        return Err(Error::range("x", x, "x >= 1"));
    }
    let values = model.values(x, table)?;
    Ok(elementary_from_values(&values, table))
}

pub(crate) fn elementary_from_values(values: &[i8], table: &PrimeTable) -> ElementaryDecomposition {
    let x = (values.len() - 1) as u64;
    let mut harmonic = CompensatedSum::new();
    let mut frac = CompensatedSum::new();
    let mut g_sum = 0i64;
    for (n, &v) in values.iter().enumerate().skip(1) {
        let n = n as u64;
        let v = v as i64;
        harmonic.add(v as f64 / n as f64);
        g_sum += v * (x / n) as i64;
        let rem = x % n;
        if rem != 0 {
            frac.add((v * rem as i64) as f64 / n as f64);
        }
    }
    let prime_part: i64 = table
        .primes_up_to(x)
        .iter()
        .map(|&p| 1 + values[p as usize] as i64)
        .sum();
    let harmonic = harmonic.value();
    let frac_sum = frac.value();
    let residual = (harmonic - (g_sum as f64 + frac_sum) / x as f64).abs();
    ElementaryDecomposition { harmonic, g_sum, frac_sum, residual, prime_part }
}

/// Both sides of
/// `Σ_{n ≤ x} f(n) = Ψ*(x, y) + Σ♭_{p(n) > y, n ≠ 1} f(n) Ψ*(x/n, y)`,
/// which holds when `f(p) = 1` for every `p <= y`.
pub fn rough_decomposition(
    model: &SignModel,
    x: u64,
    ctx: &SmoothContext<'_>,
) -> Result<(i64, i64)> {
    if !model.forces_positive_up_to(ctx.y()) {
        return Err(Error::Invalid(format!(
            "rough decomposition needs f(p) = +1 for all p <= y = {}",
            ctx.y()
        )));
    }
    if x == 0 {
        return Ok((0, 0));
    }
    let table = ctx.table();
    let lhs = prefix_scan(model, x, table)?.final_sum;
    let counter = SmoothCounter::new(ctx, x)?;
    let rough = table.primes_in(ctx.y(), x);
    let signs: Vec<i8> = rough.iter().map(|&p| model.sign(p)).collect();
    let mut rhs = counter.psi_star(x) as i64;
    // Depth-first over square-free products of rough primes.
    let mut stack: Vec<(u64, usize, i8)> = vec![(1, 0, 1)];
    while let Some((n, start, s)) = stack.pop() {
        for i in start..rough.len() {
            let p = rough[i];
            let Some(m) = n.checked_mul(p).filter(|&m| m <= x) else {
                break;
            };
            let sm = s * signs[i];
            rhs += sm as i64 * counter.psi_star(x / m) as i64;
            stack.push((m, i + 1, sm));
        }
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> PrimeTable {
        PrimeTable::new(100_000).unwrap()
    }

    #[test]
    fn sample_model_examples() {
        let t = table();
        let m = SignModel::rademacher(3).with_forced_prefix(50);
        for n in 1..=50 {
            assert_eq!(m.f_at(n, &t).unwrap(), 1);
        }
        let a = SignModel::rademacher(99);
        let b = SignModel::rademacher(99);
        for &p in t.primes_up_to(1000) {
            assert_eq!(a.sign(p), b.sign(p));
        }
        let m = sample_model(5, Some(10), &[(2, -1)]).unwrap();
        assert_eq!(m.sign(2), -1);
        assert_eq!(m.sign(3), 1);
        assert_eq!(sample_model(5, None, &[(4, 1)]), Err(Error::NotPrime(4)));
        assert!(sample_model(5, None, &[(3, 0)]).is_err());
    }

    #[test]
    fn seeds_differ() {
        let t = table();
        let a = SignModel::rademacher(1);
        let b = SignModel::rademacher(2);
        let ps = t.primes_up_to(10_000);
        let agree = ps.iter().filter(|&&p| a.sign(p) == b.sign(p)).count();
        let frac = agree as f64 / ps.len() as f64;
        assert!((0.45..0.55).contains(&frac), "{frac}");
        let plus = ps.iter().filter(|&&p| a.sign(p) == 1).count() as f64 / ps.len() as f64;
        assert!((0.45..0.55).contains(&plus), "{plus}");
    }

    #[test]
    fn f_at_examples() {
        let t = table();
        let m = SignModel::rademacher(11);
        assert_eq!(m.f_at(12, &t).unwrap(), m.f_at(3, &t).unwrap());
        assert_eq!(m.f_at(1, &t).unwrap(), 1);
        let lambda = SignModel::constant(-1);
        assert_eq!(lambda.f_at(10, &t).unwrap(), 1);
        assert_eq!(lambda.f_at(12, &t).unwrap(), -1);
    }

    #[test]
    fn values_match_f_at() {
        let t = table();
        let m = SignModel::rademacher(42).with_override(7, -1).unwrap();
        let v = m.values(5000, &t).unwrap();
        for n in 1..=5000u64 {
            assert_eq!(v[n as usize], m.f_at(n, &t).unwrap());
        }
    }

    #[test]
    fn prefix_scan_examples() {
        let t = table();
        let one = prefix_scan(&SignModel::constant(1), 1000, &t).unwrap();
        assert_eq!((one.final_sum, one.min_prefix, one.all_nonneg), (1000, 1, true));
        let lambda = prefix_scan(&SignModel::constant(-1), 10, &t).unwrap();
        // λ(1..10) = 1,-1,-1,1,-1,1,-1,-1,1,1
        assert_eq!(lambda.final_sum, 0);
        assert!(!lambda.all_nonneg);
        assert_eq!((lambda.min_prefix, lambda.argmin), (-2, 8));
        assert!(prefix_scan(&SignModel::constant(1), 0, &t).is_err());
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let t = PrimeTable::new(3_000_000).unwrap();
        for seed in [1u64, 2] {
            let m = SignModel::rademacher(seed);
            let x = 2_500_000;
            let par = prefix_scan(&m, x, &t).unwrap();
            let seq = PrefixScan::from_values(&m.values(x, &t).unwrap());
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn harmonic_scan_examples() {
        let t = table();
        let h = harmonic_scan(&SignModel::constant(1), 4, &t).unwrap();
        assert!((h.final_sum - 25.0 / 12.0).abs() < 1e-15);
        // worst sign pattern at x = 3
        let m = SignModel::constant(-1);
        let h = harmonic_scan(&m, 3, &t).unwrap();
        assert!((h.final_sum - 1.0 / 6.0).abs() < 1e-15);
        assert!(h.all_positive);
        let lambda = harmonic_scan(&m, 100_000, &t).unwrap();
        assert!(lambda.all_positive);
    }

    #[test]
    fn elementary_examples() {
        let t = table();
        let e = elementary_decomposition(&SignModel::constant(1), 10, &t).unwrap();
        assert_eq!(e.g_sum, 27);
        let h10: f64 = (1..=10).map(|n| 1.0 / n as f64).sum();
        assert!((e.frac_sum - (10.0 * h10 - 27.0)).abs() < 1e-12);
        assert!((e.frac_sum - 2.28968).abs() < 1e-5);
        assert!(e.residual <= 1e-12);
        for seed in 0..100 {
            let e = elementary_decomposition(&SignModel::rademacher(seed), 10_000, &t).unwrap();
            assert!(e.g_sum >= 0);
            assert!(e.g_sum >= e.prime_part);
            assert!(e.residual <= 1e-9);
        }
    }

    #[test]
    fn rough_decomposition_examples() {
        let t = table();
        let ctx = SmoothContext::new(10, &t).unwrap();
        for seed in 0..20 {
            let m = SignModel::rademacher(seed).with_forced_prefix(10);
            let (l, r) = rough_decomposition(&m, 100, &ctx).unwrap();
            assert_eq!(l, r, "seed {seed}");
        }
        let big = SmoothContext::new(500, &t).unwrap();
        let m = SignModel::rademacher(1).with_forced_prefix(500);
        assert_eq!(rough_decomposition(&m, 400, &big).unwrap(), (400, 400));
        let unforced = SignModel::rademacher(1);
        assert!(rough_decomposition(&unforced, 100, &ctx).is_err());
        let broken = SignModel::rademacher(1).with_forced_prefix(10).with_override(3, -1).unwrap();
        assert!(rough_decomposition(&broken, 100, &ctx).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn complete_multiplicativity(seed in any::<u64>(), m in 1u64..300, n in 1u64..300) {
            let t = PrimeTable::new(100_000).unwrap();
            let f = SignModel::rademacher(seed);
            prop_assert_eq!(f.f_at(m * n, &t).unwrap(), f.f_at(m, &t).unwrap() * f.f_at(n, &t).unwrap());
        }

        #[test]
        fn rough_identity_random(seed in any::<u64>(), x in 1u64..3000, y in 2u64..40) {
            let t = PrimeTable::new(5000).unwrap();
            let ctx = SmoothContext::new(y, &t).unwrap();
            let f = SignModel::rademacher(seed).with_forced_prefix(y);
            let (l, r) = rough_decomposition(&f, x, &ctx).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
