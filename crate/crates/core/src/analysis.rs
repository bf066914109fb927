//! Exact Rademacher expectations and inequality oracles.
//!
//! For a Rademacher completely multiplicative `f`, `E f(m) = 1` when `m` is a
//! perfect square and 0 otherwise. Over a finite prime set `Q` every `n` is
//! summarised by its parity mask (bit `i` set when the `i`-th prime of `Q`
//! divides `n` to an odd power), and a product is a square exactly when the
//! masks XOR to zero. Expectations of products of sums then reduce to
//! XOR-convolutions of coefficient tables.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_small, PrimeTable};
use crate::numeric::{derive_seed, CompensatedSum};
use crate::randmult::{fill_values, SignModel};
use crate::{Error, Result};

/// Largest prime set enumerated pattern by pattern.
pub const MAX_ENUMERATION_PRIMES: usize = 22;

/// Real coefficients `b(n)` on a finite support with `|b(n)| <= 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientSeq {
    values: BTreeMap<u64, f64>,
}

impl CoefficientSeq {
    pub fn new(values: impl IntoIterator<Item = (u64, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, v) in values {
            if n == 0 {
                return Err(Error::range("n", n, "n >= 1"));
            }
            if !(v.abs() <= 1.0) {
                return Err(Error::range("b(n)", v, "|b(n)| <= 1"));
            }
            if v != 0.0 {
                *map.entry(n).or_insert(0.0) = v;
            }
        }
        Ok(Self { values: map })
    }

    /// `b = 1_S`.
    pub fn indicator(support: &[u64]) -> Result<Self> {
        Self::new(support.iter().map(|&n| (n, 1.0)))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.values.keys().copied()
    }

    pub fn get(&self, n: u64) -> f64 {
        self.values.get(&n).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.values.iter().map(|(&n, &v)| (n, v))
    }
}

/// A finite set `Q` of primes; sign patterns are enumerated with bit `i`
/// standing for the `i`-th smallest prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePrimeModel {
    primes: Vec<u64>,
}

impl FinitePrimeModel {
    pub fn new(mut primes: Vec<u64>) -> Result<Self> {
        primes.sort_unstable();
        primes.dedup();
        if let Some(&p) = primes.iter().find(|&&p| !is_prime_small(p)) {
            return Err(Error::NotPrime(p));
        }
        if primes.len() > 64 {
            return Err(Error::Budget { what: "prime set size", needed: primes.len() as u64, limit: 64 });
        }
        Ok(Self { primes })
    }

    /// The primes dividing some support element.
    pub fn covering(bs: &[CoefficientSeq]) -> Result<Self> {
        let mut primes = Vec::new();
        for n in bs.iter().flat_map(|b| b.support()) {
            let mut m = n;
            let mut p = 2;
            while p * p <= m {
                if m % p == 0 {
                    primes.push(p);
                    while m % p == 0 {
                        m /= p;
                    }
                }
                p += 1;
            }
            if m > 1 {
                primes.push(m);
            }
        }
        Self::new(primes)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Parity mask of `n` over `Q`, and whether `n` is square-free.
    pub fn mask(&self, n: u64) -> Result<(u64, bool)> {
        let mut m = n;
        let mut mask = 0u64;
        let mut square_free = true;
        for (i, &p) in self.primes.iter().enumerate() {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                mask |= 1 << i;
            }
            square_free &= e <= 1;
        }
        if m != 1 {
            return Err(Error::Invalid(format!("{n} does not factor over the prime set")));
        }
        Ok((mask, square_free))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub value: f64,
    /// Pattern enumeration; `None` when `|Q|` exceeds [`MAX_ENUMERATION_PRIMES`].
    pub by_enumeration: Option<f64>,
    /// Expansion keeping only square products.
    pub by_expansion: f64,
}

type MaskTable = Vec<(u64, f64)>;

fn mask_tables(bs: &[CoefficientSeq], q: &FinitePrimeModel, require_square_free: bool) -> Result<Vec<MaskTable>> {
    bs.iter()
        .map(|b| {
            b.iter()
                .map(|(n, v)| {
                    let (mask, sf) = q.mask(n)?;
                    if require_square_free && !sf {
                        return Err(Error::NotSquareFree(n));
                    }
                    Ok((mask, v))
                })
                .collect()
        })
        .collect()
}

fn by_expansion(tables: &[MaskTable]) -> f64 {
    let mut acc: HashMap<u64, f64> = HashMap::from([(0, 1.0)]);
    for t in tables {
        let mut next: HashMap<u64, f64> = HashMap::new();
        for (&m, &a) in &acc {
            for &(k, v) in t {
                *next.entry(m ^ k).or_insert(0.0) += a * v;
            }
        }
        acc = next;
    }
    acc.get(&0).copied().unwrap_or(0.0)
}

fn by_enumeration(tables: &[MaskTable], primes: usize) -> f64 {
    let total: f64 = (0..1u64 << primes)
        .into_par_iter()
        .map(|bits| {
            tables
                .iter()
                .map(|t| t.iter().map(|&(k, v)| if (k & bits).count_ones() % 2 == 1 { -v } else { v }).sum::<f64>())
                .product::<f64>()
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .collect::<CompensatedSum>()
        .value();
    total / (1u64 << primes) as f64
}

/// `E[∏_j Σ_n b_j(n) f(n)]` for `f` Rademacher on `Q`, by enumeration and by
/// expansion; the two must agree to `1e-12` relative to `∏_j Σ_n |b_j(n)|`.
pub fn exact_expectation_product(bs: &[CoefficientSeq], q: &FinitePrimeModel) -> Result<Expectation> {
    let tables = mask_tables(bs, q, false)?;
    expectation_from_tables(&tables, q.primes.len(), bs)
}

fn expectation_from_tables(tables: &[MaskTable], primes: usize, bs: &[CoefficientSeq]) -> Result<Expectation> {
    let expanded = by_expansion(tables);
    let enumerated = (primes <= MAX_ENUMERATION_PRIMES).then(|| by_enumeration(tables, primes));
    if let Some(e) = enumerated {
        let scale: f64 = bs.iter().map(|b| b.iter().map(|(_, v)| v.abs()).sum::<f64>()).product();
        if (e - expanded).abs() > 1e-12 * scale.max(1.0) {
            return Err(Error::Invalid(format!("enumeration {e} and expansion {expanded} disagree")));
        }
    }
    Ok(Expectation { value: expanded, by_enumeration: enumerated, by_expansion: expanded })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BonamiHalasz {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares `|E ∏_{j ≤ m} Σ♭ b_j(n) f(n)|` with
/// `(∏_j Σ♭ |b_j(n)|² (m − 1)^{ω(n)})^{1/2}`, `m = bs.len()`.
pub fn bonami_halasz_check(bs: &[CoefficientSeq], q: &FinitePrimeModel) -> Result<BonamiHalasz> {
    if bs.is_empty() {
        return Err(Error::Invalid("need at least one coefficient sequence".into()));
    }
    let tables = mask_tables(bs, q, true)?;
    let lhs = expectation_from_tables(&tables, q.primes.len(), bs)?.value.abs();
    let weight = (bs.len() - 1) as f64;
    let rhs = bs
        .iter()
        .zip(&tables)
        .map(|(b, t)| {
            b.iter().zip(t).map(|((_, v), &(mask, _))| v * v * weight.powi(mask.count_ones() as i32)).sum::<f64>()
        })
        .product::<f64>()
        .sqrt();
    Ok(BonamiHalasz { lhs, rhs, holds: lhs <= rhs + 1e-12 })
}

/// `2 exp(−2t² / Σ (b_i − a_i)²)`, or 0 when every range is degenerate.
pub fn hoeffding_bound(ranges: &[(f64, f64)], t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::range("t", t, "t > 0"));
    }
    let mut s = CompensatedSum::new();
    for &(a, b) in ranges {
        if !(b >= a) {
            return Err(Error::Invalid(format!("range [{a}, {b}] has b < a")));
        }
        s.add((b - a) * (b - a));
    }
    let s = s.value();
    Ok(if s == 0.0 { 0.0 } else { 2.0 * (-2.0 * t * t / s).exp() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoeffdingRow {
    pub t: f64,
    pub exceed: u64,
    pub trials: u64,
    pub frequency: f64,
    pub bound: f64,
}

/// Empirical `P(|Σ_p w_p f(p)| >= t)` over seeded Rademacher models next to
/// the Hoeffding bound with ranges `[−|w_p|, |w_p|]`.
pub fn hoeffding_probe(terms: &[(u64, f64)], thresholds: &[f64], trials: u64, seed: u64) -> Result<Vec<HoeffdingRow>> {
    if trials == 0 {
        return Err(Error::range("trials", trials, "trials >= 1"));
    }
    let ranges: Vec<(f64, f64)> = terms.iter().map(|&(_, w)| (-w.abs(), w.abs())).collect();
    let sums: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let model = SignModel::rademacher(derive_seed(seed, i));
            terms.iter().map(|&(p, w)| model.sign(p) as f64 * w).collect::<CompensatedSum>().value().abs()
        })
        .collect();
    thresholds
        .iter()
        .map(|&t| {
            let exceed = sums.iter().filter(|&&s| s >= t).count() as u64;
            Ok(HoeffdingRow {
                t,
                exceed,
                trials,
                frequency: exceed as f64 / trials as f64,
                bound: hoeffding_bound(&ranges, t)?,
            })
        })
        .collect()
}

/// `F_x(1 + it) = ∏_{p ≤ x} (1 − f(p)/p^{1+it})^{-1}`, summed in log form.
pub fn halasz_f(model: &SignModel, x: u64, t: f64, table: &PrimeTable) -> Result<Complex64> {
    if x < 2 {
        return Err(Error::range("x", x, "x >= 2"));
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    Ok(log_f(model, table.primes_up_to(x), t).exp())
}

fn log_f(model: &SignModel, primes: &[u64], t: f64) -> Complex64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for &p in primes {
        let s = model.sign(p) as f64;
        let lp = (p as f64).ln();
        let z = Complex64::from_polar(s / p as f64, -t * lp);
        let l = -(Complex64::new(1.0, 0.0) - z).ln();
        re.add(l.re);
        im.add(l.im);
    }
    Complex64::new(re.value(), im.value())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalaszL {
    /// Grid lower bound for `L(x)`.
    pub value: f64,
    pub resolution: f64,
    /// `(N, max over the grid of |F_x(1 + it)|)` for each `N`.
    pub sups: Vec<(i64, f64)>,
}

/// `L(x) = (Σ_{|N| ≤ (log x)² + 1} sup_{|t−N| ≤ 1/2} |F_x(1+it)|² / (N² + 1))^{1/2}`
/// with each sup replaced by a max over `t = N − 1/2 + k/K`, `K = ⌈1/resolution⌉`.
/// Halving the resolution refines the grid, so the value never decreases.
pub fn halasz_l(model: &SignModel, x: u64, resolution: f64, table: &PrimeTable) -> Result<HalaszL> {
    if !(resolution > 0.0 && resolution <= 1.0 / 16.0) {
        return Err(Error::range("resolution", resolution, "0 < resolution <= 1/16"));
    }
    if x < 2 {
        return Err(Error::range("x", x, "x >= 2"));
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    let primes = table.primes_up_to(x);
    let big_n = ((x as f64).ln().powi(2) + 1.0).floor() as i64;
    let steps = (1.0 / resolution).ceil() as i64;
    let sups: Vec<(i64, f64)> = (-big_n..=big_n)
        .into_par_iter()
        .map(|n| {
            let sup = (0..=steps)
                .map(|k| log_f(model, primes, n as f64 - 0.5 + k as f64 / steps as f64).re.exp())
                .fold(0.0, f64::max);
            (n, sup)
        })
        .collect();
    let total: CompensatedSum = sups.iter().map(|&(n, s)| s * s / ((n * n) as f64 + 1.0)).collect();
    Ok(HalaszL { value: total.value().sqrt(), resolution, sups })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    /// `Σ_{n ≤ x, P(n) ≤ x^0.99} f(n) / (x exp(Σ_{p ≤ x^0.99} f(p)/p))`.
    pub prop310_ratio: f64,
    /// `Σ_{n ≤ x, P(n) ≤ x^ε} f(n) / ((x / log log x) exp(Σ_{p ≤ x^ε} f(p)/p))`.
    pub conj1_ratio: f64,
    pub prop310_sum: i64,
    pub conj1_sum: i64,
}

/// The two smooth-restricted ratios; `f` is set to 0 on primes above the
/// respective cutoff in both the numerator and the prime sum.
pub fn ratio_checks(model: &SignModel, x: u64, eps: f64, table: &PrimeTable) -> Result<Ratios> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::range("eps", eps, "0 < eps < 1"));
    }
    if x < 16 {
        return Err(Error::range("x", x, "x >= 16 so that log log x > 0"));
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    let xf = x as f64;
    let restricted = |cut: f64| -> Result<(i64, f64)> {
        let sign = |p: u64| if p as f64 <= cut { model.sign(p) } else { 0 };
        let mut values = Vec::new();
        fill_values(x, table, sign, &mut values)?;
        let sum: i64 = values[1..].iter().map(|&v| v as i64).sum();
        let ps: CompensatedSum = table.primes_up_to(x).iter().map(|&p| sign(p) as f64 / p as f64).collect();
        Ok((sum, ps.value()))
    };
    let (s1, ps1) = restricted(xf.powf(0.99))?;
    let (s2, ps2) = restricted(xf.powf(eps))?;
    Ok(Ratios {
        prop310_ratio: s1 as f64 / (xf * ps1.exp()),
        conj1_ratio: s2 as f64 / (xf / xf.ln().ln() * ps2.exp()),
        prop310_sum: s1,
        conj1_sum: s2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    /// `E[(Σ_{n ≤ x} f(n))^q]` or its sample mean.
    pub moment: f64,
    pub qnorm: f64,
    /// Standard error of the sample mean; 0 in exact mode.
    pub std_error: f64,
    /// Exact number of square-product `q`-tuples (exact mode only).
    pub tuples: Option<u128>,
}

pub const MOMENT_EXACT_MAX_X: u64 = 30;
pub const MOMENT_EXACT_MAX_Q: u32 = 6;

/// `E[(Σ_{n ≤ x} f(n))^q]^{1/q}` for even `q`.
///
/// Exact mode counts `q`-tuples `n_1, …, n_q <= x` whose product is a square
/// by XOR-convolving the parity-mask histogram of `1..=x`.
pub fn moment_qnorm(x: u64, q: u32, mode: MomentMode, table: &PrimeTable) -> Result<Moment> {
    if q == 0 || q % 2 == 1 {
        return Err(Error::range("q", q, "even q >= 2"));
    }
    if x < 1 {
        return Err(Error::range("x", x, "x >= 1"));
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    match mode {
        MomentMode::Exact => {
            if x > MOMENT_EXACT_MAX_X || q > MOMENT_EXACT_MAX_Q {
                return Err(Error::Invalid(format!(
                    "exact moments need x <= {MOMENT_EXACT_MAX_X} and q <= {MOMENT_EXACT_MAX_Q}"
                )));
            }
            let model = FinitePrimeModel::new(table.primes_up_to(x).to_vec())?;
            let mut hist: HashMap<u64, u128> = HashMap::new();
            for n in 1..=x {
                *hist.entry(model.mask(n)?.0).or_insert(0) += 1;
            }
            let mut acc: HashMap<u64, u128> = HashMap::from([(0, 1)]);
            for _ in 0..q {
                let mut next: HashMap<u64, u128> = HashMap::new();
                for (&m, &a) in &acc {
                    for (&k, &c) in &hist {
                        *next.entry(m ^ k).or_insert(0) += a * c;
                    }
                }
                acc = next;
            }
            let tuples = acc.get(&0).copied().unwrap_or(0);
            let moment = tuples as f64;
            Ok(Moment { moment, qnorm: moment.powf(1.0 / q as f64), std_error: 0.0, tuples: Some(tuples) })
        }
        MomentMode::MonteCarlo { trials, seed } => {
            if trials < 2 {
                return Err(Error::range("trials", trials, "trials >= 2"));
            }
            let samples: Vec<f64> = (0..trials)
                .into_par_iter()
                .map_init(Vec::new, |buf, i| {
                    let model = SignModel::rademacher(derive_seed(seed, i));
                    fill_values(x, table, |p| model.sign(p), buf).expect("x checked against table");
                    let s: i64 = buf[1..].iter().map(|&v| v as i64).sum();
                    (s as f64).powi(q as i32)
                })
                .collect();
            let n = trials as f64;
            let mean = samples.iter().copied().collect::<CompensatedSum>().value() / n;
            let var = samples.iter().map(|v| (v - mean) * (v - mean)).collect::<CompensatedSum>().value() / (n - 1.0);
            Ok(Moment { moment: mean, qnorm: mean.powf(1.0 / q as f64), std_error: (var / n).sqrt(), tuples: None })
        }
    }
}

/// Terms `(p, 1)` for primes `p <= x`: the sum `Σ_{p ≤ x} f(p)`.
pub fn prime_sign_terms(x: u64, table: &PrimeTable) -> Vec<(u64, f64)> {
    table.primes_up_to(x).iter().map(|&p| (p, 1.0)).collect()
}

/// Terms `(p, 1/p)` for primes `lo <= p <= x`: the sum `Σ f(p)/p`.
pub fn prime_recip_terms(lo: f64, x: u64, table: &PrimeTable) -> Vec<(u64, f64)> {
    table.primes_up_to(x).iter().filter(|&&p| p as f64 >= lo).map(|&p| (p, 1.0 / p as f64)).collect()
}
