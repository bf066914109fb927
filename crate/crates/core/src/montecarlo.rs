//! Probability estimators over the random sign model.
//!
//! Every estimator runs in one of two modes. Monte Carlo mode evaluates
//! `trials` independent models, trial `t` using the seed
//! [`derive_seed`]`(seed, t)`; counts are merged as integers, so the result
//! is identical for any thread count. Exhaustive mode enumerates every sign
//! pattern on the primes the event depends on (at most
//! [`MAX_EXHAUSTIVE_PRIMES`] of them) and returns the exact probability.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::PrimeTable;
use crate::numeric::derive_seed;
use crate::randmult::{fill_values, HarmonicScan, PrefixScan, SignModel};
use crate::smooth::{SmoothContext, SmoothCounter};
use crate::{Error, Result};

/// Largest number of free primes exhaustive mode will enumerate (2^22 patterns).
pub const MAX_EXHAUSTIVE_PRIMES: usize = 22;

/// Normal quantile used for the interval attached to each [`Estimate`].
pub const DEFAULT_Z: f64 = 1.96;

/// Cap on the number of square-free rough terms in the deviation event.
pub const DEVIATION_TERM_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    MonteCarlo { trials: u64, seed: u64 },
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    MonteCarlo,
    Exhaustive,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::MonteCarlo => "monte_carlo",
            Mode::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub successes: u64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: Option<u64>,
    pub mode: Mode,
}

impl Estimate {
    fn monte_carlo(successes: u64, trials: u64, seed: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        let (lo, hi) = wilson_bounds(successes, trials, DEFAULT_Z);
        Self {
            p_hat,
            successes,
            trials,
            ci_low: lo.min(p_hat),
            ci_high: hi.max(p_hat),
            seed: Some(seed),
            mode: Mode::MonteCarlo,
        }
    }

    fn exhaustive(successes: u64, trials: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        Self { p_hat, successes, trials, ci_low: p_hat, ci_high: p_hat, seed: None, mode: Mode::Exhaustive }
    }

    /// Wilson interval at a different `z`. Exhaustive estimates stay degenerate.
    pub fn interval(&self, z: f64) -> Result<(f64, f64)> {
        match self.mode {
            Mode::Exhaustive => Ok((self.p_hat, self.p_hat)),
            Mode::MonteCarlo => wilson_interval(self.successes, self.trials, z),
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Wilson score interval for `successes` out of `trials`, clipped to `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::range("trials", trials, "trials >= 1"));
    }
    if successes > trials {
        return Err(Error::Invalid(format!("successes {successes} exceed trials {trials}")));
    }
    if !(z > 0.0) {
        return Err(Error::range("z", z, "z > 0"));
    }
    Ok(wilson_bounds(successes, trials, z))
}

fn wilson_bounds(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Integer score accumulated over trials: `Σ s` and `Σ s²`.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    sum: i64,
    sum_sq: u64,
    trials: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally { sum: self.sum + o.sum, sum_sq: self.sum_sq + o.sum_sq, trials: self.trials + o.trials }
    }

    fn one(s: i64) -> Tally {
        Tally { sum: s, sum_sq: (s * s) as u64, trials: 1 }
    }
}

/// Runs `score` over `values = f(0..=x)` for every trial model.
fn run_monte_carlo<S>(
    x: u64,
    table: &PrimeTable,
    trials: u64,
    seed: u64,
    forced_y: Option<u64>,
    score: S,
) -> Result<Tally>
where
    S: Fn(&[i8], &SignModel) -> i64 + Sync,
{
    if trials == 0 {
        return Err(Error::range("trials", trials, "trials >= 1"));
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    let tally = (0..trials)
        .into_par_iter()
        .map_init(Vec::new, |buf, t| {
            let mut model = SignModel::rademacher(derive_seed(seed, t));
            if let Some(y) = forced_y {
                model = model.with_forced_prefix(y);
            }
            fill_values(x, table, |p| model.sign(p), buf).expect("x checked against table");
            Tally::one(score(buf, &model))
        })
        .reduce(Tally::default, Tally::merge);
    Ok(tally)
}

/// Enumerates all sign patterns on `free` primes; every other prime takes
/// `fixed(p)`. `score` receives `f(0..=x)` and the prime-sign lookup.
fn run_exhaustive<S>(
    x: u64,
    table: &PrimeTable,
    free: &[u64],
    fixed: impl Fn(u64) -> i8 + Sync,
    score: S,
) -> Result<Tally>
where
    S: Fn(&[i8], &dyn Fn(u64) -> i8) -> i64 + Sync,
{
    if free.len() > MAX_EXHAUSTIVE_PRIMES {
        return Err(Error::Budget {
            what: "exhaustive free primes",
            needed: free.len() as u64,
            limit: MAX_EXHAUSTIVE_PRIMES as u64,
        });
    }
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    let patterns = 1u64 << free.len();
    let tally = (0..patterns)
        .into_par_iter()
        .map_init(Vec::new, |buf, bits| {
            let sign = |p: u64| match free.binary_search(&p) {
                Ok(i) => {
                    if bits >> i & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                }
                Err(_) => fixed(p),
            };
            fill_values(x, table, sign, buf).expect("x checked against table");
            Tally::one(score(buf, &sign))
        })
        .reduce(Tally::default, Tally::merge);
    Ok(tally)
}

fn to_estimate(tally: Tally, sampling: Sampling) -> Estimate {
    let successes = tally.sum as u64;
    match sampling {
        Sampling::MonteCarlo { seed, .. } => Estimate::monte_carlo(successes, tally.trials, seed),
        Sampling::Exhaustive => Estimate::exhaustive(successes, tally.trials),
    }
}

/// Probability that all partial sums of `f(n)` up to `x` are nonnegative,
/// given `f(p) = 1` for `p <= y`.
pub fn estimate_conditional_lplus(x: u64, y: u64, sampling: Sampling, table: &PrimeTable) -> Result<Estimate> {
    if y < 2 || y > x {
        return Err(Error::Invalid(format!("need 2 <= y <= x, got x = {x}, y = {y}")));
    }
    let event = |v: &[i8]| PrefixScan::from_values(v).all_nonneg as i64;
    let tally = match sampling {
        Sampling::MonteCarlo { trials, seed } => run_monte_carlo(x, table, trials, seed, Some(y), |v, _| event(v))?,
        Sampling::Exhaustive => {
            let free = table.primes_in(y, x);
            run_exhaustive(x, table, free, |_| 1, |v, _| event(v))?
        }
    };
    Ok(to_estimate(tally, sampling))
}

/// Probability that `Σ_{n ≤ x} f(n)/n < 0`.
pub fn estimate_negative_harmonic(x: u64, sampling: Sampling, table: &PrimeTable) -> Result<Estimate> {
    if x < 2 {
        return Err(Error::range("x", x, "x >= 2"));
    }
    let event = |v: &[i8]| (HarmonicScan::from_values(v).final_sum < 0.0) as i64;
    let tally = match sampling {
        Sampling::MonteCarlo { trials, seed } => run_monte_carlo(x, table, trials, seed, None, |v, _| event(v))?,
        Sampling::Exhaustive => run_exhaustive(x, table, table.primes_up_to(x), |_| 1, |v, _| event(v))?,
    };
    Ok(to_estimate(tally, sampling))
}

/// Probability that `Σ_{n ≤ y} f(n)/n > 0` for every `y <= cutoff`.
///
/// This truncated event contains the event "positive for every `y >= 1`",
/// so the estimate is an upper estimate of that probability, and it is
/// nonincreasing in `cutoff` for a fixed seed.
pub fn estimate_event_a(cutoff: u64, sampling: Sampling, table: &PrimeTable) -> Result<Estimate> {
    if cutoff < 1 {
        return Err(Error::range("cutoff", cutoff, "cutoff >= 1"));
    }
    let event = |v: &[i8]| HarmonicScan::from_values(v).all_positive as i64;
    let tally = match sampling {
        Sampling::MonteCarlo { trials, seed } => run_monte_carlo(cutoff, table, trials, seed, None, |v, _| event(v))?,
        Sampling::Exhaustive => run_exhaustive(cutoff, table, table.primes_up_to(cutoff), |_| 1, |v, _| event(v))?,
    };
    Ok(to_estimate(tally, sampling))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: u64,
    pub d: u64,
}

/// `Cov(1_A, f(d))` for square-free `d`, estimated as the mean of
/// `1_A · f(d)` (for `d > 1`, `E f(d) = 0`). `A` is truncated at `cutoff`
/// as in [`estimate_event_a`].
pub fn estimate_cov_a_fd(d: u64, cutoff: u64, sampling: Sampling, table: &PrimeTable) -> Result<CovarianceEstimate> {
    if d < 1 {
        return Err(Error::range("d", d, "d >= 1"));
    }
    if cutoff < 1 {
        return Err(Error::range("cutoff", cutoff, "cutoff >= 1"));
    }
    let fac = table.factorize(d)?;
    if !fac.is_square_free() {
        return Err(Error::NotSquareFree(d));
    }
    let trials = match sampling {
        Sampling::MonteCarlo { trials, .. } => trials,
        Sampling::Exhaustive => 0,
    };
    if d == 1 {
        let trials = if trials == 0 { 1 } else { trials };
        return Ok(CovarianceEstimate { value: 0.0, std_error: 0.0, trials, d });
    }
    let d_primes: Vec<u64> = fac.pairs().iter().map(|&(p, _)| p).collect();
    let tally = match sampling {
        Sampling::MonteCarlo { trials, seed } => run_monte_carlo(cutoff, table, trials, seed, None, |v, m| {
            let a = HarmonicScan::from_values(v).all_positive as i64;
            a * d_primes.iter().map(|&p| m.sign(p) as i64).product::<i64>()
        })?,
        Sampling::Exhaustive => {
            let mut free: Vec<u64> = table.primes_up_to(cutoff).to_vec();
            free.extend(d_primes.iter().copied().filter(|&p| p > cutoff));
            run_exhaustive(cutoff, table, &free, |_| 1, |v, sign| {
                let a = HarmonicScan::from_values(v).all_positive as i64;
                a * d_primes.iter().map(|&p| sign(p) as i64).product::<i64>()
            })?
        }
    };
    let n = tally.trials as f64;
    let mean = tally.sum as f64 / n;
    let std_error = match sampling {
        Sampling::Exhaustive => 0.0,
        Sampling::MonteCarlo { .. } if tally.trials > 1 => {
            let var = (tally.sum_sq as f64 - n * mean * mean) / (n - 1.0);
            (var.max(0.0) / n).sqrt()
        }
        Sampling::MonteCarlo { .. } => 0.0,
    };
    Ok(CovarianceEstimate { value: mean, std_error, trials: tally.trials, d })
}

/// Configuration of the exceptional-character term. The exceptional zero is
/// not decidable at desk scale, so it is supplied rather than detected.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SiegelConfig {
    e0: u8,
    beta1: Option<f64>,
}

impl SiegelConfig {
    pub fn new(e0: u8, beta1: Option<f64>) -> Result<Self> {
        match (e0, beta1) {
            (0, None) => Ok(Self { e0, beta1 }),
            (1, Some(b)) if b > 0.0 && b < 1.0 => Ok(Self { e0, beta1 }),
            _ => Err(Error::Invalid("SiegelConfig needs e0 = 0 without beta1, or e0 = 1 with beta1 in (0, 1)".into())),
        }
    }

    pub fn e0(&self) -> u8 {
        self.e0
    }

    pub fn beta1(&self) -> Option<f64> {
        self.beta1
    }

    /// `∫_x^{2x} u^{β₁−1}/log u du / (Li(2x) − Li(x))`, or 0 when `e0 = 0`.
    pub fn factor(&self, x: f64) -> f64 {
        let Some(beta) = self.beta1 else {
            return 0.0;
        };
        let num = simpson(|u| u.powf(beta - 1.0) / u.ln(), x, 2.0 * x, 4096);
        let den = simpson(|u| 1.0 / u.ln(), x, 2.0 * x, 4096);
        num / den
    }

    /// The covariance correction `E₀ · Cov · factor(x)`.
    pub fn correction(&self, covariance: f64, x: f64) -> f64 {
        self.e0 as f64 * covariance * self.factor(x)
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// The weights `Ψ*(x/n, y)` over square-free `n > 1` with `p(n) > y`, and
/// `Ψ*(x, y)` itself.
#[derive(Debug, Clone)]
pub struct DeviationWeights {
    pub psi_star_x: u64,
    pub terms: Vec<(u64, u64)>,
}

impl DeviationWeights {
    pub fn new(x: u64, ctx: &SmoothContext<'_>) -> Result<Self> {
        let table = ctx.table();
        if x > table.limit() {
            return Err(Error::InsufficientTable { n: x, limit: table.limit() });
        }
        let counter = SmoothCounter::new(ctx, x)?;
        let rough = table.primes_in(ctx.y(), x);
        let mut terms = Vec::new();
        let mut stack: Vec<(u64, usize)> = vec![(1, 0)];
        while let Some((n, start)) = stack.pop() {
            for (i, &p) in rough.iter().enumerate().skip(start) {
                let Some(m) = n.checked_mul(p).filter(|&m| m <= x) else {
                    break;
                };
                terms.push((m, counter.psi_star(x / m)));
                if terms.len() > DEVIATION_TERM_BUDGET {
                    return Err(Error::Budget {
                        what: "square-free rough terms",
                        needed: terms.len() as u64,
                        limit: DEVIATION_TERM_BUDGET as u64,
                    });
                }
                stack.push((m, i + 1));
            }
        }
        terms.sort_unstable();
        Ok(Self { psi_star_x: counter.psi_star(x), terms })
    }

    /// `Σ Ψ*(x/n, y) / Ψ*(x, y)`: for `delta` at or above this the event is
    /// impossible.
    pub fn max_ratio(&self) -> f64 {
        self.terms.iter().map(|&(_, w)| w).sum::<u64>() as f64 / self.psi_star_x as f64
    }

    fn sum(&self, values: &[i8]) -> i64 {
        self.terms.iter().map(|&(n, w)| values[n as usize] as i64 * w as i64).sum()
    }
}

/// Probability of `|Σ♭_{p(n) > y, n ≠ 1} f(n) Ψ*(x/n, y)| > δ Ψ*(x, y)` for
/// the model conditioned on `f(p) = 1` (`p <= y`).
pub fn estimate_deviation(x: u64, ctx: &SmoothContext<'_>, delta: f64, sampling: Sampling) -> Result<Estimate> {
    if !(delta >= 0.0) {
        return Err(Error::range("delta", delta, "delta >= 0"));
    }
    let weights = DeviationWeights::new(x, ctx)?;
    estimate_deviation_with(&weights, x, ctx, delta, sampling)
}

/// As [`estimate_deviation`] with precomputed weights, for sweeps over `delta`.
pub fn estimate_deviation_with(
    weights: &DeviationWeights,
    x: u64,
    ctx: &SmoothContext<'_>,
    delta: f64,
    sampling: Sampling,
) -> Result<Estimate> {
    let table = ctx.table();
    let threshold = delta * weights.psi_star_x as f64;
    let event = |v: &[i8]| ((weights.sum(v).unsigned_abs() as f64) > threshold) as i64;
    let tally = match sampling {
        Sampling::MonteCarlo { trials, seed } => {
            run_monte_carlo(x, table, trials, seed, Some(ctx.y()), |v, _| event(v))?
        }
        Sampling::Exhaustive => run_exhaustive(x, table, table.primes_in(ctx.y(), x), |_| 1, |v, _| event(v))?,
    };
    Ok(to_estimate(tally, sampling))
}
