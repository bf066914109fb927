//! Smooth and rough numbers.
//!
//! Counts are exact: Ψ(x, y) is computed by depth-first recursion over the
//! y-smooth primes, where a branch whose remaining bound `t` satisfies
//! `p² > t` is closed in one step by counting the primes in `[p, t]`. The
//! cost is therefore far below Ψ itself.
//!
//! All arguments named `x` here are integers; Ψ(x, y) for real `x` equals
//! Ψ(⌊x⌋, y) and `⌊⌊x/a⌋/b⌋ = ⌊x/(ab)⌋`, so nothing is lost.

use std::sync::OnceLock;

use crate::arith::PrimeTable;
use crate::numeric::CompensatedSum;
use crate::randmult::SignModel;
use crate::{Error, Result};

/// Upper bound on the number of integers [`enumerate_smooth`] will produce.
pub const ENUMERATION_BUDGET: u64 = 100_000_000;

/// The smoothness parameter `y` together with the primes `<= y`.
#[derive(Debug, Clone, Copy)]
pub struct SmoothContext<'a> {
    y: u64,
    table: &'a PrimeTable,
    smooth_primes: &'a [u64],
}

impl<'a> SmoothContext<'a> {
    pub fn new(y: u64, table: &'a PrimeTable) -> Result<Self> {
        if y < 1 {
            return Err(Error::range("y", y, "y >= 1"));
        }
        if y > table.limit() {
            return Err(Error::InsufficientTable { n: y, limit: table.limit() });
        }
        Ok(Self { y, table, smooth_primes: table.primes_up_to(y) })
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn smooth_primes(&self) -> &'a [u64] {
        self.smooth_primes
    }

    pub fn table(&self) -> &'a PrimeTable {
        self.table
    }

    pub fn is_smooth(&self, n: u64) -> Result<bool> {
        Ok(self.table.factorize(n)?.greatest_prime().map_or(true, |p| p <= self.y))
    }
}

/// Ψ(x, y): the number of `n <= x` with every prime factor `<= y`.
pub fn psi(x: u64, ctx: &SmoothContext<'_>) -> u64 {
    if x == 0 {
        return 0;
    }
    if ctx.y >= x {
        return x;
    }
    count_smooth(x, ctx.smooth_primes)
}

fn count_smooth(x: u64, primes: &[u64]) -> u64 {
    let mut total = 1;
    for (i, &p) in primes.iter().enumerate() {
        if p > x {
            break;
        }
        if p * p > x {
            total += primes[i..].partition_point(|&q| q <= x) as u64;
            break;
        }
        total += count_smooth(x / p, &primes[i..]);
    }
    total
}

/// Ψ(x, y) by sieving greatest prime factors over `[1, x]`. Independent of
/// [`psi`]; requires `x <= table.limit()`.
pub fn psi_sieve(x: u64, ctx: &SmoothContext<'_>) -> Result<u64> {
    let table = ctx.table;
    if x > table.limit() {
        return Err(Error::InsufficientTable { n: x, limit: table.limit() });
    }
    let mut count = (x >= 1) as u64;
    for n in 2..=x {
        let mut m = n;
        let mut gpf = 0;
        while m > 1 {
            let p = table.spf_unchecked(m);
            gpf = p;
            m /= p;
        }
        if gpf <= ctx.y {
            count += 1;
        }
    }
    Ok(count)
}

/// The y-smooth integers in `[1, x]`, ascending.
pub fn enumerate_smooth(x: u64, ctx: &SmoothContext<'_>) -> Result<Vec<u64>> {
    let size = psi(x, ctx);
    if size > ENUMERATION_BUDGET {
        return Err(Error::Budget { what: "smooth enumeration", needed: size, limit: ENUMERATION_BUDGET });
    }
    let mut out = Vec::with_capacity(size as usize);
    if x >= 1 {
        out.push(1);
        for_each_smooth(x, ctx.smooth_primes, 1, &mut |n| out.push(n));
    }
    out.sort_unstable();
    Ok(out)
}

// Visits every n = base * m <= bound * base with m > 1 built from `primes`
// (non-decreasing), calling `visit` once per n.
fn for_each_smooth(bound: u64, primes: &[u64], base: u64, visit: &mut impl FnMut(u64)) {
    for (i, &p) in primes.iter().enumerate() {
        if p > bound {
            break;
        }
        let n = base * p;
        visit(n);
        for_each_smooth(bound / p, &primes[i..], n, visit);
    }
}

// Same walk, carrying f(n).
fn for_each_smooth_signed(
    bound: u64,
    primes: &[u64],
    signs: &[i8],
    base: u64,
    sign: i8,
    visit: &mut impl FnMut(u64, i8),
) {
    for (i, &p) in primes.iter().enumerate() {
        if p > bound {
            break;
        }
        let n = base * p;
        let s = sign * signs[i];
        visit(n, s);
        for_each_smooth_signed(bound / p, &primes[i..], &signs[i..], n, s, visit);
    }
}

/// Integers `m <= bound` with `p(m) > y`, including `m = 1`, ascending.
fn rough_up_to(bound: u64, ctx: &SmoothContext<'_>) -> Result<Vec<u64>> {
    let table = ctx.table;
    if bound > table.limit() {
        return Err(Error::InsufficientTable { n: bound, limit: table.limit() });
    }
    let primes = table.primes_in(ctx.y, bound);
    let mut out = vec![1];
    for_each_smooth(bound, primes, 1, &mut |m| out.push(m));
    out.sort_unstable();
    Ok(out)
}

/// Ψ*(x, y) = Σ_{p(m) > y} Ψ(x/m², y), with `p(1) = +∞`.
pub fn psi_star(x: u64, ctx: &SmoothContext<'_>) -> Result<u64> {
    let root = crate::numeric::isqrt(x);
    let ms = rough_up_to(root, ctx)?;
    Ok(ms.iter().map(|&m| psi(x / (m * m), ctx)).sum())
}

/// Tabulated Ψ(t, y) for all `t <= x_max`, plus the rough moduli needed for
/// Ψ*(t, y). Built once and queried many times by the decomposition code.
#[derive(Debug, Clone)]
pub struct SmoothCounter {
    cum: Vec<u32>,
    rough: Vec<u64>,
}

impl SmoothCounter {
    pub fn new(ctx: &SmoothContext<'_>, x_max: u64) -> Result<Self> {
        if x_max > u32::MAX as u64 {
            return Err(Error::range("x_max", x_max, "x_max < 2^32"));
        }
        let mut marks = vec![0u32; x_max as usize + 1];
        if x_max >= 1 {
            marks[1] = 1;
            for_each_smooth(x_max, ctx.smooth_primes, 1, &mut |n| marks[n as usize] = 1);
        }
        let mut acc = 0u32;
        for m in marks.iter_mut() {
            acc += *m;
            *m = acc;
        }
        let rough = rough_up_to(crate::numeric::isqrt(x_max), ctx)?;
        Ok(Self { cum: marks, rough })
    }

    #[inline]
    pub fn psi(&self, t: u64) -> u64 {
        self.cum[t as usize] as u64
    }

    pub fn psi_star(&self, t: u64) -> u64 {
        let mut total = 0;
        for &m in &self.rough {
            let sq = m * m;
            if sq > t {
                break;
            }
            total += self.psi(t / sq);
        }
        total
    }
}

/// Ψ_f(x, y) = Σ_{n ≤ x, P(n) ≤ y} f(n).
pub fn psi_f(x: u64, ctx: &SmoothContext<'_>, model: &SignModel) -> i64 {
    if x == 0 {
        return 0;
    }
    let primes = ctx.smooth_primes;
    let signs: Vec<i8> = primes.iter().map(|&p| model.sign(p)).collect();
    // suffix-friendly prefix sums of signs for the p² > t leaves
    let mut prefix = Vec::with_capacity(signs.len() + 1);
    prefix.push(0i64);
    for &s in &signs {
        prefix.push(prefix.last().unwrap() + s as i64);
    }
    signed_count(x, 0, primes, &signs, &prefix)
}

fn signed_count(x: u64, start: usize, primes: &[u64], signs: &[i8], prefix: &[i64]) -> i64 {
    let mut total = 1i64;
    for i in start..primes.len() {
        let p = primes[i];
        if p > x {
            break;
        }
        if p * p > x {
            let end = start + primes[start..].partition_point(|&q| q <= x);
            total += prefix[end] - prefix[i];
            break;
        }
        total += signs[i] as i64 * signed_count(x / p, i, primes, signs, prefix);
    }
    total
}

/// Absolute residuals of the Buchstab-type identity
/// `Ψ(x,y) log x = ∫₁ˣ Ψ(t,y)/t dt + Σ_{p^m ≤ x, p ≤ y} Ψ(x/p^m, y) log p`
/// and of its f-weighted analogue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuchstabResiduals {
    pub unsigned_residual: f64,
    pub signed_residual: f64,
    /// `max(1, Ψ(x,y) log x)`; divide by it for a relative residual.
    pub unsigned_scale: f64,
    /// `max(1, Σ_{n∈S(x,y)} log n)`, the natural size of the signed sides.
    pub signed_scale: f64,
}

impl BuchstabResiduals {
    pub fn unsigned_relative(&self) -> f64 {
        self.unsigned_residual / self.unsigned_scale
    }

    pub fn signed_relative(&self) -> f64 {
        self.signed_residual / self.signed_scale
    }
}

/// Evaluates both sides of the unsigned and signed identities. The integral
/// is the exact step-function value `Σ_{n ∈ S(x,y)} log(x/n)`. Without a
/// model the signed form uses `f ≡ 1`.
pub fn buchstab_residuals(
    x: u64,
    ctx: &SmoothContext<'_>,
    model: Option<&SignModel>,
) -> Result<BuchstabResiduals> {
    if x < 1 {
        return Err(Error::range("x", x, "x >= 1"));
    }
    let size = psi(x, ctx);
    if size > ENUMERATION_BUDGET {
        return Err(Error::Budget { what: "smooth enumeration", needed: size, limit: ENUMERATION_BUDGET });
    }
    let one = SignModel::constant(1);
    let model = model.unwrap_or(&one);
    let primes = ctx.smooth_primes;
    let signs: Vec<i8> = primes.iter().map(|&p| model.sign(p)).collect();

    let mut smooth: Vec<(u64, i8)> = Vec::with_capacity(size as usize);
    smooth.push((1, 1));
    for_each_smooth_signed(x, primes, &signs, 1, 1, &mut |n, s| smooth.push((n, s)));
    smooth.sort_unstable_by_key(|&(n, _)| n);

    let mut signed_prefix = Vec::with_capacity(smooth.len() + 1);
    signed_prefix.push(0i64);
    for &(_, s) in &smooth {
        signed_prefix.push(signed_prefix.last().unwrap() + s as i64);
    }
    let count_le = |t: u64| smooth.partition_point(|&(n, _)| n <= t);

    let log_x = (x as f64).ln();
    let mut integral = CompensatedSum::new();
    let mut integral_f = CompensatedSum::new();
    let mut log_total = CompensatedSum::new();
    for &(n, s) in &smooth {
        let l = (x as f64 / n as f64).ln();
        integral.add(l);
        integral_f.add(s as f64 * l);
        log_total.add((n as f64).ln());
    }

    let mut prime_power = CompensatedSum::new();
    let mut prime_power_f = CompensatedSum::new();
    for (i, &p) in primes.iter().enumerate() {
        if p > x {
            break;
        }
        let lp = (p as f64).ln();
        let mut pm = p;
        let mut fpm = signs[i];
        loop {
            let idx = count_le(x / pm);
            prime_power.add(idx as f64 * lp);
            prime_power_f.add((fpm as i64 * signed_prefix[idx]) as f64 * lp);
            match pm.checked_mul(p) {
                Some(next) if next <= x => {
                    pm = next;
                    fpm *= signs[i];
                }
                _ => break,
            }
        }
    }

    let psi_x = smooth.len() as f64;
    let psi_f_x = *signed_prefix.last().unwrap() as f64;
    let unsigned_residual = (psi_x * log_x - (integral.value() + prime_power.value())).abs();
    let signed_residual = (psi_f_x * log_x - (integral_f.value() + prime_power_f.value())).abs();
    Ok(BuchstabResiduals {
        unsigned_residual,
        signed_residual,
        unsigned_scale: (psi_x * log_x).max(1.0),
        signed_scale: log_total.value().max(1.0),
    })
}

/// Σ_{p ≤ y} log p / (p^α − 1).
fn alpha_lhs(alpha: f64, primes: &[u64]) -> f64 {
    primes
        .iter()
        .map(|&p| {
            let lp = (p as f64).ln();
            lp / (alpha * lp).exp_m1()
        })
        .sum()
}

/// The saddle point α(x, y): the unique root of
/// `Σ_{p ≤ y} log p / (p^α − 1) = log x`.
///
/// Bisection on the strictly decreasing left side, starting from
/// `[1e-9, 2]` and widening the bracket if the root lies outside it.
pub fn solve_alpha(x: f64, ctx: &SmoothContext<'_>, tol: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::range("x", x, "x > 1"));
    }
    if ctx.y < 2 {
        return Err(Error::range("y", ctx.y, "y >= 2"));
    }
    if !(tol > 0.0) {
        return Err(Error::range("tol", tol, "tol > 0"));
    }
    let primes = ctx.smooth_primes;
    let target = x.ln();
    let (mut lo, mut hi) = (1e-9_f64, 2.0_f64);
    while alpha_lhs(hi, primes) > target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Invalid("alpha bracket does not close".into()));
        }
    }
    while alpha_lhs(lo, primes) < target {
        lo /= 1e3;
        if lo < 1e-300 {
            return Err(Error::Invalid("alpha bracket does not close".into()));
        }
    }
    let mut best = (f64::INFINITY, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = alpha_lhs(mid, primes);
        let r = (v - target).abs();
        if r < best.0 {
            best = (r, mid);
        }
        if r <= tol * target {
            return Ok(mid);
        }
        if v > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    if best.0 <= tol * target {
        Ok(best.1)
    } else {
        Err(Error::Invalid(format!(
            "alpha bisection reached residual {:.3e}, above tol·log x = {:.3e}",
            best.0,
            tol * target
        )))
    }
}

/// Residual `|Σ_{p ≤ y} log p/(p^α − 1) − log x|` of a candidate α.
pub fn alpha_residual(alpha: f64, x: f64, ctx: &SmoothContext<'_>) -> f64 {
    (alpha_lhs(alpha, ctx.smooth_primes) - x.ln()).abs()
}

/// Main term `log(1 + y/log x) / log y` of the α(x, y) asymptotic.
pub fn alpha_asymptotic(x: f64, y: f64) -> f64 {
    (1.0 + y / x.ln()).ln() / y.ln()
}

// ---------------------------------------------------------------------------
// Dickman's function

/// Grid points per unit of `u`.
const DICKMAN_STEPS: usize = 1 << 10;
pub const DICKMAN_U_MAX: f64 = 50.0;

/// ρ(u) tabulated on a `2^-10` grid.
///
/// On each `[k, k+1]` the table integrates `ρ'(u) = −ρ(u−1)/u` panel by
/// panel with a four-point cubic rule whose stencil never leaves the
/// interval, so the kinks of ρ at the integers are never straddled. The
/// integral identity `uρ(u) = ∫_{u−1}^u ρ` is therefore an independent check
/// rather than a restatement of the construction.
#[derive(Debug, Clone)]
pub struct DickmanTable {
    u_max: f64,
    values: Vec<f64>,
    // ∫_0^{u_j} ρ at every grid point
    cumulative: Vec<f64>,
}

// weights for ∫ over panel [i, i+1] from four nodes, in units of the step
const W_START: [f64; 4] = [9.0 / 24.0, 19.0 / 24.0, -5.0 / 24.0, 1.0 / 24.0]; // nodes i..i+3
const W_MID: [f64; 4] = [-1.0 / 24.0, 13.0 / 24.0, 13.0 / 24.0, -1.0 / 24.0]; // nodes i-1..i+2
const W_END: [f64; 4] = [1.0 / 24.0, -5.0 / 24.0, 19.0 / 24.0, 9.0 / 24.0]; // nodes i-2..i+1

fn panel_integral(g: impl Fn(usize) -> f64, i: usize, per_unit: usize) -> f64 {
    // i is the panel index local to its unit interval, g takes local nodes.
    if i == 0 {
        (0..4).map(|k| W_START[k] * g(k)).sum()
    } else if i == per_unit - 1 {
        (0..4).map(|k| W_END[k] * g(i - 2 + k)).sum()
    } else {
        (0..4).map(|k| W_MID[k] * g(i - 1 + k)).sum()
    }
}

impl DickmanTable {
    pub fn new(u_max: f64) -> Result<Self> {
        if !(1.0..=1000.0).contains(&u_max) {
            return Err(Error::range("u_max", u_max, "1 <= u_max <= 1000"));
        }
        let n = DICKMAN_STEPS;
        let h = 1.0 / n as f64;
        let units = u_max.ceil() as usize;
        let len = units * n + 1;
        let mut values = vec![1.0; len];
        for k in 1..units {
            let base = k * n;
            for i in 0..n {
                let g = |local: usize| {
                    let j = base + local;
                    values[j - n] / (j as f64 * h)
                };
                let step = h * panel_integral(g, i, n);
                values[base + i + 1] = values[base + i] - step;
            }
        }
        let mut cumulative = vec![0.0; len];
        let mut acc = CompensatedSum::new();
        for k in 0..units {
            let base = k * n;
            for i in 0..n {
                acc.add(h * panel_integral(|local| values[base + local], i, n));
                cumulative[base + i + 1] = acc.value();
            }
        }
        Ok(Self { u_max, values, cumulative })
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn step(&self) -> f64 {
        1.0 / DICKMAN_STEPS as f64
    }

    pub fn grid(&self) -> &[f64] {
        &self.values
    }

    fn check_u(&self, u: f64) -> Result<()> {
        if u.is_nan() || u < 0.0 || u > self.u_max {
            Err(Error::range("u", u, "0 <= u <= u_max"))
        } else {
            Ok(())
        }
    }

    // Four interpolation nodes inside the unit interval holding u, and the
    // position of u in node units relative to the first.
    fn stencil(&self, u: f64) -> (usize, f64) {
        let n = DICKMAN_STEPS;
        let pos = u * n as f64;
        let last = self.values.len() - 1;
        let j = (pos.floor() as usize).min(last - 1);
        let k = j / n;
        let lo = k * n;
        let hi = ((k + 1) * n).min(last);
        let j0 = j.saturating_sub(1).clamp(lo, hi - 3);
        (j0, pos - j0 as f64)
    }

    fn lagrange(&self, j0: usize, s: f64) -> f64 {
        let v = &self.values[j0..j0 + 4];
        let (a, b, c, d) = (s, s - 1.0, s - 2.0, s - 3.0);
        -v[0] * b * c * d / 6.0 + v[1] * a * c * d / 2.0 - v[2] * a * b * d / 2.0 + v[3] * a * b * c / 6.0
    }

    pub fn rho(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        if u <= 1.0 {
            return Ok(1.0);
        }
        let (j0, s) = self.stencil(u);
        Ok(self.lagrange(j0, s))
    }

    /// ∫_0^v ρ(t) dt.
    fn integral_to(&self, v: f64) -> f64 {
        if v <= 1.0 {
            return v.max(0.0);
        }
        let n = DICKMAN_STEPS;
        let h = 1.0 / n as f64;
        let last = self.values.len() - 1;
        let j = ((v * n as f64).floor() as usize).min(last);
        let start = j as f64 * h;
        let width = v - start;
        if width <= 0.0 {
            return self.cumulative[j];
        }
        // 3-point Gauss–Legendre on the local cubic interpolant (exact).
        let (j0, _) = self.stencil(start + 0.5 * width);
        let nodes = [-(0.6f64).sqrt(), 0.0, (0.6f64).sqrt()];
        let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        let mid = start + 0.5 * width;
        let part: f64 = nodes
            .iter()
            .zip(weights)
            .map(|(&z, w)| {
                let t = mid + 0.5 * width * z;
                w * self.lagrange(j0, t * n as f64 - j0 as f64)
            })
            .sum();
        self.cumulative[j] + 0.5 * width * part
    }

    /// `∫_a^b ρ(t) dt` for `0 <= a <= b <= u_max`.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        self.check_u(a)?;
        self.check_u(b)?;
        if a > b {
            return Err(Error::Invalid("integral bounds out of order".into()));
        }
        Ok(self.integral_to(b) - self.integral_to(a))
    }

    /// `|uρ(u) − ∫_{u−1}^u ρ(t) dt|` for `u >= 1`.
    pub fn identity_residual(&self, u: f64) -> Result<f64> {
        if !(u >= 1.0) {
            return Err(Error::range("u", u, "u >= 1"));
        }
        Ok((u * self.rho(u)? - self.integral(u - 1.0, u)?).abs())
    }
}

fn default_dickman() -> &'static DickmanTable {
    static TABLE: OnceLock<DickmanTable> = OnceLock::new();
    TABLE.get_or_init(|| DickmanTable::new(DICKMAN_U_MAX).expect("valid default u_max"))
}

/// ρ(u) for `0 <= u <= 50` from a shared table.
pub fn dickman_rho(u: f64) -> Result<f64> {
    default_dickman().rho(u)
}

pub fn dickman_identity_residual(u: f64) -> Result<f64> {
    default_dickman().identity_residual(u)
}

// ---------------------------------------------------------------------------
// Inequalities

/// `Ψ(x+z, y) − Ψ(x, y) <= Ψ(z, y) + 1`.
pub fn triangle_holds(x: u64, z: u64, ctx: &SmoothContext<'_>) -> bool {
    psi(x + z, ctx) - psi(x, ctx) <= psi(z, ctx) + 1
}

/// `Ψ(x, y) >= x^{1 − log log x / log y}` for `x >= 4`, `2 <= y <= x`.
/// Returns `(holds, Ψ(x, y), lower bound)`.
pub fn konyagin_check(x: u64, ctx: &SmoothContext<'_>) -> Result<(bool, u64, f64)> {
    if x < 4 || ctx.y < 2 || ctx.y > x {
        return Err(Error::Invalid(format!("need x >= 4 and 2 <= y <= x, got x = {x}, y = {}", ctx.y)));
    }
    let xf = x as f64;
    let bound = xf.powf(1.0 - xf.ln().ln() / (ctx.y as f64).ln());
    let count = psi(x, ctx);
    Ok((count as f64 >= bound, count, bound))
}

/// `Ψ(x/t, y) t^α / Ψ(x, y)` for each `t` in `ts` (with `1 <= t <= x`).
pub fn alpha_ratios(x: u64, ctx: &SmoothContext<'_>, ts: &[f64]) -> Result<Vec<(f64, f64)>> {
    let alpha = solve_alpha(x as f64, ctx, 1e-12)?;
    let base = psi(x, ctx) as f64;
    ts.iter()
        .map(|&t| {
            if !(t >= 1.0 && t <= x as f64) {
                return Err(Error::range("t", t, "1 <= t <= x"));
            }
            let sub = psi((x as f64 / t).floor() as u64, ctx) as f64;
            Ok((t, sub * t.powf(alpha) / base))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `(x, z, holds)` per supplied pair.
    pub triangle: Vec<(u64, u64, bool)>,
    pub konyagin_holds: bool,
    pub konyagin_psi: u64,
    pub konyagin_bound: f64,
    pub alpha: f64,
    pub ratios: Vec<(f64, f64)>,
    /// Largest observed ratio. Reported only; the implied constant is unknown.
    pub ratio_sup: f64,
}

pub fn bound_checks(x: u64, ctx: &SmoothContext<'_>, pairs: &[(u64, u64)], ts: &[f64]) -> Result<BoundReport> {
    let triangle = pairs.iter().map(|&(a, z)| (a, z, triangle_holds(a, z, ctx))).collect();
    let (konyagin_holds, konyagin_psi, konyagin_bound) = konyagin_check(x, ctx)?;
    let ratios = alpha_ratios(x, ctx, ts)?;
    let ratio_sup = ratios.iter().map(|&(_, r)| r).fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundReport {
        triangle,
        konyagin_holds,
        konyagin_psi,
        konyagin_bound,
        alpha: solve_alpha(x as f64, ctx, 1e-12)?,
        ratios,
        ratio_sup,
    })
}
