//! Command-line front end for the `rmflab` binary.
//!
//! Each run produces one [`RunRecord`]: the subcommand, an echo of its
//! parameters, the result payload, the library version and the wall time.
//! JSON output is one record per line; CSV output is a header plus rows.
//! Reals are printed with 17 significant digits. The payload depends only on
//! the parameters (never on the thread count).
//!
//! Exit codes: 0 on success, 1 when a `check` suite reports a failure, 2 on
//! argument, validation or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analysis::{self, MomentMode};
use crate::arith::PrimeTable;
use crate::characters::{self, ResidueSpec, ScanOptions, SCAN_CSV_HEADER};
use crate::montecarlo::{self, DeviationWeights, Estimate, Sampling, SiegelConfig};
use crate::numeric::{derive_seed, fmt_real, isqrt};
use crate::randmult::{self, SignModel};
use crate::smooth::{self, SmoothContext};
use crate::Error;

/// Environment variable consulted for the worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "RMFLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "rmflab", version, about = "Random multiplicative functions, smooth numbers and character sums")]
pub struct Cli {
    /// Worker threads; overrides RMFLAB_THREADS. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count y-smooth integers up to x.
    Psi(PsiArgs),
    /// Solve the saddle-point equation for α(x, y).
    Alpha(AlphaArgs),
    /// Evaluate Dickman's ρ(u).
    Rho(RhoArgs),
    /// Estimate event probabilities of the random model.
    #[command(subcommand)]
    Simulate(Simulate),
    /// Legendre-symbol survey of the primes in (x, 2x].
    Scan(ScanArgs),
    /// Residue classes mod k = 8·∏_{2<q≤N} q with prescribed quadratic symbols.
    Residues(ResiduesArgs),
    /// q-th moment norm of Σ_{n≤x} f(n).
    Moments(MomentsArgs),
    /// Halász's F_x(1+it) and the grid lower bound for L(x).
    Halasz(HalaszArgs),
    /// Smooth-restricted mean-value ratios.
    Ratios(RatiosArgs),
    /// Run a self-check suite.
    Check(CheckArgs),
}

#[derive(Debug, Subcommand)]
pub enum Simulate {
    /// P(all partial sums of f up to x are >= 0 | f(p) = 1 for p <= y).
    Lplus(LplusArgs),
    /// P(Σ_{n≤x} f(n)/n < 0).
    HarmonicNegative(HarmonicNegativeArgs),
    /// P(Σ_{n≤t} f(n)/n > 0 for all t <= cutoff).
    EventA(EventAArgs),
    /// Cov(1_A, f(d)) for square-free d.
    Covariance(CovarianceArgs),
    /// P(|Σ♭_{p(n)>y} f(n) Ψ*(x/n, y)| > δ Ψ*(x, y)).
    Deviation(DeviationArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SamplingArgs {
    /// Monte Carlo trials.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Master seed; required unless --exhaustive.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Enumerate every sign pattern instead of sampling (at most 22 free primes).
    #[arg(long)]
    pub exhaustive: bool,
}

impl SamplingArgs {
    fn sampling(&self) -> Result<Sampling, String> {
        if self.exhaustive {
            return Ok(Sampling::Exhaustive);
        }
        let seed = self.seed.ok_or("--seed is required for Monte Carlo runs (or pass --exhaustive)")?;
        Ok(Sampling::MonteCarlo { trials: self.trials, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedModel {
    /// f ≡ 1.
    One,
    /// f(p) = −1 for every p, i.e. f = λ.
    Liouville,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModelArgs {
    /// Seed of a Rademacher model.
    #[arg(long, conflicts_with = "model")]
    pub seed: Option<u64>,
    /// A deterministic model instead of a seeded one.
    #[arg(long, value_enum)]
    pub model: Option<FixedModel>,
}

impl ModelArgs {
    fn model(&self) -> Result<SignModel, String> {
        match (self.model, self.seed) {
            (Some(FixedModel::One), _) => Ok(SignModel::constant(1)),
            (Some(FixedModel::Liouville), _) => Ok(SignModel::constant(-1)),
            (None, Some(seed)) => Ok(SignModel::rademacher(seed)),
            (None, None) => Err("--seed or --model is required".into()),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PsiArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub y: u64,
    /// Also report Ψ*(x, y).
    #[arg(long)]
    pub star: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AlphaArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: u64,
    /// Residual tolerance relative to log x.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RhoArgs {
    #[arg(long)]
    pub u: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LplusArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub y: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HarmonicNegativeArgs {
    #[arg(long)]
    pub x: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EventAArgs {
    /// Largest t checked; the estimate is for the truncated event.
    #[arg(long)]
    pub cutoff: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CovarianceArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub cutoff: u64,
    /// Exceptional-character flag E₀ (0 or 1).
    #[arg(long, default_value_t = 0)]
    pub e0: u8,
    /// Exceptional zero β₁, required when --e0 1.
    #[arg(long)]
    pub beta1: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DeviationArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub y: u64,
    #[arg(long)]
    pub delta: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub x: u64,
    /// Largest certificate length per prime.
    #[arg(long, default_value_t = 1_000_000_000)]
    pub y0_cap: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResiduesArgs {
    /// Largest prime q constrained (3 <= N <= 43).
    #[arg(long = "n")]
    pub n: u64,
    /// Sign pattern over the keys −1, 2, 3, 5, …: bit i set means sign −1.
    #[arg(long, default_value_t = 0)]
    pub pattern: u64,
    /// Report only the count, not the residues.
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MomentsArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub q: u32,
    /// Exact tuple count (x <= 30, q <= 6).
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HalaszArgs {
    #[arg(long)]
    pub x: u64,
    /// Grid spacing in t (at most 1/16).
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub grid: f64,
    /// Point at which F_x(1+it) is reported.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RatiosArgs {
    #[arg(long)]
    pub x: u64,
    #[arg(long)]
    pub eps: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Seeds per randomised identity.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Header plus rows for CSV emission.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn from_object(payload: &Value) -> Self {
        let mut t = CsvTable::default();
        let mut row = Vec::new();
        if let Value::Object(map) = payload {
            for (k, v) in map {
                if !matches!(v, Value::Array(_) | Value::Object(_)) {
                    t.header.push(k.clone());
                    row.push(csv_cell(v));
                }
            }
        }
        t.rows.push(row);
        t
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => json_text(other),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub subcommand: String,
    pub params: Value,
    pub payload: Value,
    pub wall_time_s: f64,
    pub version: String,
    /// A `check` suite reported at least one failure.
    pub failed: bool,
    pub csv: CsvTable,
}

impl RunRecord {
    /// The record as one JSON line (without trailing newline).
    pub fn json_line(&self) -> String {
        let mut m = Map::new();
        m.insert("subcommand".into(), Value::String(self.subcommand.clone()));
        m.insert("params".into(), self.params.clone());
        m.insert("payload".into(), self.payload.clone());
        m.insert("version".into(), Value::String(self.version.clone()));
        m.insert("wall_time_s".into(), json!(self.wall_time_s));
        json_text(&Value::Object(m))
    }

    pub fn payload_json(&self) -> String {
        json_text(&self.payload)
    }
}

/// JSON text with every non-integer number printed to 17 significant digits.
pub fn json_text(v: &Value) -> String {
    let mut s = String::new();
    write_json(v, &mut s);
    s
}

fn write_json(v: &Value, out: &mut String) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            out.push_str(&fmt_real(x));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_json(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_json(item, out);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn real(x: f64) -> Value {
    json!(x)
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

impl From<&str> for CliError {
    fn from(s: &str) -> Self {
        CliError::Usage(s.into())
    }
}

fn table_for(limit: u64) -> Result<PrimeTable, CliError> {
    Ok(PrimeTable::new(limit.max(2))?)
}

fn estimate_payload(e: &Estimate) -> Value {
    json!({
        "p_hat": real(e.p_hat),
        "successes": e.successes,
        "trials": e.trials,
        "ci_low": real(e.ci_low),
        "ci_high": real(e.ci_high),
        "seed": e.seed,
        "mode": e.mode.as_str(),
    })
}

fn params_of<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

/// Runs one parsed command. The caller owns the thread pool.
pub fn dispatch(command: &Command) -> Result<RunRecord, CliError> {
    let start = Instant::now();
    let (name, params, payload, csv, failed) = match command {
        Command::Psi(a) => {
            let table = table_for(a.y.max(isqrt(a.x)))?;
            let ctx = SmoothContext::new(a.y, &table)?;
            let mut p = json!({ "psi": smooth::psi(a.x, &ctx) });
            if a.star {
                p["psi_star"] = json!(smooth::psi_star(a.x, &ctx)?);
            }
            ("psi", params_of(a), p, None, false)
        }
        Command::Alpha(a) => {
            let table = table_for(a.y)?;
            let ctx = SmoothContext::new(a.y, &table)?;
            let alpha = smooth::solve_alpha(a.x, &ctx, a.tol)?;
            let p = json!({
                "alpha": real(alpha),
                "asymptotic": real(smooth::alpha_asymptotic(a.x, a.y as f64)),
                "residual": real(smooth::alpha_residual(alpha, a.x, &ctx)),
            });
            ("alpha", params_of(a), p, None, false)
        }
        Command::Rho(a) => {
            let p = json!({ "rho": real(smooth::dickman_rho(a.u)?) });
            ("rho", params_of(a), p, None, false)
        }
        Command::Simulate(s) => simulate(s)?,
        Command::Scan(a) => {
            let table = table_for(a.x.checked_mul(2).ok_or(Error::Overflow("2x"))?)?;
            let opts = ScanOptions { y0_cap: a.y0_cap, ..ScanOptions::default() };
            let scan = characters::scan_primes(a.x, &opts, &table)?;
            let agg = &scan.aggregate;
            let records: Vec<Value> = scan
                .records
                .iter()
                .map(|r| {
                    json!({
                        "p": r.p,
                        "in_lplus": r.in_lplus,
                        "harmonic_positive": r.harmonic_positive,
                        "certified": r.certified,
                        "least_qnr": r.least_qnr,
                        "min_fsum": r.min_fsum,
                        "min_hsum": real(r.min_hsum),
                    })
                })
                .collect();
            let p = json!({
                "primes": agg.primes,
                "lplus_count": agg.lplus_count,
                "certified_positive": agg.certified_positive,
                "lplus_density": real(agg.lplus_density),
                "p_tilde": real(agg.p_tilde),
                "records": records,
            });
            let csv = CsvTable {
                header: SCAN_CSV_HEADER.split(',').map(String::from).collect(),
                rows: scan.records.iter().map(|r| r.csv_row().split(',').map(String::from).collect()).collect(),
            };
            ("scan", params_of(a), p, Some(csv), false)
        }
        Command::Residues(a) => {
            let keys = ResidueSpec::keys(a.n);
            if a.pattern >= 1u64 << keys.len().min(63) {
                return Err(format!("--pattern must be below 2^{}", keys.len()).into());
            }
            let spec = ResidueSpec::from_pattern(a.n, a.pattern)?;
            let signs: Map<String, Value> = spec.signs().iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            let mut p = json!({
                "modulus": spec.modulus(),
                "count": characters::residue_count(&spec),
                "signs": signs,
            });
            let mut csv = CsvTable { header: vec!["residue".into()], rows: Vec::new() };
            if !a.count_only {
                let set = characters::residue_set(&spec)?;
                csv.rows = set.iter().map(|l| vec![l.to_string()]).collect();
                p["residues"] = json!(set);
            } else {
                csv = CsvTable::from_object(&p);
            }
            ("residues", params_of(a), p, Some(csv), false)
        }
        Command::Moments(a) => {
            let table = table_for(a.x)?;
            let mode = if a.exact {
                MomentMode::Exact
            } else {
                let seed = a.seed.ok_or("--seed is required for Monte Carlo moments (or pass --exact)")?;
                MomentMode::MonteCarlo { trials: a.trials, seed }
            };
            let m = analysis::moment_qnorm(a.x, a.q, mode, &table)?;
            let p = json!({
                "moment": real(m.moment),
                "qnorm": real(m.qnorm),
                "std_error": real(m.std_error),
                "tuples": m.tuples.map(|t| t.to_string()),
                "mode": if a.exact { "exact" } else { "monte_carlo" },
            });
            ("moments", params_of(a), p, None, false)
        }
        Command::Halasz(a) => {
            let model = a.model.model()?;
            let table = table_for(a.x)?;
            let f = analysis::halasz_f(&model, a.x, a.t, &table)?;
            let l = analysis::halasz_l(&model, a.x, a.grid, &table)?;
            let p = json!({
                "l_grid_lower_bound": real(l.value),
                "resolution": real(l.resolution),
                "t": real(a.t),
                "f_re": real(f.re),
                "f_im": real(f.im),
                "f_abs": real(f.norm()),
                "sups": l.sups.iter().map(|&(n, s)| json!([n, real(s)])).collect::<Vec<_>>(),
            });
            let csv = CsvTable {
                header: vec!["n".into(), "sup_abs_f".into()],
                rows: l.sups.iter().map(|&(n, s)| vec![n.to_string(), fmt_real(s)]).collect(),
            };
            ("halasz", params_of(a), p, Some(csv), false)
        }
        Command::Ratios(a) => {
            let model = a.model.model()?;
            let table = table_for(a.x)?;
            let r = analysis::ratio_checks(&model, a.x, a.eps, &table)?;
            let p = json!({
                "prop310_ratio": real(r.prop310_ratio),
                "conj1_ratio": real(r.conj1_ratio),
                "prop310_sum": r.prop310_sum,
                "conj1_sum": r.conj1_sum,
            });
            ("ratios", params_of(a), p, None, false)
        }
        Command::Check(a) => {
            let checks = identity_suite(a.seeds, a.seed)?;
            let failed = checks.iter().any(|c| !c.pass);
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "name": c.name, "value": real(c.value), "tolerance": real(c.tolerance), "pass": c.pass }))
                .collect();
            let csv = CsvTable {
                header: vec!["name".into(), "value".into(), "tolerance".into(), "pass".into()],
                rows: checks
                    .iter()
                    .map(|c| vec![c.name.clone(), fmt_real(c.value), fmt_real(c.tolerance), c.pass.to_string()])
                    .collect(),
            };
            let p = json!({ "all_pass": !failed, "checks": rows });
            ("check", params_of(a), p, Some(csv), failed)
        }
    };
    let csv = csv.unwrap_or_else(|| CsvTable::from_object(&payload));
    Ok(RunRecord {
        subcommand: name.to_string(),
        params,
        payload,
        wall_time_s: start.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        failed,
        csv,
    })
}

type Dispatched = (&'static str, Value, Value, Option<CsvTable>, bool);

fn simulate(s: &Simulate) -> Result<Dispatched, CliError> {
    Ok(match s {
        Simulate::Lplus(a) => {
            let table = table_for(a.x)?;
            let e = montecarlo::estimate_conditional_lplus(a.x, a.y, a.sampling.sampling()?, &table)?;
            ("simulate lplus", params_of(a), estimate_payload(&e), None, false)
        }
        Simulate::HarmonicNegative(a) => {
            let table = table_for(a.x)?;
            let e = montecarlo::estimate_negative_harmonic(a.x, a.sampling.sampling()?, &table)?;
            ("simulate harmonic-negative", params_of(a), estimate_payload(&e), None, false)
        }
        Simulate::EventA(a) => {
            let table = table_for(a.cutoff)?;
            let e = montecarlo::estimate_event_a(a.cutoff, a.sampling.sampling()?, &table)?;
            let mut p = estimate_payload(&e);
            p["truncated_at"] = json!(a.cutoff);
            ("simulate event-a", params_of(a), p, None, false)
        }
        Simulate::Covariance(a) => {
            let siegel = SiegelConfig::new(a.e0, a.beta1)?;
            let table = table_for(a.cutoff.max(isqrt(a.d) + 1))?;
            let c = montecarlo::estimate_cov_a_fd(a.d, a.cutoff, a.sampling.sampling()?, &table)?;
            let x = a.cutoff.max(2) as f64;
            let p = json!({
                "value": real(c.value),
                "std_error": real(c.std_error),
                "trials": c.trials,
                "d": c.d,
                "seed": a.sampling.seed.filter(|_| !a.sampling.exhaustive),
                "siegel_factor": real(siegel.factor(x)),
                "correction": real(siegel.correction(c.value, x)),
            });
            ("simulate covariance", params_of(a), p, None, false)
        }
        Simulate::Deviation(a) => {
            let table = table_for(a.x.max(a.y))?;
            let ctx = SmoothContext::new(a.y, &table)?;
            let w = DeviationWeights::new(a.x, &ctx)?;
            let e = montecarlo::estimate_deviation_with(&w, a.x, &ctx, a.delta, a.sampling.sampling()?)?;
            let mut p = estimate_payload(&e);
            p["psi_star"] = json!(w.psi_star_x);
            p["max_ratio"] = real(w.max_ratio());
            ("simulate deviation", params_of(a), p, None, false)
        }
    })
}

/// One line of a `check` suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Worst residual observed (0 or 1 for exact/boolean checks: 1 means a mismatch).
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(name: &str, value: f64, tolerance: f64) -> CheckResult {
    CheckResult { name: name.into(), value, tolerance, pass: value <= tolerance }
}

/// Identity checks: elementary decomposition, rough decomposition, Buchstab
/// residuals, the Dickman integral identity and residue-set counts.
pub fn identity_suite(seeds: u64, master: u64) -> Result<Vec<CheckResult>, CliError> {
    let table = PrimeTable::new(100_000)?;
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    let mut g_ok = true;
    for i in 0..seeds {
        let model = SignModel::rademacher(derive_seed(master, i));
        let d = randmult::elementary_decomposition(&model, 10_000, &table)?;
        worst = worst.max(d.residual);
        g_ok &= d.g_sum >= 0 && d.g_sum >= d.prime_part;
    }
    out.push(check("elementary_decomposition", worst, 1e-9));
    out.push(check("g_sum_lower_bound", if g_ok { 0.0 } else { 1.0 }, 0.0));

    let ctx = SmoothContext::new(10, &table)?;
    let mut mismatches = 0u64;
    for i in 0..seeds {
        let model = SignModel::rademacher(derive_seed(master ^ 1, i)).with_forced_prefix(10);
        let (lhs, rhs) = randmult::rough_decomposition(&model, 10_000, &ctx)?;
        mismatches += (lhs != rhs) as u64;
    }
    out.push(check("rough_decomposition", mismatches as f64, 0.0));

    let ctx = SmoothContext::new(20, &table)?;
    let r = smooth::buchstab_residuals(10_000, &ctx, None)?;
    out.push(check("buchstab_unsigned", r.unsigned_relative(), 1e-9));
    let mut worst = 0.0f64;
    for i in 0..seeds {
        let model = SignModel::rademacher(derive_seed(master ^ 2, i));
        worst = worst.max(smooth::buchstab_residuals(10_000, &ctx, Some(&model))?.signed_relative());
    }
    out.push(check("buchstab_signed", worst, 1e-9));

    let mut worst = 0.0f64;
    let mut u = 1.0;
    while u <= 10.0 {
        worst = worst.max(smooth::dickman_identity_residual(u)?);
        u += 1.0 / 64.0;
    }
    out.push(check("dickman_identity", worst, 1e-7));

    let mut bad = 0u64;
    for n in [3u64, 5, 7] {
        for bits in 0..ResidueSpec::pattern_count(n) {
            let spec = ResidueSpec::from_pattern(n, bits)?;
            let k = spec.modulus();
            let expected = totient(k) >> ResidueSpec::keys(n).len();
            bad += (characters::residue_set(&spec)?.len() as u64 != expected) as u64;
        }
    }
    out.push(check("residue_set_counts", bad as f64, 0.0));
    Ok(out)
}

fn totient(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(t) = flag {
        return Ok(Some(t));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Renders a record in the requested format.
pub fn render(record: &RunRecord, format: Format) -> String {
    match format {
        Format::Json => record.json_line() + "\n",
        Format::Csv => record.csv.render(),
    }
}

fn execute(cli: &Cli) -> Result<RunRecord, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count(cli.threads)? {
        if t == 0 {
            return Err("--threads must be at least 1".into());
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let record = pool.install(|| dispatch(&cli.command))?;
    let text = render(&record, cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(CliError::Io)?;
        }
    }
    Ok(record)
}

/// Parses `args` (including the program name), runs and emits; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match execute(&cli) {
        Ok(r) if r.failed => 1,
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
