//! Desk-scale laboratory for random completely multiplicative functions.
//!
//! The crate is organised by subject:
//!
//! - [`arith`]: prime tables, factorization and elementary invariants.
//! - [`smooth`]: smooth-number counts Ψ, Ψ*, Ψ_f, the saddle point α(x, y),
//!   Dickman's ρ and the Buchstab-type identity residuals.
//! - [`randmult`]: the seeded Rademacher sign model and its exact partial-sum
//!   functionals and decomposition identities.
//! - [`montecarlo`]: estimators (Monte Carlo and exhaustive) for the event
//!   probabilities, with Wilson intervals.
//! - [`characters`]: Jacobi/Legendre symbols, prime scans, least quadratic
//!   non-residues and reciprocity residue classes.
//! - [`analysis`]: exact Rademacher expectations and the inequality oracles
//!   (Bonami–Halász, Hoeffding, Halász's L(x), moment norms).
//! - [`cli`]: run configuration, dispatch and CSV / JSON-lines emission used by
//!   the `rmflab` binary.
//!
//! Runnable walkthroughs for each area live in the crate's `examples/`
//! directory.

pub mod analysis;
pub mod arith;
pub mod characters;
pub mod cli;
mod error;
pub mod montecarlo;
pub mod numeric;
pub mod randmult;
pub mod smooth;

pub use error::{Error, Result};

pub use arith::{Factorization, Invariants, PrimeTable};
pub use montecarlo::{Estimate, Sampling};
pub use randmult::SignModel;
pub use smooth::{DickmanTable, SmoothContext};
