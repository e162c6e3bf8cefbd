//! Exact arithmetic for the generalized Collatz maps `H_p`.
//!
//! `H_p(x) = x/2` for even `x` and `(p*x + 1)/2` for odd `x`. The crate
//! evaluates the parity-vector parameterization `chi_p` exactly (at
//! naturals, at rational 2-adic integers, and modulo `p^N`), characterizes
//! periodic points through the `B` map, provides p-adic Lipschitz estimates,
//! and computes the Fourier coefficients of `chi_p` composed with the digit
//! spreading maps `tau_kappa`.
//!
//! Every closed form is paired with an independent brute-force route
//! (direct iteration, enumeration, Riemann sums over the Haar measure) so
//! identities can be cross-checked at desk scale.
//!
//! Scans over seed ranges, `t` ranges and characters go through [`Exec`],
//! which runs on rayon when the `parallel` feature is enabled and falls back
//! to a sequential loop otherwise. Results never depend on the executor.

pub mod arith;
pub mod dynamics;
mod error;
pub mod exec;
pub mod fourier;
pub mod numen;
pub mod padic;
pub mod suite;
pub mod twoadic;

pub use arith::{Int, Nat, Rat};
pub use error::{Error, Result};
pub use exec::Exec;
pub use twoadic::{DigitWord, TwoAdicRat};
