//! Exponential-sum mean values over real and p-adic sparse domains.
//!
//! The crate is organised around a handful of computations:
//!
//! * [`exact_arith`]: rationals, phases in ℚ/ℤ, unit roots and reproducible
//!   compensated summation.
//! * [`algebra`]: minimal polynomials, traces of powers and the trace-expanded
//!   polynomial phase systems built from them.
//! * [`padic`]: the standard p-adic character on p-power denominators,
//!   valuations and Hensel lifting of √−1.
//! * [`domains`]: the sparse subdomains of the torus cut out by a p-adic
//!   localization, with cell enumeration and CSV export.
//! * [`meanvalue`]: p-adic short mean values (an exact finite sum), real
//!   sparse mean values (cell quadrature) and the transference comparisons
//!   between the two.
//! * [`vinogradov`]: solution counts for Vinogradov systems whose
//!   indeterminates are integer combinations of powers of an algebraic number.
//! * [`counterexample`]: the isotropic paraboloid family over ℚ_p showing a
//!   decoupling loss of order N^{1/2−1/r}.
//! * [`cli`]: the `expsum` command-line front end.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod algebra;
pub mod cli;
pub mod counterexample;
pub mod domains;
pub mod error;
pub mod exact_arith;
pub mod meanvalue;
pub mod padic;
pub mod vinogradov;

pub use error::{Error, Result};
