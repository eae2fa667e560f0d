//! Exact rational arithmetic, phases modulo one, and reproducible complex
//! accumulation.
//!
//! Phases are carried exactly in ℚ/ℤ; floating point only enters when a
//! phase is turned into a point on the unit circle by [`unit_root`].

mod phase;
mod rational;
mod summation;

pub use phase::{unit_root, unit_root_ratio, PhaseFraction, UnitRootTable};
pub use rational::{format_ratio, parse_rational, parse_rational_list, ExactRational};
pub use summation::{
    chunked_tree_reduce, compensated_sum, compensated_sum_real, Neumaier, NeumaierComplex,
    REDUCTION_CHUNK,
};

/// Values of exponential sums.
pub type ComplexValue = num_complex::Complex64;
