//! Algebraic number fields given by a minimal polynomial, traces of powers,
//! and the polynomial phase systems obtained by expanding
//! `Tr(α^ℓ (n_0 + n_1 α + … + n_{d−1} α^{d−1})^j)` with multinomial
//! coefficients.

mod field;
mod minpoly;
mod phase_system;

pub use field::{field_multiply, FieldElement};
pub use minpoly::MinimalPolynomial;
pub use phase_system::{
    compositions, epsilon_table, expand_trace_phase, multinomial, MonomialTerm, PhaseComponent,
    PhaseSystem,
};

/// `Tr_{ℚ(α)/ℚ}(α^κ)`.
pub fn trace_power(poly: &MinimalPolynomial, kappa: usize) -> crate::exact_arith::ExactRational {
    poly.trace_power(kappa)
}
