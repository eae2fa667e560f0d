//! p-adic short mean values, real sparse mean values, and sampled checks
//! of the transference inequalities between them.

mod coefficients;
mod padic_mv;
mod quadrature;
mod real_mv;
mod restriction;
mod transfer;

pub use coefficients::{CoefficientVector, IndexDomain, Sampler};
pub use padic_mv::{
    cell_count, modulate_coefficients, padic_short_mv, padic_short_mv_with_budget, MeanValueMethod,
    MeanValueReport, PadicKernel,
};
pub use quadrature::{gauss_legendre, AxisRule, QuadratureConfig, QuadraturePlan, DEFAULT_MAX_NODES};
pub use real_mv::{real_sparse_mv, RealEvaluator};
pub use restriction::{
    corollary_ratio_experiment, epsilons, estimate_restriction_constant, transference_bound_report,
    CorollaryRow, RestrictionEstimate, SampleRow, Side, TransferenceBoundReport,
};
pub use transfer::{transfer_check, ModulationGrid, TransferReport, DEFAULT_TRANSFER_TOL};
