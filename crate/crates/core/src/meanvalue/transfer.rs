use num_rational::BigRational;

use super::coefficients::{CoefficientVector, IndexDomain};
use super::padic_mv::{modulate_coefficients, padic_short_mv_with_budget};
use super::quadrature::QuadratureConfig;
use super::real_mv::RealEvaluator;
use crate::algebra::PhaseSystem;
use crate::domains::{LocalizationVector, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::padic::ScaleSpec;

pub const DEFAULT_TRANSFER_TOL: f64 = 1e-6;

/// Modulations to take the supremum over.
#[derive(Clone, Debug, PartialEq)]
pub enum ModulationGrid {
    /// The fine quadrature nodes used for the real value.
    QuadratureNodes,
    Explicit(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    pub real_value: f64,
    pub quadrature_error_bound: f64,
    pub padic_sup_over_grid: f64,
    pub argmax: Vec<f64>,
    pub grid_size: usize,
    pub tol: f64,
    pub pass: bool,
}

/// Check `real ≤ (1 + tol)·max_v padic(a(v)) + quadrature error` over a grid
/// of modulations `v` in the centred cell. Grid points are converted to
/// exact rationals and the modulated coefficients are built with exact
/// phase reduction, separately from the floating modulation inside the
/// real quadrature.
#[allow(clippy::too_many_arguments)]
pub fn transfer_check(
    system: &PhaseSystem,
    omega: &IndexDomain,
    a: &CoefficientVector,
    r: f64,
    scale: &ScaleSpec,
    sigma: &LocalizationVector,
    grid: &ModulationGrid,
    quad: &QuadratureConfig,
    tol: f64,
) -> Result<TransferReport> {
    let real = RealEvaluator::new(system, omega, r, scale, sigma, quad, DEFAULT_CELL_BUDGET)?;
    let report = real.evaluate(a)?;
    let points = match grid {
        ModulationGrid::QuadratureNodes => real.plan().fine_points(),
        ModulationGrid::Explicit(points) => points.clone(),
    };
    if points.is_empty() {
        return Err(Error::invalid("modulation grid is empty"));
    }
    let mut sup = f64::NEG_INFINITY;
    let mut argmax = Vec::new();
    for v in &points {
        if v.len() != system.len() {
            return Err(Error::invalid(format!("modulation {v:?} has the wrong length")));
        }
        let exact = v
            .iter()
            .map(|&x| BigRational::from_float(x).ok_or_else(|| Error::invalid("non-finite modulation")))
            .collect::<Result<Vec<_>>>()?;
        let b = modulate_coefficients(a, &exact, system, omega)?;
        let value = padic_short_mv_with_budget(system, omega, &b, r, scale, sigma, DEFAULT_CELL_BUDGET)?.value;
        if value > sup {
            sup = value;
            argmax = v.clone();
        }
    }
    let pass = report.value <= (1.0 + tol) * sup + report.quadrature_error_bound;
    Ok(TransferReport {
        real_value: report.value,
        quadrature_error_bound: report.quadrature_error_bound,
        padic_sup_over_grid: sup,
        argmax,
        grid_size: points.len(),
        tol,
        pass,
    })
}
