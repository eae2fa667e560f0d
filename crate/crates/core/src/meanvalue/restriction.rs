use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::coefficients::{IndexDomain, Sampler};
use super::padic_mv::PadicKernel;
use super::quadrature::QuadratureConfig;
use super::real_mv::RealEvaluator;
use crate::algebra::PhaseSystem;
use crate::domains::{LocalizationVector, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::exact_arith::ExactRational;
use crate::padic::ScaleSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Padic,
    Real,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Padic => "padic",
            Side::Real => "real",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "padic" => Ok(Side::Padic),
            "real" => Ok(Side::Real),
            other => Err(Error::invalid(format!("unknown side {other:?}; use padic or real"))),
        }
    }
}

/// One sampled coefficient vector: mean value, `Σ|a_n|^r`, and their ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRow {
    pub sampler: Sampler,
    pub value: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionEstimate {
    pub side: Side,
    /// Largest sampled ratio; a lower bound for the optimal constant.
    pub estimate: f64,
    pub best: Sampler,
    pub rows: Vec<SampleRow>,
}

enum Evaluator {
    Padic(Box<PadicKernel>),
    Real(Box<RealEvaluator>),
}

impl Evaluator {
    #[allow(clippy::too_many_arguments)]
    fn new(
        system: &PhaseSystem,
        omega: &IndexDomain,
        r: f64,
        scale: &ScaleSpec,
        sigma: &LocalizationVector,
        side: Side,
        quad: &QuadratureConfig,
    ) -> Result<Self> {
        Ok(match side {
            Side::Padic => Evaluator::Padic(Box::new(PadicKernel::new(
                system,
                omega,
                r,
                scale,
                sigma,
                DEFAULT_CELL_BUDGET,
            )?)),
            Side::Real => Evaluator::Real(Box::new(RealEvaluator::new(
                system,
                omega,
                r,
                scale,
                sigma,
                quad,
                DEFAULT_CELL_BUDGET,
            )?)),
        })
    }

    fn row(&self, omega: &IndexDomain, sampler: Sampler, r: f64) -> Result<SampleRow> {
        let a = sampler.sample(omega);
        let (value, error_bound) = match self {
            Evaluator::Padic(k) => (k.evaluate(&a)?, 0.0),
            Evaluator::Real(e) => {
                let rep = e.evaluate(&a)?;
                (rep.value, rep.quadrature_error_bound)
            }
        };
        let denominator = a.lr_norm_pow(r);
        Ok(SampleRow {
            sampler,
            value,
            denominator,
            ratio: value / denominator,
            error_bound,
        })
    }
}

/// Max over sampled `a` of `value(a)/Σ|a_n|^r`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_restriction_constant(
    system: &PhaseSystem,
    omega: &IndexDomain,
    r: f64,
    scale: &ScaleSpec,
    sigma: &LocalizationVector,
    side: Side,
    samplers: &[Sampler],
    quad: &QuadratureConfig,
) -> Result<RestrictionEstimate> {
    if samplers.is_empty() {
        return Err(Error::invalid("at least one sampler is required"));
    }
    let eval = Evaluator::new(system, omega, r, scale, sigma, side, quad)?;
    let rows = samplers
        .iter()
        .map(|&s| eval.row(omega, s, r))
        .collect::<Result<Vec<_>>>()?;
    let best = rows
        .iter()
        .fold(&rows[0], |b, row| if row.ratio > b.ratio { row } else { b });
    Ok(RestrictionEstimate {
        side,
        estimate: best.ratio,
        best: best.sampler,
        rows: rows.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryRow {
    pub k: u32,
    pub n: u64,
    pub row: SampleRow,
    /// `N^{r/2} + N^{r−4+σ}`.
    pub envelope: f64,
}

/// Real sparse mean values of the parabola over `Ω = [0, N)` on the domain
/// with `σ = (0, σ)`, for `N = p^K`, one row per `(N, sampler)`.
pub fn corollary_ratio_experiment(
    p: u64,
    ks: &[u32],
    sigma: &ExactRational,
    r: f64,
    samplers: &[Sampler],
    quad: &QuadratureConfig,
) -> Result<Vec<CorollaryRow>> {
    if sigma.is_negative() || *sigma > BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::invalid(format!("σ = {sigma} must lie in [0, 1]")));
    }
    let system = PhaseSystem::parabola();
    let sig = LocalizationVector::new(vec![BigRational::zero(), sigma.clone()]);
    let sigma_f = sigma.to_f64().unwrap_or(0.0);
    let mut rows = Vec::new();
    for &k in ks {
        let scale = ScaleSpec::new(p, k)?;
        let n = scale
            .n_u64()
            .ok_or_else(|| Error::invalid("N does not fit in 64 bits"))?;
        let omega = IndexDomain::box_domain(n, 1);
        let eval = Evaluator::new(&system, &omega, r, &scale, &sig, Side::Real, quad)?;
        let nf = n as f64;
        let envelope = nf.powf(r / 2.0) + nf.powf(r - 4.0 + sigma_f);
        for &s in samplers {
            rows.push(CorollaryRow {
                k,
                n,
                row: eval.row(&omega, s, r)?,
                envelope,
            });
        }
    }
    Ok(rows)
}

/// Both sampled constants next to the factor `2^{(r+1)k}/Π ε_j` relating
/// them in the reverse direction. Lower bounds cannot falsify that
/// direction, so this is a report only.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferenceBoundReport {
    pub padic: RestrictionEstimate,
    pub real: RestrictionEstimate,
    pub epsilons: Vec<f64>,
    pub factor: f64,
    /// `factor × real estimate`.
    pub scaled_real: f64,
}

/// `ε_j = 1/max(1, max_n |ℙ_j(n/N)|)` with the component scale reapplied,
/// so `ℙ_j` is the raw (unnormalized) component.
pub fn epsilons(system: &PhaseSystem, omega: &IndexDomain, scale: &ScaleSpec) -> Result<Vec<f64>> {
    let n = BigInt::from(scale.n().clone());
    system
        .components()
        .iter()
        .map(|c| {
            let denom = BigRational::from_integer(n.pow(c.degree));
            let mut top = BigRational::zero();
            for point in omega.points() {
                let big: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
                let raw = BigRational::from_integer(c.eval(&big)) * &c.scale / &denom;
                let raw = raw.abs();
                if raw > top {
                    top = raw;
                }
            }
            let one = BigRational::from_integer(BigInt::from(1));
            let m = if top > one { top } else { one };
            Ok(1.0 / m.to_f64().unwrap_or(f64::INFINITY))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn transference_bound_report(
    system: &PhaseSystem,
    omega: &IndexDomain,
    r: f64,
    scale: &ScaleSpec,
    sigma: &LocalizationVector,
    samplers: &[Sampler],
    quad: &QuadratureConfig,
) -> Result<TransferenceBoundReport> {
    let padic = estimate_restriction_constant(system, omega, r, scale, sigma, Side::Padic, samplers, quad)?;
    let real = estimate_restriction_constant(system, omega, r, scale, sigma, Side::Real, samplers, quad)?;
    let eps = epsilons(system, omega, scale)?;
    let factor = 2f64.powf((r + 1.0) * system.len() as f64) / eps.iter().product::<f64>();
    Ok(TransferenceBoundReport {
        scaled_real: factor * real.estimate,
        padic,
        real,
        epsilons: eps,
        factor,
    })
}
