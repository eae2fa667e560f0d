use num_traits::ToPrimitive;

use super::coefficients::{CoefficientVector, IndexDomain};
use super::padic_mv::{MeanValueMethod, MeanValueReport, PadicKernel, NORMALIZATION_NOTE};
use super::quadrature::{tensor_point, AxisRule, QuadratureConfig, QuadraturePlan};
use crate::algebra::PhaseSystem;
use crate::domains::{LocalizationVector, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::exact_arith::{chunked_tree_reduce, Neumaier};
use crate::padic::ScaleSpec;

/// Real sparse mean values
/// `N^{Σσ_j} ∫_A |Σ_n a_n e(x·ℙ(n))|^r dx`, computed as the average over
/// modulations `v` in the centred cell `ℛ` of the p-adic finite sum for the
/// modulated coefficients `a_n(v)`.
#[derive(Clone, Debug)]
pub struct RealEvaluator {
    kernel: PadicKernel,
    plan: QuadraturePlan,
}

impl RealEvaluator {
    pub fn new(
        system: &PhaseSystem,
        omega: &IndexDomain,
        r: f64,
        scale: &ScaleSpec,
        sigma: &LocalizationVector,
        quad: &QuadratureConfig,
        budget: u64,
    ) -> Result<Self> {
        let kernel = PadicKernel::new(system, omega, r, scale, sigma, budget)?;
        let halfwidths: Vec<f64> = system
            .degrees()
            .iter()
            .map(|&d| {
                let width = scale.p_pow(d * scale.k()).to_f64().unwrap_or(f64::INFINITY);
                0.5 / width
            })
            .collect();
        let spreads: Vec<f64> = kernel
            .component_values()
            .iter()
            .map(|vals| {
                let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
                hi - lo
            })
            .collect();
        if spreads.iter().any(|s| !s.is_finite()) {
            return Err(Error::invalid("phase values overflow floating point"));
        }
        let plan = QuadraturePlan::new(quad, &halfwidths, &spreads, r)?;
        Ok(RealEvaluator { kernel, plan })
    }

    pub fn plan(&self) -> &QuadraturePlan {
        &self.plan
    }

    pub fn kernel(&self) -> &PadicKernel {
        &self.kernel
    }

    pub fn evaluate(&self, a: &CoefficientVector) -> Result<MeanValueReport> {
        if a.len() != self.kernel.points() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} points",
                a.len(),
                self.kernel.points()
            )));
        }
        let fine = self.level(&self.plan.fine, a);
        let coarse = self.level(&self.plan.coarse, a);
        Ok(MeanValueReport {
            value: fine,
            r: self.kernel.r(),
            method: MeanValueMethod::RealQuadrature,
            quadrature_error_bound: (fine - coarse).abs(),
            normalization: NORMALIZATION_NOTE,
        })
    }

    /// The p-adic value of the coefficients modulated by `v`.
    pub fn modulated_value(&self, a: &CoefficientVector, v: &[f64]) -> f64 {
        let (re, im) = self.kernel.modulate_f64(a, v);
        self.kernel.evaluate_parts(&re, &im)
    }

    fn level(&self, axes: &[AxisRule], a: &CoefficientVector) -> f64 {
        let total: usize = axes.iter().map(AxisRule::len).product();
        chunked_tree_reduce(
            total,
            Neumaier::new(),
            |range| {
                let mut acc = Neumaier::new();
                for i in range {
                    let (v, w) = tensor_point(axes, i);
                    acc.add(w * self.modulated_value(a, &v));
                }
                acc
            },
            Neumaier::merge,
        )
        .value()
    }
}

pub fn real_sparse_mv(
    system: &PhaseSystem,
    omega: &IndexDomain,
    a: &CoefficientVector,
    r: f64,
    scale: &ScaleSpec,
    sigma: &LocalizationVector,
    quad: &QuadratureConfig,
) -> Result<MeanValueReport> {
    RealEvaluator::new(system, omega, r, scale, sigma, quad, DEFAULT_CELL_BUDGET)?.evaluate(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::ComplexValue;
    use crate::meanvalue::{padic_short_mv, Sampler};
    use num_bigint::BigInt;

    fn scale(p: u64, k: u32) -> ScaleSpec {
        ScaleSpec::new(p, k).unwrap()
    }

    /// Direct cell quadrature: evaluate `|S(x)|^r` at `x = centre_ι + v` for
    /// every cell ι and node v, without the modulation decomposition.
    #[allow(clippy::too_many_arguments)]
    fn direct_real(
        system: &PhaseSystem,
        omega: &IndexDomain,
        a: &CoefficientVector,
        r: f64,
        sc: &ScaleSpec,
        sigma: &LocalizationVector,
        order: usize,
        depth: u32,
    ) -> f64 {
        let dom = crate::domains::build_domain(sc, sigma, &system.degrees()).unwrap();
        let vals: Vec<Vec<f64>> = omega
            .points()
            .iter()
            .map(|n| system.evaluate_i64(n).unwrap().iter().map(|x: &BigInt| x.to_f64().unwrap()).collect())
            .collect();
        let axes: Vec<AxisRule> = dom
            .cell_halfwidths
            .iter()
            .map(|h| AxisRule::new(h.to_f64().unwrap(), order, depth))
            .collect();
        let nodes: Vec<(Vec<f64>, f64)> = super::super::quadrature::tensor_points(&axes).collect();
        let sigma_sum: f64 = sigma.sigma.iter().map(|s| s.to_f64().unwrap()).sum();
        let n = sc.n_u64().unwrap() as f64;
        let mut total = 0.0;
        for cell in crate::domains::enumerate_cells(&dom, u64::MAX).unwrap() {
            let centre: Vec<f64> = cell.center.iter().map(|c| c.to_f64().unwrap()).collect();
            for (v, w) in &nodes {
                let mut s = ComplexValue::new(0.0, 0.0);
                for (an, pn) in a.values().iter().zip(&vals) {
                    let theta: f64 = pn.iter().enumerate().map(|(j, p)| (centre[j] + v[j]) * p).sum();
                    s += an * ComplexValue::from_polar(1.0, std::f64::consts::TAU * theta);
                }
                total += w * s.norm().powf(r) * dom.cell_volume().to_f64().unwrap();
            }
        }
        n.powf(sigma_sum) * total
    }

    #[test]
    fn parabola_n3_r4_is_fifteen() {
        let sys = PhaseSystem::parabola();
        let omega = IndexDomain::box_domain(3, 1);
        let a = CoefficientVector::ones(&omega);
        let rep = real_sparse_mv(&sys, &omega, &a, 4.0, &scale(3, 1), &LocalizationVector::zeros(2), &QuadratureConfig::default())
            .unwrap();
        assert!((rep.value - 15.0).abs() < 1e-6 * 15.0, "{}", rep.value);
        assert!(rep.quadrature_error_bound < 1e-4);
        assert_eq!(rep.method, MeanValueMethod::RealQuadrature);
    }

    #[test]
    fn zero_and_single_point() {
        let sys = PhaseSystem::parabola();
        let omega = IndexDomain::box_domain(9, 1);
        let sc = scale(3, 2);
        let z = CoefficientVector::zeros(&omega);
        let rep = real_sparse_mv(&sys, &omega, &z, 4.0, &sc, &LocalizationVector::zeros(2), &QuadratureConfig::default()).unwrap();
        assert_eq!(rep.value, 0.0);
        let single = Sampler::SinglePoint.sample(&omega);
        let full = LocalizationVector::from_integers(&[1, 2]);
        let rep = real_sparse_mv(&sys, &omega, &single, 3.0, &sc, &full, &QuadratureConfig::default()).unwrap();
        assert!((rep.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_direct_cell_quadrature() {
        let sys = PhaseSystem::parabola();
        let sc = scale(3, 2);
        let omega = IndexDomain::box_domain(9, 1);
        let a = Sampler::RandomPhases { seed: 4 }.sample(&omega);
        let sigma = LocalizationVector::from_integers(&[0, 1]);
        let cfg = QuadratureConfig {
            order: Some(10),
            depth: Some(1),
            ..Default::default()
        };
        let fast = real_sparse_mv(&sys, &omega, &a, 4.0, &sc, &sigma, &cfg).unwrap().value;
        let slow = direct_real(&sys, &omega, &a, 4.0, &sc, &sigma, 10, 1);
        assert!((fast - slow).abs() < 1e-9 * slow, "{fast} vs {slow}");
    }

    #[test]
    fn sigma_zero_matches_padic_for_random_coefficients() {
        let sys = PhaseSystem::moment_curve(3);
        let sc = scale(3, 1);
        let omega = IndexDomain::box_domain(3, 1);
        let sigma = LocalizationVector::zeros(3);
        for seed in 0..3 {
            let a = Sampler::RandomPhases { seed }.sample(&omega);
            for r in [2.0, 4.0, 6.0] {
                let real = real_sparse_mv(&sys, &omega, &a, r, &sc, &sigma, &QuadratureConfig::default()).unwrap();
                let padic = padic_short_mv(&sys, &omega, &a, r, &sc, &sigma).unwrap();
                assert!((real.value - padic.value).abs() < 1e-6 * padic.value);
            }
        }
    }
}
