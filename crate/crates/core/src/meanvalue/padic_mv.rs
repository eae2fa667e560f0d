use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::coefficients::{CoefficientVector, IndexDomain};
use crate::algebra::PhaseSystem;
use crate::domains::{build_domain, LocalizationVector, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::exact_arith::{
    chunked_tree_reduce, unit_root, unit_root_ratio, ComplexValue, ExactRational, Neumaier,
    PhaseFraction, UnitRootTable,
};
use crate::padic::ScaleSpec;

/// Denominators up to this size get a precomputed table of unit roots.
const TABLE_LIMIT: u64 = 1 << 20;
/// Largest number of s-tuples the even-exponent convolution path enumerates.
const CONVOLUTION_LIMIT: u64 = 1 << 24;

pub(crate) const NORMALIZATION_NOTE: &str = "includes the N^(sum sigma_j) prefactor";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeanValueMethod {
    PadicExact,
    RealQuadrature,
}

impl MeanValueMethod {
    pub fn name(&self) -> &'static str {
        match self {
            MeanValueMethod::PadicExact => "padic-exact",
            MeanValueMethod::RealQuadrature => "real-quadrature",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanValueReport {
    pub value: f64,
    pub r: f64,
    pub method: MeanValueMethod,
    /// Zero for exact p-adic sums.
    pub quadrature_error_bound: f64,
    pub normalization: &'static str,
}

/// `|S|^r` from `|S|²`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum RPower {
    Two,
    Even(i32),
    General(f64),
}

impl RPower {
    pub(crate) fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 2.0 {
            return Err(Error::invalid(format!("exponent r = {r} must be a real number ≥ 2")));
        }
        Ok(if r == 2.0 {
            RPower::Two
        } else if r.fract() == 0.0 && (r as i64) % 2 == 0 && r <= 128.0 {
            RPower::Even((r / 2.0) as i32)
        } else {
            RPower::General(r / 2.0)
        })
    }

    #[inline]
    pub(crate) fn apply(self, sq: f64) -> f64 {
        match self {
            RPower::Two => sq,
            RPower::Even(h) => sq.powi(h),
            RPower::General(h) => {
                if sq == 0.0 {
                    0.0
                } else {
                    (h * sq.ln()).exp()
                }
            }
        }
    }
}

/// Everything about the finite sum in the change-of-variables identity that
/// does not depend on the coefficients: integer phase steps per point and
/// per axis over the common denominator `D = p^{max_j c_j}`, where
/// `c_j = (|e_j| − σ_j)K`.
#[derive(Clone, Debug)]
pub struct PadicKernel {
    counts: Vec<u64>,
    total: u64,
    den: u64,
    steps: Vec<Vec<u64>>,
    wraps: Vec<Vec<u64>>,
    table: Option<UnitRootTable>,
    values: Vec<Vec<f64>>,
    power: RPower,
    r: f64,
    points: usize,
    /// `(ℙ_j(n) mod count_j)_j` as a mixed-radix index, last axis fastest.
    residues: Vec<u64>,
}

impl PadicKernel {
    pub fn new(
        system: &PhaseSystem,
        omega: &IndexDomain,
        r: f64,
        scale: &ScaleSpec,
        sigma: &LocalizationVector,
        budget: u64,
    ) -> Result<Self> {
        let power = RPower::new(r)?;
        if system.dim() != omega.dim() {
            return Err(Error::invalid(format!(
                "phase system has {} variables but Ω has dimension {}",
                system.dim(),
                omega.dim()
            )));
        }
        if sigma.len() != system.len() {
            return Err(Error::invalid(format!(
                "σ has {} entries for {} phase components",
                sigma.len(),
                system.len()
            )));
        }
        let domain = build_domain(scale, sigma, &system.degrees())?;
        let counts = domain.checked_counts(budget)?;
        let total: u64 = counts.iter().product();
        let top = *domain.count_exponents.iter().max().expect("nonempty");
        let den = scale
            .p_pow(top)
            .to_u64()
            .ok_or_else(|| Error::invalid("phase denominator exceeds 64 bits"))?;
        let p = scale.p();

        let evaluated: Vec<Vec<BigInt>> = omega
            .points()
            .iter()
            .map(|n| system.evaluate_i64(n))
            .collect::<Result<_>>()?;
        let mut steps = Vec::with_capacity(counts.len());
        let mut wraps = Vec::with_capacity(counts.len());
        let mut values = Vec::with_capacity(counts.len());
        for (j, (&c, &count)) in domain.count_exponents.iter().zip(&counts).enumerate() {
            let modulus = BigInt::from(count);
            let lift = u128::from(p).pow(top - c);
            let step: Vec<u64> = evaluated
                .iter()
                .map(|pv| {
                    let t = pv[j].mod_floor(&modulus).to_u64().expect("reduced below count");
                    ((t as u128 * lift) % den as u128) as u64
                })
                .collect();
            let wrap = step
                .iter()
                .map(|&t| {
                    let back = (t as u128 * (count - 1) as u128 % den as u128) as u64;
                    (den - back) % den
                })
                .collect();
            values.push(evaluated.iter().map(|pv| big_to_f64(&pv[j])).collect());
            steps.push(step);
            wraps.push(wrap);
        }
        let table = (den <= TABLE_LIMIT).then(|| UnitRootTable::new(den));
        let residues = evaluated
            .iter()
            .map(|pv| {
                pv.iter().zip(&counts).fold(0u64, |acc, (v, &count)| {
                    acc * count + v.mod_floor(&BigInt::from(count)).to_u64().expect("reduced below count")
                })
            })
            .collect();
        Ok(PadicKernel {
            counts,
            total,
            den,
            steps,
            wraps,
            table,
            values,
            power,
            r,
            points: omega.len(),
            residues,
        })
    }

    /// Number of ι-tuples, `N^{Σ(|e_j|−σ_j)}`.
    pub fn cells(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `|Ω|`.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Component values `ℙ_j(n)` as floats, indexed `[j][n]`.
    pub fn component_values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn evaluate(&self, a: &CoefficientVector) -> Result<f64> {
        if a.len() != self.points {
            return Err(Error::invalid(format!(
                "{} coefficients for {} points",
                a.len(),
                self.points
            )));
        }
        let (re, im): (Vec<f64>, Vec<f64>) = a.values().iter().map(|z| (z.re, z.im)).unzip();
        Ok(self.evaluate_parts(&re, &im))
    }

    pub(crate) fn evaluate_parts(&self, re: &[f64], im: &[f64]) -> f64 {
        match self.convolution_power() {
            Some(s) => self.evaluate_convolution(re, im, s),
            None => self.evaluate_direct(re, im),
        }
    }

    /// `s = r/2` when r is even and `|Ω|^s` is small next to the cell count.
    fn convolution_power(&self) -> Option<u32> {
        let RPower::Even(h) = self.power else {
            return if matches!(self.power, RPower::Two) { Some(1) } else { None };
        };
        let tuples = (self.points as u64).checked_pow(h as u32)?;
        (tuples <= CONVOLUTION_LIMIT && tuples <= self.total).then_some(h as u32)
    }

    /// Orthogonality of the characters of `Π_j ℤ/count_j` turns the average
    /// of `|S|^{2s}` into `Σ_y |c_y|²`, where `c_y` sums `Π a_{n_i}` over the
    /// s-tuples whose residues add up to `y`.
    fn evaluate_convolution(&self, re: &[f64], im: &[f64], s: u32) -> f64 {
        let base: Vec<(u64, ComplexValue)> = self
            .residues
            .iter()
            .zip(re.iter().zip(im))
            .map(|(&y, (&x, &i))| (y, ComplexValue::new(x, i)))
            .collect();
        let mut acc = merge_keys(base.clone());
        for _ in 1..s {
            let mut next = Vec::with_capacity(acc.len() * base.len());
            for &(y, c) in &acc {
                for &(x, b) in &base {
                    next.push((self.add_residues(y, x), c * b));
                }
            }
            acc = merge_keys(next);
        }
        let mut sum = Neumaier::new();
        for (_, c) in &acc {
            sum.add(c.norm_sqr());
        }
        sum.value()
    }

    fn add_residues(&self, mut a: u64, mut b: u64) -> u64 {
        let mut out = 0u64;
        let mut stride = 1u64;
        for &count in self.counts.iter().rev() {
            let digit = (a % count + b % count) % count;
            out += digit * stride;
            stride *= count;
            a /= count;
            b /= count;
        }
        out
    }

    /// The ι-sum taken cell by cell.
    pub(crate) fn evaluate_direct(&self, re: &[f64], im: &[f64]) -> f64 {
        let sum = chunked_tree_reduce(
            self.total as usize,
            Neumaier::new(),
            |range| self.chunk(re, im, range),
            Neumaier::merge,
        );
        sum.value() / self.total as f64
    }

    /// Modulate `a` by `e(Σ_j v_j ℙ_j(n))` in floating point.
    pub fn modulate_f64(&self, a: &CoefficientVector, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        a.values()
            .iter()
            .enumerate()
            .map(|(n, z)| {
                let theta: f64 = v.iter().zip(&self.values).map(|(vj, pj)| vj * pj[n]).sum();
                let (s, c) = (std::f64::consts::TAU * (theta - theta.round())).sin_cos();
                let w = z * ComplexValue::new(c, s);
                (w.re, w.im)
            })
            .unzip()
    }

    fn chunk(&self, re: &[f64], im: &[f64], range: std::ops::Range<usize>) -> Neumaier {
        let k = self.counts.len();
        let den = self.den;
        let mut iota = vec![0u64; k];
        let mut rest = range.start as u64;
        for j in (0..k).rev() {
            iota[j] = rest % self.counts[j];
            rest /= self.counts[j];
        }
        let mut phase: Vec<u64> = (0..self.points)
            .map(|n| {
                iota.iter()
                    .zip(&self.steps)
                    .fold(0u128, |acc, (&i, s)| (acc + i as u128 * s[n] as u128) % den as u128)
                    as u64
            })
            .collect();
        let mut acc = Neumaier::new();
        for _ in range {
            let (sr, si) = match &self.table {
                Some(table) => {
                    let (tr, ti) = table.parts();
                    inner_table(re, im, &phase, tr, ti)
                }
                None => inner_direct(re, im, &phase, den),
            };
            acc.add(self.power.apply(sr * sr + si * si));
            for j in (0..k).rev() {
                if iota[j] + 1 < self.counts[j] {
                    iota[j] += 1;
                    advance(&mut phase, &self.steps[j], den);
                    break;
                }
                iota[j] = 0;
                if self.counts[j] > 1 {
                    advance(&mut phase, &self.wraps[j], den);
                }
            }
        }
        acc
    }
}

/// Sum the values sharing a key; keys come out sorted, so the result does
/// not depend on any hashing order.
fn merge_keys(mut entries: Vec<(u64, ComplexValue)>) -> Vec<(u64, ComplexValue)> {
    entries.sort_by_key(|e| e.0);
    let mut out: Vec<(u64, ComplexValue)> = Vec::with_capacity(entries.len());
    for (k, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += v,
            _ => out.push((k, v)),
        }
    }
    out
}

#[inline]
fn advance(phase: &mut [u64], by: &[u64], den: u64) {
    for (x, &b) in phase.iter_mut().zip(by) {
        let y = *x + b;
        *x = if y >= den { y - den } else { y };
    }
}

#[inline]
fn inner_table(re: &[f64], im: &[f64], phase: &[u64], tr: &[f64], ti: &[f64]) -> (f64, f64) {
    let (mut sr, mut si) = (0.0, 0.0);
    for n in 0..phase.len() {
        let t = phase[n] as usize;
        let (c, s) = (tr[t], ti[t]);
        sr += re[n] * c - im[n] * s;
        si += re[n] * s + im[n] * c;
    }
    (sr, si)
}

fn inner_direct(re: &[f64], im: &[f64], phase: &[u64], den: u64) -> (f64, f64) {
    let (mut sr, mut si) = (0.0, 0.0);
    for n in 0..phase.len() {
        let z = unit_root_ratio(phase[n], den);
        sr += re[n] * z.re - im[n] * z.im;
        si += re[n] * z.im + im[n] * z.re;
    }
    (sr, si)
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The p-adic short mean value via the finite sum
/// `N^{Σ(σ_j−|e_j|)} Σ_ι |Σ_n a_n e(Σ_j ι_j ℙ_j(n)/N^{|e_j|−σ_j})|^r`.
pub fn padic_short_mv(
    system: &PhaseSystem,
    omega: &IndexDomain,
    a: &CoefficientVector,
    r: f64,
    scale: &ScaleSpec,
    sigma: &LocalizationVector,
) -> Result<MeanValueReport> {
    padic_short_mv_with_budget(system, omega, a, r, scale, sigma, DEFAULT_CELL_BUDGET)
}

pub fn padic_short_mv_with_budget(
    system: &PhaseSystem,
    omega: &IndexDomain,
    a: &CoefficientVector,
    r: f64,
    scale: &ScaleSpec,
    sigma: &LocalizationVector,
    budget: u64,
) -> Result<MeanValueReport> {
    let kernel = PadicKernel::new(system, omega, r, scale, sigma, budget)?;
    Ok(MeanValueReport {
        value: kernel.evaluate(a)?,
        r,
        method: MeanValueMethod::PadicExact,
        quadrature_error_bound: 0.0,
        normalization: NORMALIZATION_NOTE,
    })
}

/// `a_n(v) = a_n e(Σ_j v_j ℙ_j(n))` with the phase reduced exactly in ℚ/ℤ.
pub fn modulate_coefficients(
    a: &CoefficientVector,
    v: &[ExactRational],
    system: &PhaseSystem,
    omega: &IndexDomain,
) -> Result<CoefficientVector> {
    if v.len() != system.len() {
        return Err(Error::invalid(format!(
            "modulation has {} entries for {} phase components",
            v.len(),
            system.len()
        )));
    }
    if a.len() != omega.len() {
        return Err(Error::invalid("coefficients do not match Ω"));
    }
    let values = omega
        .points()
        .iter()
        .zip(a.values())
        .map(|(n, z)| {
            let pv = system.evaluate_i64(n)?;
            let phase = v
                .iter()
                .zip(&pv)
                .fold(PhaseFraction::zero(), |acc, (vj, pj)| &acc + &PhaseFraction::new(vj * pj));
            Ok(z * unit_root(&phase))
        })
        .collect::<Result<Vec<_>>>()?;
    CoefficientVector::from_values(omega, values)
}

/// `N^{Σ(|e_j|−σ_j)}` exactly, for reporting.
pub fn cell_count(system: &PhaseSystem, scale: &ScaleSpec, sigma: &LocalizationVector) -> Result<BigUint> {
    Ok(build_domain(scale, sigma, &system.degrees())?.total_cells())
}
