//! The paraboloid family `f_n(x) = 1_{p^{−2k}ℤ_p³}(x) χ_p(x·(nξ, n, 0))`,
//! `0 ≤ n < N = p^k`, with `ξ² ≡ −1 mod N²`.
//!
//! Norms are computed from a one-dimensional residue sum. On the ball
//! `B = p^{−2k}ℤ_p³` (Haar measure `N^6`) the sum `Σ_n f_n(x)` depends on
//! `x` only through `t = x_1 ξ + x_2` modulo `ℤ_p`: the third frequency
//! coordinate is zero, and `χ_p(n t)` is trivial once `t ∈ ℤ_p`. Since
//! `x_2` alone already runs over `p^{−2k}ℤ_p`, every class `t ≡ w/N²`
//! (`w ∈ ℤ/N²`) is attained on a set of measure `N^6/N²`. Hence
//!
//! ```text
//! ‖Σ_n f_n‖_r^r = N^4 Σ_{w mod N²} |Σ_{n<N} e(wn/N²)|^r,
//! ```
//!
//! while each `f_n` has unit modulus on `B`, so `‖f_n‖_r = N^{6/r}`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{chunked_tree_reduce, Neumaier, NeumaierComplex, UnitRootTable};
use crate::padic::{hensel_sqrt_minus_one, HenselRoot, ScaleSpec};

/// Default limit on `N³`, the work in one residue sum.
pub const DEFAULT_COUNTEREXAMPLE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleFamily {
    scale: ScaleSpec,
    xi: HenselRoot,
    r: f64,
}

impl CounterexampleFamily {
    pub fn new(p: u64, k: u32, r: f64) -> Result<Self> {
        let scale = ScaleSpec::new(p, k)?;
        let xi = hensel_sqrt_minus_one(p, 2 * k)?;
        Self::with_root(scale, xi, r)
    }

    /// A family with a caller-supplied `ξ` at precision `2k`; used to check
    /// that broken lifts are detected.
    pub fn with_root(scale: ScaleSpec, xi: HenselRoot, r: f64) -> Result<Self> {
        if !r.is_finite() || r < 2.0 {
            return Err(Error::invalid(format!("exponent r = {r} must be a real number ≥ 2")));
        }
        if xi.p != scale.p() || xi.k != 2 * scale.k() {
            return Err(Error::invalid("ξ must be given modulo N²"));
        }
        Ok(CounterexampleFamily { scale, xi, r })
    }

    pub fn scale(&self) -> &ScaleSpec {
        &self.scale
    }

    pub fn xi(&self) -> &HenselRoot {
        &self.xi
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn with_r(&self, r: f64) -> Result<Self> {
        Self::with_root(self.scale.clone(), self.xi.clone(), r)
    }

    fn n_checked(&self, budget: u64) -> Result<u64> {
        let n = self.scale.n();
        let cube = n.pow(3);
        match (n.to_u64(), cube.to_u64()) {
            (Some(n), Some(c)) if c <= budget => Ok(n),
            _ => Err(Error::budget("counterexample residue work N^3", cube, budget)),
        }
    }

    /// `‖f_n‖_r = N^{6/r}`.
    pub fn single_norm(&self) -> f64 {
        let n = self.scale.n().to_f64().unwrap_or(f64::INFINITY);
        n.powf(6.0 / self.r)
    }

    /// `‖Σ_n f_n‖_r^r`.
    pub fn sum_norm_pow(&self) -> Result<f64> {
        self.sum_norm_pow_with_budget(DEFAULT_COUNTEREXAMPLE_BUDGET)
    }

    pub fn sum_norm_pow_with_budget(&self, budget: u64) -> Result<f64> {
        let n = self.n_checked(budget)?;
        let m = n * n;
        let table = UnitRootTable::new(m);
        let half_r = self.r / 2.0;
        let total = chunked_tree_reduce(
            m as usize,
            Neumaier::new(),
            |range| {
                let mut acc = Neumaier::new();
                for w in range {
                    let w = w as u64;
                    let mut s = NeumaierComplex::new();
                    let mut t = 0u64;
                    for _ in 0..n {
                        s.add(table.get(t));
                        t += w;
                        if t >= m {
                            t -= m;
                        }
                    }
                    acc.add(s.value().norm_sqr().powf(half_r));
                }
                acc
            },
            Neumaier::merge,
        );
        Ok((n as f64).powi(4) * total.value())
    }

    /// `‖Σ_n f_n‖_r`.
    pub fn sum_norm(&self) -> Result<f64> {
        Ok(self.sum_norm_pow()?.powf(1.0 / self.r))
    }

    /// For even `r = 2s`, `‖Σ_n f_n‖_r^r = N^6 · #{(n, m) ∈ [0,N)^{2s} :
    /// Σ n_i ≡ Σ m_i mod N²}`, exactly. `None` for other `r`.
    pub fn sum_norm_pow_exact(&self) -> Result<Option<BigUint>> {
        if self.r.fract() != 0.0 || !(self.r as u64).is_multiple_of(2) {
            return Ok(None);
        }
        let s = (self.r as u64 / 2) as usize;
        let n = self.n_checked(DEFAULT_COUNTEREXAMPLE_BUDGET)? as usize;
        let m = n * n;
        // coefficients of (1 + x + … + x^{N−1})^s
        let mut poly = vec![BigUint::from(1u32)];
        for _ in 0..s {
            let mut next = vec![BigUint::zero(); poly.len() + n - 1];
            let mut window = BigUint::zero();
            for (i, slot) in next.iter_mut().enumerate() {
                if i < poly.len() {
                    window += &poly[i];
                }
                if i >= n {
                    window -= &poly[i - n];
                }
                *slot = window.clone();
            }
            poly = next;
        }
        let mut folded = vec![BigUint::zero(); m];
        for (i, c) in poly.into_iter().enumerate() {
            folded[i % m] += c;
        }
        let count: BigUint = folded.iter().map(|c| c * c).sum();
        Ok(Some(BigUint::from(n).pow(6) * count))
    }

    /// `(Σ_n ‖f_n‖_r²)^{1/2} = N^{1/2 + 6/r}`.
    pub fn decoupling_denominator(&self) -> f64 {
        let n = self.scale.n().to_f64().unwrap_or(f64::INFINITY);
        n.powf(0.5 + 6.0 / self.r)
    }

    /// `‖Σ f_n‖_r / (Σ ‖f_n‖_r²)^{1/2}`.
    pub fn decoupling_ratio(&self) -> Result<f64> {
        Ok(self.sum_norm()? / self.decoupling_denominator())
    }

    /// Whether `(nξ)² + n² ≡ 0 mod N²` for every `n < N`.
    pub fn verify_paraboloid_membership(&self) -> bool {
        let m = self.xi.modulus();
        let n = self.scale.n().clone();
        let mut i = BigUint::zero();
        while i < n {
            let a = (&i * &self.xi.xi) % &m;
            if (&a * &a + &i * &i) % &m != BigUint::zero() {
                return false;
            }
            i += 1u32;
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleRow {
    pub p: u64,
    pub k: u32,
    pub n: u64,
    pub r: f64,
    pub single_norm: f64,
    pub sum_norm: f64,
    pub ratio: f64,
    /// Natural logarithm of `ratio`.
    pub log_ratio: f64,
}

/// One row per `(k, r)` for `k = 1..=kmax`.
pub fn growth_table(p: u64, kmax: u32, rs: &[f64]) -> Result<Vec<CounterexampleRow>> {
    if kmax == 0 {
        return Err(Error::invalid("kmax must be positive"));
    }
    let mut rows = Vec::new();
    for k in 1..=kmax {
        for &r in rs {
            let fam = CounterexampleFamily::new(p, k, r)?;
            let sum_norm = fam.sum_norm()?;
            let ratio = sum_norm / fam.decoupling_denominator();
            rows.push(CounterexampleRow {
                p,
                k,
                n: fam.scale.n_u64().expect("bounded by the budget check"),
                r,
                single_norm: fam.single_norm(),
                sum_norm,
                ratio,
                log_ratio: ratio.ln(),
            });
        }
    }
    Ok(rows)
}

/// Least-squares slopes of `log sum_norm` and `log ratio` against `log N`
/// for the rows with exponent `r`.
pub fn growth_slopes(rows: &[CounterexampleRow], r: f64) -> Option<(f64, f64)> {
    let sel: Vec<&CounterexampleRow> = rows.iter().filter(|row| row.r == r).collect();
    if sel.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = sel.iter().map(|row| (row.n as f64).ln()).collect();
    let sums: Vec<f64> = sel.iter().map(|row| row.sum_norm.ln()).collect();
    let ratios: Vec<f64> = sel.iter().map(|row| row.log_ratio).collect();
    let (a, _) = crate::vinogradov::least_squares(&xs, &sums);
    let (b, _) = crate::vinogradov::least_squares(&xs, &ratios);
    Some((a, b))
}
