//! Exact counts of solutions to Vinogradov systems whose indeterminates are
//! `β = Σ_ℓ n_ℓ α^ℓ` with `0 ≤ n_ℓ < N`, and growth-exponent fits.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::AddAssign;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{field_multiply, FieldElement, MinimalPolynomial};
use crate::error::{Error, Result};

/// Default limit on enumerated s-tuples (hash method) or pairs (brute force).
pub const DEFAULT_KEY_BUDGET: u64 = 100_000_000;

/// Above this many s-tuples the count is split into passes, each holding
/// only the keys of one hash bucket.
const SINGLE_PASS_KEYS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    Hash,
    Brute,
    /// α treated as transcendental: keys are unreduced polynomial power sums.
    Formal,
}

impl CountMethod {
    pub fn name(&self) -> &'static str {
        match self {
            CountMethod::Hash => "hash",
            CountMethod::Brute => "brute",
            CountMethod::Formal => "formal",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionCountRecord {
    pub d: usize,
    pub s: u32,
    pub k: u32,
    pub n: u64,
    pub minpoly: MinimalPolynomial,
    pub j: BigUint,
    pub method: CountMethod,
    pub seconds: f64,
}

fn check_params(s: u32, k: u32, n: u64) -> Result<()> {
    if s == 0 || k == 0 || n == 0 {
        return Err(Error::invalid("s, k and N must be positive"));
    }
    Ok(())
}

fn checked_pow(n: u64, e: u64, what: &'static str, budget: u64) -> Result<u64> {
    let total = BigUint::from(n).pow(e as u32);
    match total.to_u64() {
        Some(t) if t <= budget => Ok(t),
        _ => Err(Error::budget(what, total, budget)),
    }
}

/// Integral model of the system: `α' = Dα` is an algebraic integer when `D`
/// clears the denominators of `P`, and `D^{d−1} β` has integer coordinates
/// in the basis of powers of `α'`. Scaling every indeterminate by the same
/// factor leaves the solution set unchanged.
struct IntegralModel {
    /// Ascending non-leading coefficients of the monic integral polynomial of `α'`.
    reduction: Vec<BigInt>,
    /// Coordinate multipliers `D^{d−1−ℓ}`.
    weights: Vec<BigInt>,
}

impl IntegralModel {
    fn new(poly: &MinimalPolynomial) -> Self {
        let d = poly.degree();
        let den = poly
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let reduction = poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (c * BigRational::from_integer(den.pow((d - i) as u32))).to_integer())
            .collect();
        let weights = (0..d).map(|l| den.pow((d - 1 - l) as u32)).collect();
        IntegralModel { reduction, weights }
    }
}

/// Coordinates of `β^1, …, β^k` concatenated; reduced mod the integral
/// polynomial, or left as full polynomials when `reduction` is `None`.
fn power_key(beta: &[BigInt], k: u32, reduction: Option<&[BigInt]>) -> Vec<BigInt> {
    let mut key = Vec::new();
    let mut power = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); power.len() + beta.len() - 1];
        for (i, x) in power.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in beta.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        if let Some(red) = reduction {
            let d = red.len();
            for m in (d..next.len()).rev() {
                let top = std::mem::take(&mut next[m]);
                if top.is_zero() {
                    continue;
                }
                for (i, c) in red.iter().enumerate() {
                    next[m - d + i] -= &top * c;
                }
            }
            next.truncate(d);
            next.resize(d, BigInt::zero());
        }
        key.extend(next.iter().cloned());
        power = next;
    }
    key
}

fn digits(mut index: u64, n: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// Keys of all single indeterminates `β ∈ [0,N)^d`, in lexicographic order.
fn single_keys(poly: &MinimalPolynomial, k: u32, n: u64, formal: bool) -> Vec<Vec<BigInt>> {
    let d = poly.degree();
    let total = n.pow(d as u32);
    let model = IntegralModel::new(poly);
    (0..total)
        .map(|idx| {
            let coords = digits(idx, n, d);
            if formal {
                let beta: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
                power_key(&beta, k, None)
            } else {
                let beta: Vec<BigInt> = coords
                    .iter()
                    .zip(&model.weights)
                    .map(|(&c, w)| BigInt::from(c) * w)
                    .collect();
                power_key(&beta, k, Some(&model.reduction))
            }
        })
        .collect()
}

/// Σ over keys of multiplicity², for keys `Σ_j singles[t_j]` over ordered
/// s-tuples `t`.
fn count_from_singles<T>(singles: &[Vec<T>], s: u32) -> u128
where
    T: Clone + Eq + Hash + Send + Sync + Zero + for<'a> AddAssign<&'a T>,
{
    let m = singles.len() as u64;
    let tuples = m.pow(s);
    let passes = tuples.div_ceil(SINGLE_PASS_KEYS).max(1);
    let width = singles[0].len();
    let mut total = 0u128;
    for pass in 0..passes {
        let maps: HashMap<Vec<T>, u64> = (0..m)
            .into_par_iter()
            .fold(HashMap::new, |mut map, lead| {
                let rest = m.pow(s - 1);
                let mut key = vec![T::zero(); width];
                for tail in 0..rest {
                    key.clone_from(&singles[lead as usize]);
                    let mut t = tail;
                    for _ in 1..s {
                        let idx = (t % m) as usize;
                        t /= m;
                        for (x, y) in key.iter_mut().zip(&singles[idx]) {
                            *x += y;
                        }
                    }
                    if passes > 1 && bucket(&key, passes) != pass {
                        continue;
                    }
                    *map.entry(key.clone()).or_insert(0) += 1;
                }
                map
            })
            .reduce(HashMap::new, |mut a, b| {
                if a.len() < b.len() {
                    return merge_into(b, a);
                }
                for (key, c) in b {
                    *a.entry(key).or_insert(0) += c;
                }
                a
            });
        total += maps.values().map(|&c| c as u128 * c as u128).sum::<u128>();
    }
    total
}

fn merge_into<T: Eq + Hash>(mut a: HashMap<Vec<T>, u64>, b: HashMap<Vec<T>, u64>) -> HashMap<Vec<T>, u64> {
    for (key, c) in b {
        *a.entry(key).or_insert(0) += c;
    }
    a
}

fn bucket<T: Hash>(key: &[T], passes: u64) -> u64 {
    use std::hash::{BuildHasher, BuildHasherDefault};
    // fixed hasher so the partition is the same in every pass
    let h = BuildHasherDefault::<std::collections::hash_map::DefaultHasher>::default().hash_one(key);
    h % passes
}

fn count_keys(singles: Vec<Vec<BigInt>>, s: u32) -> u128 {
    let limit = BigInt::from(i128::MAX / (s as i128 + 1));
    let fits = singles.iter().flatten().all(|x| x.abs() < limit);
    if fits {
        let small: Vec<Vec<i128>> = singles
            .iter()
            .map(|v| v.iter().map(|x| x.to_i128().expect("checked bound")).collect())
            .collect();
        count_from_singles(&small, s)
    } else {
        count_from_singles(&singles, s)
    }
}

fn record(
    poly: &MinimalPolynomial,
    s: u32,
    k: u32,
    n: u64,
    j: u128,
    method: CountMethod,
    start: Instant,
) -> SolutionCountRecord {
    SolutionCountRecord {
        d: poly.degree(),
        s,
        k,
        n,
        minpoly: poly.clone(),
        j: BigUint::from(j),
        method,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// `J_{s,k,d}(N; α)`: ordered pairs of s-tuples with equal power sums
/// `Σ_j β_j^t` for `t = 1..k`, counted as Σ multiplicity² over exact keys.
pub fn count_solutions(poly: &MinimalPolynomial, s: u32, k: u32, n: u64) -> Result<SolutionCountRecord> {
    count_solutions_with_budget(poly, s, k, n, DEFAULT_KEY_BUDGET)
}

pub fn count_solutions_with_budget(
    poly: &MinimalPolynomial,
    s: u32,
    k: u32,
    n: u64,
    budget: u64,
) -> Result<SolutionCountRecord> {
    check_params(s, k, n)?;
    let start = Instant::now();
    checked_pow(n, poly.degree() as u64 * s as u64, "Vinogradov s-tuples", budget)?;
    let j = count_keys(single_keys(poly, k, n, false), s);
    Ok(record(poly, s, k, n, j, CountMethod::Hash, start))
}

/// The same count with α treated as a formal variable: no reduction modulo
/// `P`, so only identities of polynomials in α count.
pub fn count_solutions_formal(poly: &MinimalPolynomial, s: u32, k: u32, n: u64) -> Result<SolutionCountRecord> {
    check_params(s, k, n)?;
    let start = Instant::now();
    checked_pow(n, poly.degree() as u64 * s as u64, "Vinogradov s-tuples", DEFAULT_KEY_BUDGET)?;
    let j = count_keys(single_keys(poly, k, n, true), s);
    Ok(record(poly, s, k, n, j, CountMethod::Formal, start))
}

/// Exhaustive comparison of all pairs of s-tuples, with power sums computed
/// in `ℚ[x]/(P)` by exact rational field multiplication.
pub fn count_solutions_brute(poly: &MinimalPolynomial, s: u32, k: u32, n: u64) -> Result<SolutionCountRecord> {
    check_params(s, k, n)?;
    let start = Instant::now();
    let d = poly.degree();
    let tuples = checked_pow(n, (d as u64) * s as u64, "Vinogradov s-tuples", DEFAULT_KEY_BUDGET)?;
    checked_pow(n, 2 * (d as u64) * s as u64, "Vinogradov tuple pairs", DEFAULT_KEY_BUDGET)?;
    let per = n.pow(d as u32);
    let powers: Vec<Vec<FieldElement>> = (0..per)
        .map(|idx| {
            let beta = FieldElement::new(
                digits(idx, n, d)
                    .iter()
                    .map(|&c| BigRational::from_integer(c.into()))
                    .collect(),
            );
            let mut out = Vec::with_capacity(k as usize);
            let mut acc = beta.clone();
            out.push(acc.clone());
            for _ in 1..k {
                acc = field_multiply(&acc, &beta, poly)?;
                out.push(acc.clone());
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let sums: Vec<Vec<BigRational>> = (0..tuples)
        .map(|t| {
            let parts = digits(t, per, s as usize);
            let mut sum = vec![BigRational::zero(); d * k as usize];
            for &p in &parts {
                for (power, elem) in powers[p as usize].iter().enumerate() {
                    for (l, c) in elem.coords.iter().enumerate() {
                        sum[power * d + l] += c;
                    }
                }
            }
            sum
        })
        .collect();
    let j: u128 = sums
        .par_iter()
        .map(|a| sums.iter().filter(|b| *b == a).count() as u128)
        .sum();
    Ok(record(poly, s, k, n, j, CountMethod::Brute, start))
}

/// `max(ds, 2ds − dk(k+1)/2)`.
pub fn envelope_exponent(d: usize, s: u32, k: u32) -> f64 {
    let ds = (d as u64 * s as u64) as f64;
    let drop = (d as u64 * k as u64 * (k as u64 + 1)) as f64 / 2.0;
    ds.max(2.0 * ds - drop)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub records: Vec<SolutionCountRecord>,
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    pub envelope_exponent: f64,
}

/// Least-squares slope of `log J` against `log N`.
pub fn fit_growth(poly: &MinimalPolynomial, s: u32, k: u32, ns: &[u64]) -> Result<GrowthFit> {
    if ns.len() < 3 {
        return Err(Error::invalid("growth fit needs at least three values of N"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("N values must be strictly increasing"));
    }
    let records = ns
        .iter()
        .map(|&n| count_solutions(poly, s, k, n))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = records
        .iter()
        .map(|r| r.j.to_f64().unwrap_or(f64::INFINITY).ln())
        .collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let residuals = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    Ok(GrowthFit {
        records,
        slope,
        intercept,
        residuals,
        envelope_exponent: envelope_exponent(poly.degree(), s, k),
    })
}

/// `(slope, intercept)` of the least-squares line.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> MinimalPolynomial {
        MinimalPolynomial::from_integers(c).unwrap()
    }

    #[test]
    fn spec_examples() {
        let x = MinimalPolynomial::x();
        assert_eq!(count_solutions(&x, 2, 2, 4).unwrap().j, BigUint::from(28u32));
        assert_eq!(count_solutions_brute(&x, 2, 2, 4).unwrap().j, BigUint::from(28u32));
        assert_eq!(count_solutions(&poly(&[1, 0]), 1, 3, 2).unwrap().j, BigUint::from(4u32));
        assert_eq!(count_solutions_brute(&poly(&[1, 0]), 1, 2, 3).unwrap().j, BigUint::from(9u32));
        assert_eq!(count_solutions_brute(&x, 1, 1, 5).unwrap().j, BigUint::from(5u32));
        // degree-one P = x − c gives the same count as P = x
        assert_eq!(count_solutions(&poly(&[-1]), 2, 2, 4).unwrap().j, BigUint::from(28u32));
    }

    #[test]
    fn two_n_squared_minus_n() {
        for n in [3u64, 5, 8, 16] {
            let j = count_solutions(&MinimalPolynomial::x(), 2, 2, n).unwrap().j;
            assert_eq!(j, BigUint::from(2 * n * n - n));
        }
    }

    #[test]
    fn hash_matches_brute_small_grid() {
        let polys = [
            MinimalPolynomial::x(),
            poly(&[1, 0]),
            poly(&[-2, 0]),
            MinimalPolynomial::parse("1/2,0").unwrap(),
        ];
        for p in &polys {
            for s in 1..=2 {
                for k in 1..=3 {
                    for n in 1..=4 {
                        let h = count_solutions(p, s, k, n).unwrap().j;
                        let b = count_solutions_brute(p, s, k, n).unwrap().j;
                        assert_eq!(h, b, "{p} s={s} k={k} N={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn formal_count_is_at_most_reduced_count() {
        for p in [poly(&[1, 0]), poly(&[-2, 0]), poly(&[-2, 0, 0])] {
            for (s, k, n) in [(2, 2, 3), (2, 3, 3), (1, 2, 4)] {
                let formal = count_solutions_formal(&p, s, k, n).unwrap().j;
                let reduced = count_solutions(&p, s, k, n).unwrap().j;
                assert!(formal <= reduced, "{p} s={s} k={k} N={n}");
            }
        }
    }

    #[test]
    fn multi_pass_matches_single_pass() {
        let singles = single_keys(&poly(&[-2, 0]), 2, 4, false);
        let small: Vec<Vec<i128>> = singles
            .iter()
            .map(|v| v.iter().map(|x| x.to_i128().unwrap()).collect())
            .collect();
        let one = count_from_singles(&small, 2);
        let big = count_from_singles(&singles, 2);
        assert_eq!(one, big);
        let m = small.len() as u64;
        let mut split = 0u128;
        for pass in 0..3 {
            let mut map: HashMap<Vec<i128>, u64> = HashMap::new();
            for a in 0..m {
                for b in 0..m {
                    let key: Vec<i128> = small[a as usize].iter().zip(&small[b as usize]).map(|(x, y)| x + y).collect();
                    if bucket(&key, 3) == pass {
                        *map.entry(key).or_insert(0) += 1;
                    }
                }
            }
            split += map.values().map(|&c| c as u128 * c as u128).sum::<u128>();
        }
        assert_eq!(split, one);
    }

    #[test]
    fn budgets_and_fits() {
        assert!(matches!(
            count_solutions_with_budget(&MinimalPolynomial::x(), 3, 2, 100, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(count_solutions_brute(&poly(&[1, 0]), 2, 2, 20).is_err());
        let fit = fit_growth(&MinimalPolynomial::x(), 1, 2, &[2, 3, 5]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(fit_growth(&MinimalPolynomial::x(), 1, 2, &[2, 3]).is_err());
        assert!(fit_growth(&MinimalPolynomial::x(), 1, 2, &[2, 5, 3]).is_err());
        assert_eq!(envelope_exponent(2, 2, 2), 4.0);
        assert_eq!(envelope_exponent(1, 2, 2), 2.0);
    }
}
