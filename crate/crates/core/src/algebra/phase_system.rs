use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::MinimalPolynomial;
use crate::error::{Error, Result};
use crate::exact_arith::{format_ratio, parse_rational, ExactRational};

/// `coefficient · n^exponents`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialTerm {
    pub exponents: Vec<u32>,
    pub coefficient: ExactRational,
}

impl MonomialTerm {
    pub fn new(exponents: Vec<u32>, coefficient: ExactRational) -> Self {
        MonomialTerm {
            exponents,
            coefficient,
        }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    fn eval(&self, n: &[BigInt]) -> BigInt {
        let mono = self
            .exponents
            .iter()
            .zip(n)
            .fold(BigInt::one(), |acc, (&e, x)| acc * x.pow(e));
        // Coefficients are integral once a component is normalized.
        self.coefficient.numer() * mono
    }
}

/// One homogeneous component of a phase system.
///
/// `label` is `(j, ℓ)`: for trace systems the power `j` and the trace shift
/// `ℓ`; for hand-built systems the degree and a running index within it.
/// `scale` records the normalization: raw component = `scale` × `terms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseComponent {
    pub degree: u32,
    pub label: (u32, u32),
    pub terms: Vec<MonomialTerm>,
    pub scale: ExactRational,
}

impl PhaseComponent {
    /// Terms as a map from multiindex to coefficient, for order-free comparison.
    pub fn coefficient_map(&self) -> BTreeMap<Vec<u32>, BigInt> {
        self.terms
            .iter()
            .map(|t| (t.exponents.clone(), t.coefficient.to_integer()))
            .collect()
    }

    pub fn eval(&self, n: &[BigInt]) -> BigInt {
        self.terms.iter().map(|t| t.eval(n)).sum()
    }
}

/// A vector `ℙ = (ℙ_1, …, ℙ_k)` of homogeneous polynomials in `d`
/// variables, each normalized to coprime integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseSystem {
    dim: usize,
    components: Vec<PhaseComponent>,
}

impl PhaseSystem {
    /// Build from raw components with rational coefficients. Each component
    /// is checked for homogeneity, then normalized: denominators cleared,
    /// the positive integer content divided out, and the applied factor
    /// recorded as the component scale.
    pub fn from_raw(dim: usize, raw: Vec<((u32, u32), Vec<MonomialTerm>)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("phase system needs at least one variable"));
        }
        let components = raw
            .into_iter()
            .map(|(label, terms)| normalize_component(dim, label, terms))
            .collect::<Result<Vec<_>>>()?;
        if components.is_empty() {
            return Err(Error::invalid("phase system has no components"));
        }
        Ok(PhaseSystem { dim, components })
    }

    /// `t ↦ (t, t², …, t^k)`.
    pub fn moment_curve(k: u32) -> Self {
        let raw = (1..=k)
            .map(|j| ((j, 0), vec![MonomialTerm::new(vec![j], BigRational::one())]))
            .collect();
        Self::from_raw(1, raw).expect("moment curve is well formed")
    }

    /// `t ↦ (t, t²)`.
    pub fn parabola() -> Self {
        Self::moment_curve(2)
    }

    /// `(a, b) ↦ (a, b, a² + b²)`.
    pub fn paraboloid() -> Self {
        let one = BigRational::one;
        Self::from_raw(
            2,
            vec![
                ((1, 0), vec![MonomialTerm::new(vec![1, 0], one())]),
                ((1, 1), vec![MonomialTerm::new(vec![0, 1], one())]),
                (
                    (2, 0),
                    vec![
                        MonomialTerm::new(vec![2, 0], one()),
                        MonomialTerm::new(vec![0, 2], one()),
                    ],
                ),
            ],
        )
        .expect("paraboloid is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[PhaseComponent] {
        &self.components
    }

    /// Homogeneity degrees `|e_j|`.
    pub fn degrees(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.degree).collect()
    }

    pub fn component(&self, label: (u32, u32)) -> Option<&PhaseComponent> {
        self.components.iter().find(|c| c.label == label)
    }

    /// Exact component values `ℙ(n)`.
    pub fn evaluate(&self, n: &[BigInt]) -> Result<Vec<BigInt>> {
        if n.len() != self.dim {
            return Err(Error::invalid(format!(
                "point has {} coordinates, system expects {}",
                n.len(),
                self.dim
            )));
        }
        Ok(self.components.iter().map(|c| c.eval(n)).collect())
    }

    pub fn evaluate_i64(&self, n: &[i64]) -> Result<Vec<BigInt>> {
        let n: Vec<BigInt> = n.iter().map(|&x| x.into()).collect();
        self.evaluate(&n)
    }

    /// CSV rows `j,l,multiindex,coefficient,component_scale`, header first.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,l,multiindex,coefficient,component_scale\n");
        for c in &self.components {
            for t in &c.terms {
                let mi = t
                    .exponents
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join("-");
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.label.0,
                    c.label.1,
                    mi,
                    t.coefficient.numer(),
                    format_ratio(&c.scale)
                );
            }
        }
        out
    }

    /// Read the format written by [`Self::to_csv`]. `#` lines and the header
    /// are skipped; rows sharing `(j, l)` form one component. The recorded
    /// scale is reapplied so that normalization reproduces it.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut order: Vec<(u32, u32)> = Vec::new();
        let mut groups: BTreeMap<(u32, u32), (ExactRational, Vec<MonomialTerm>)> =
            BTreeMap::new();
        let mut dim = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("j,") {
                continue;
            }
            let bad = |what: &str| Error::invalid(format!("phase CSV line {}: {what}", lineno + 1));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(bad("expected 5 fields"));
            }
            let j: u32 = fields[0].trim().parse().map_err(|_| bad("bad j"))?;
            let l: u32 = fields[1].trim().parse().map_err(|_| bad("bad l"))?;
            let exps = fields[2]
                .split('-')
                .map(|e| e.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad("bad multiindex"))?;
            if *dim.get_or_insert(exps.len()) != exps.len() {
                return Err(bad("inconsistent multiindex length"));
            }
            let coeff = parse_rational(fields[3])?;
            let scale = parse_rational(fields[4])?;
            let entry = groups.entry((j, l)).or_insert_with(|| {
                order.push((j, l));
                (scale.clone(), Vec::new())
            });
            entry.1.push(MonomialTerm::new(exps, coeff * &scale));
        }
        let dim = dim.ok_or_else(|| Error::invalid("phase CSV has no rows"))?;
        let raw = order
            .into_iter()
            .map(|label| {
                let (_, terms) = groups.remove(&label).expect("label recorded");
                (label, terms)
            })
            .collect();
        Self::from_raw(dim, raw)
    }
}

fn normalize_component(
    dim: usize,
    label: (u32, u32),
    terms: Vec<MonomialTerm>,
) -> Result<PhaseComponent> {
    // Merge repeated multiindices and drop zeros.
    let mut merged: Vec<MonomialTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exponents.len() != dim {
            return Err(Error::invalid(format!(
                "component {label:?}: multiindex {:?} has length {}, expected {dim}",
                t.exponents,
                t.exponents.len()
            )));
        }
        match merged.iter_mut().find(|m| m.exponents == t.exponents) {
            Some(m) => m.coefficient += t.coefficient,
            None => merged.push(t),
        }
    }
    merged.retain(|t| !t.coefficient.is_zero());
    let Some(first) = merged.first() else {
        return Err(Error::invalid(format!("component {label:?} is identically zero")));
    };
    let degree = first.degree();
    if merged.iter().any(|t| t.degree() != degree) {
        return Err(Error::invalid(format!("component {label:?} is not homogeneous")));
    }
    if degree == 0 {
        return Err(Error::invalid(format!("component {label:?} is constant")));
    }
    let lcm = merged
        .iter()
        .fold(BigInt::one(), |acc, t| acc.lcm(t.coefficient.denom()));
    let ints: Vec<BigInt> = merged
        .iter()
        .map(|t| (&t.coefficient * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c)).abs();
    let terms = merged
        .into_iter()
        .zip(ints)
        .map(|(t, c)| MonomialTerm::new(t.exponents, BigRational::from_integer(c / &content)))
        .collect();
    Ok(PhaseComponent {
        degree,
        label,
        terms,
        scale: BigRational::new(content, lcm),
    })
}

/// Multiindices `e` with `|e| = total` in `parts` slots, lexicographically
/// descending (so `(total, 0, …, 0)` comes first).
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, slot: usize, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot + 1 == parts {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=rem).rev() {
            cur.push(e);
            rec(rem - e, slot + 1, parts, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, 0, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// `j! / (e_0! ⋯ e_{d−1}!)`.
pub fn multinomial(exponents: &[u32]) -> BigInt {
    let fact = |n: u32| (1..=n).fold(BigInt::one(), |acc, i| acc * i);
    let total: u32 = exponents.iter().sum();
    exponents
        .iter()
        .fold(fact(total), |acc, &e| acc / fact(e))
}

/// Trace-expanded phase system of `ℚ(α)`: `d·k` components indexed by
/// `(j, ℓ)`, `1 ≤ j ≤ k`, `0 ≤ ℓ < d`, where component `(j, ℓ)` is
/// `Σ_{|e|=j} multinomial(j; e) · Tr(α^{ℓ + Σ_ι ι e_ι}) · n^e`, normalized.
pub fn expand_trace_phase(poly: &MinimalPolynomial, k: u32) -> Result<PhaseSystem> {
    if k == 0 {
        return Err(Error::invalid("trace phase system needs k >= 1"));
    }
    let d = poly.degree();
    let max_kappa = (d - 1) + (d - 1) * k as usize;
    let traces = poly.trace_powers(max_kappa);
    let mut raw = Vec::with_capacity(d * k as usize);
    for j in 1..=k {
        let shapes = compositions(j, d);
        for l in 0..d {
            let terms = shapes
                .iter()
                .filter_map(|e| {
                    let kappa = l + e.iter().enumerate().map(|(i, &x)| i * x as usize).sum::<usize>();
                    let tr = &traces[kappa];
                    if tr.is_zero() {
                        return None;
                    }
                    let coeff = tr * BigRational::from_integer(multinomial(e));
                    Some(MonomialTerm::new(e.clone(), coeff))
                })
                .collect();
            raw.push(((j, l as u32), terms));
        }
    }
    PhaseSystem::from_raw(d, raw)
}

/// The sign pattern of `Tr(i^κ)/2` for `ℚ(i)`: 0 when `ℓ + e_1` is odd,
/// −1 when it is 2 mod 4, +1 when it is 0 mod 4.
pub fn epsilon_table(l: u32, e1: u32) -> i8 {
    match (l + e1) % 4 {
        0 => 1,
        2 => -1,
        _ => 0,
    }
}
