use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{parse_rational_list, ExactRational};

/// Largest |integer| for which the rational-root screen enumerates divisors.
const ROOT_SCREEN_LIMIT: u64 = 1_000_000_000_000;

/// Monic `P(x) = x^d + c_{d-1} x^{d-1} + … + c_0` with rational coefficients.
///
/// Coefficients are stored ascending (`c_0` first); the leading 1 is implied.
/// For `d > 1` construction rejects polynomials with a rational root, which
/// screens out the common reducible inputs. It does not prove irreducibility.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalPolynomial {
    coeffs: Vec<ExactRational>,
}

impl MinimalPolynomial {
    pub fn new(coeffs: Vec<ExactRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("minimal polynomial needs degree >= 1"));
        }
        let poly = MinimalPolynomial { coeffs };
        if poly.degree() > 1 {
            if let Some(root) = poly.find_rational_root() {
                return Err(Error::invalid(format!(
                    "polynomial {poly} has the rational root {root} and is reducible"
                )));
            }
        }
        Ok(poly)
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Parse the ascending comma-separated form `"c_0,c_1,…,c_{d-1}"`.
    /// `x^3 - 2` is `"-2,0,0"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_rational_list(text)?)
    }

    /// The polynomial `x` (so α = 0), which makes every trace system the
    /// moment curve.
    pub fn x() -> Self {
        MinimalPolynomial {
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Ascending non-leading coefficients `c_0 … c_{d-1}`.
    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Ascending comma-separated text form, inverse of [`Self::parse`].
    pub fn to_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let mut acc = BigRational::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `Tr_{ℚ(α)/ℚ}(α^κ)`, the κ-th power sum of the roots of `P`.
    pub fn trace_power(&self, kappa: usize) -> ExactRational {
        self.trace_powers(kappa).pop().unwrap_or_else(BigRational::zero)
    }

    /// Power sums `p_0 … p_{max}` by Newton's identities:
    /// `p_κ = −Σ_{i=1}^{min(κ−1,d)} c_{d−i} p_{κ−i} − [κ ≤ d] κ c_{d−κ}`.
    pub fn trace_powers(&self, max: usize) -> Vec<ExactRational> {
        let d = self.degree();
        let mut p: Vec<ExactRational> = Vec::with_capacity(max + 1);
        p.push(BigRational::from_integer(d.into()));
        for kappa in 1..=max {
            let mut acc = BigRational::zero();
            for i in 1..=(kappa - 1).min(d) {
                acc -= &self.coeffs[d - i] * &p[kappa - i];
            }
            if kappa <= d {
                acc -= BigRational::from_integer(kappa.into()) * &self.coeffs[d - kappa];
            }
            p.push(acc);
        }
        p
    }

    /// Integer form `L·P(x)` with `L` the lcm of the coefficient denominators,
    /// ascending and including the leading coefficient `L`.
    pub(crate) fn cleared(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut out: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        out.push(lcm);
        out
    }

    fn find_rational_root(&self) -> Option<ExactRational> {
        let a = self.cleared();
        let a0 = a[0].abs();
        let lead = a[a.len() - 1].abs();
        if a0.is_zero() {
            return Some(BigRational::zero());
        }
        let (Some(a0), Some(lead)) = (a0.to_u64(), lead.to_u64()) else {
            return None;
        };
        if a0 > ROOT_SCREEN_LIMIT || lead > ROOT_SCREEN_LIMIT {
            return None;
        }
        for u in divisors(a0) {
            for v in divisors(lead) {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(BigInt::from(u) * sign, BigInt::from(v));
                    if self.eval(&cand).is_zero() {
                        return Some(cand);
                    }
                }
            }
        }
        None
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        write!(f, "x^{d}")?;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            match i {
                0 => write!(f, " {sign} {}", c.abs())?,
                1 => write!(f, " {sign} {}x", c.abs())?,
                _ => write!(f, " {sign} {}x^{i}", c.abs())?,
            }
        }
        Ok(())
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> ExactRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn newton_traces() {
        let i = MinimalPolynomial::from_integers(&[1, 0]).unwrap();
        assert_eq!(i.trace_power(0), int(2));
        assert_eq!(i.trace_power(2), int(-2));
        let cbrt2 = MinimalPolynomial::from_integers(&[-2, 0, 0]).unwrap();
        let traces = cbrt2.trace_powers(6);
        assert_eq!(traces, vec![int(3), int(0), int(0), int(6), int(0), int(0), int(12)]);
    }

    #[test]
    fn rational_root_screen() {
        // x^2 - 1 = (x-1)(x+1)
        assert!(MinimalPolynomial::from_integers(&[-1, 0]).is_err());
        // x^3 - 8 has root 2
        assert!(MinimalPolynomial::from_integers(&[-8, 0, 0]).is_err());
        // x^2 - x/4 ... root 0
        assert!(MinimalPolynomial::parse("0,-1/4").is_err());
        // x^2 - 1/4 has root 1/2
        assert!(MinimalPolynomial::parse("-1/4,0").is_err());
        assert!(MinimalPolynomial::from_integers(&[-2, 0]).is_ok());
        // degree one is always accepted
        assert!(MinimalPolynomial::from_integers(&[-1]).is_ok());
        assert!(MinimalPolynomial::parse("").is_err());
    }

    #[test]
    fn display_and_text() {
        let p = MinimalPolynomial::parse("-2,0,0").unwrap();
        assert_eq!(p.to_string(), "x^3 - 2");
        assert_eq!(p.to_text(), "-2,0,0");
        let q = MinimalPolynomial::parse("1/2,-3").unwrap();
        assert_eq!(q.to_string(), "x^2 - 3x + 1/2");
        assert_eq!(MinimalPolynomial::parse(&q.to_text()).unwrap(), q);
    }

    #[test]
    fn cleared_form() {
        let q = MinimalPolynomial::parse("1/2,-1/3").unwrap();
        let c: Vec<i64> = q.cleared().iter().map(|b| b.to_i64().unwrap()).collect();
        assert_eq!(c, vec![3, -2, 6]);
    }
}
