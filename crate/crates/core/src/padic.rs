//! Finite-precision p-adic arithmetic: the standard character on rationals
//! with p-power denominators, valuations, and Hensel lifting of √−1.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{ExactRational, PhaseFraction};

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A scale `N = p^K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaleSpec {
    p: u64,
    k: u32,
    n: BigUint,
}

impl ScaleSpec {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::invalid("scale exponent K must be positive"));
        }
        Ok(ScaleSpec {
            p,
            k,
            n: BigUint::from(p).pow(k),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn n_u64(&self) -> Option<u64> {
        self.n.to_u64()
    }

    /// `p^e`.
    pub fn p_pow(&self, e: u32) -> BigUint {
        BigUint::from(self.p).pow(e)
    }
}

impl fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}^{}={}", self.p, self.k, self.n)
    }
}

/// `χ_p(q)` as a phase: for `q` with p-power denominator the character is
/// `e(q)`, i.e. the fractional part of `q`.
pub fn chi_p(q: &ExactRational, p: u64) -> Result<PhaseFraction> {
    let mut den = q.denom().clone();
    let pb = BigInt::from(p);
    while den.is_multiple_of(&pb) {
        den /= &pb;
    }
    if !den.is_one() {
        return Err(Error::invalid(format!(
            "denominator of {q} is not a power of {p}"
        )));
    }
    Ok(PhaseFraction::new(q.clone()))
}

/// p-adic valuation of a rational; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

pub fn valuation(q: &ExactRational, p: u64) -> Valuation {
    if q.is_zero() {
        return Valuation::Infinity;
    }
    let count = |x: &BigInt| {
        let pb = BigInt::from(p);
        let mut x = x.abs();
        let mut v = 0i64;
        while x.is_multiple_of(&pb) {
            x /= &pb;
            v += 1;
        }
        v
    };
    Valuation::Finite(count(q.numer()) - count(q.denom()))
}

/// A square root of −1 modulo `p^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselRoot {
    pub p: u64,
    pub k: u32,
    pub xi: BigUint,
}

impl HenselRoot {
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k)
    }

    /// Base-p digits `b_0, b_1, …, b_{K−1}` of `xi`.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigUint::from(self.p);
        let mut x = self.xi.clone();
        (0..self.k)
            .map(|_| {
                let (q, r) = x.div_rem(&p);
                x = q;
                r.to_u64().unwrap_or(0)
            })
            .collect()
    }

    /// `xi mod p^{k'}`.
    pub fn truncate(&self, k: u32) -> HenselRoot {
        let k = k.min(self.k);
        HenselRoot {
            p: self.p,
            k,
            xi: &self.xi % BigUint::from(self.p).pow(k),
        }
    }
}

/// Lift the smaller square root of −1 modulo `p` to modulus `p^K` by the
/// Newton step `x ← x − (x² + 1)(2x)^{−1}`, doubling precision each step.
pub fn hensel_sqrt_minus_one(p: u64, k: u32) -> Result<HenselRoot> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if p % 4 != 1 {
        return Err(Error::UnsupportedPrime {
            p,
            reason: "√−1 exists in ℚ_p only for p ≡ 1 (mod 4)",
        });
    }
    if k == 0 {
        return Err(Error::invalid("Hensel precision K must be positive"));
    }
    let base = (2..=p - 2)
        .find(|&x| (x as u128 * x as u128 + 1).is_multiple_of(p as u128))
        .expect("p ≡ 1 mod 4 has a square root of −1");
    let pb = BigInt::from(p);
    let mut x = BigInt::from(base);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let modulus = pb.pow(prec);
        let f = (&x * &x + 1u32).mod_floor(&modulus);
        let inv = mod_inverse(&(&x * 2u32), &modulus);
        x = (&x - f * inv).mod_floor(&modulus);
    }
    Ok(HenselRoot {
        p,
        k,
        xi: x.to_biguint().expect("reduced residue is nonnegative"),
    })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let eg = a.mod_floor(m).extended_gcd(m);
    debug_assert!(eg.gcd.is_one());
    eg.x.mod_floor(m)
}

/// `|q|_p = p^{−v}` as an exact rational (zero for `q = 0`).
pub fn abs_p(q: &ExactRational, p: u64) -> ExactRational {
    match valuation(q, p) {
        Valuation::Infinity => BigRational::zero(),
        Valuation::Finite(v) => {
            let pb = BigInt::from(p).pow(v.unsigned_abs() as u32);
            if v >= 0 {
                BigRational::new(BigInt::one(), pb)
            } else {
                BigRational::from_integer(pb)
            }
        }
    }
}
