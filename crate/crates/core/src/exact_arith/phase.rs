use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{ComplexValue, ExactRational};

/// A rational reduced modulo one, `0 <= value < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseFraction(ExactRational);

impl PhaseFraction {
    pub fn zero() -> Self {
        PhaseFraction(BigRational::zero())
    }

    /// Reduce an arbitrary rational modulo one.
    pub fn new(q: ExactRational) -> Self {
        let floor = q.floor();
        PhaseFraction(q - floor)
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn value(&self) -> &ExactRational {
        &self.0
    }

    pub fn into_inner(self) -> ExactRational {
        self.0
    }

    /// Multiply by an integer, reducing modulo one.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::new(&self.0 * BigRational::from_integer(n.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for &PhaseFraction {
    type Output = PhaseFraction;
    fn add(self, rhs: &PhaseFraction) -> PhaseFraction {
        PhaseFraction::new(&self.0 + &rhs.0)
    }
}

impl Add for PhaseFraction {
    type Output = PhaseFraction;
    fn add(self, rhs: PhaseFraction) -> PhaseFraction {
        &self + &rhs
    }
}

impl Sub for &PhaseFraction {
    type Output = PhaseFraction;
    fn sub(self, rhs: &PhaseFraction) -> PhaseFraction {
        PhaseFraction::new(&self.0 - &rhs.0)
    }
}

impl Neg for &PhaseFraction {
    type Output = PhaseFraction;
    fn neg(self) -> PhaseFraction {
        PhaseFraction::new(-&self.0)
    }
}

impl fmt::Display for PhaseFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `e(q) = exp(2πi q)`.
///
/// The quadrant and the reflection about the octant boundary are resolved
/// exactly, so `e(0)`, `e(1/4)`, `e(1/2)`, `e(3/4)` come out exact and the
/// transcendental evaluation only ever sees angles in `[0, π/4]`.
pub fn unit_root(q: &PhaseFraction) -> ComplexValue {
    let v = q.value();
    if let (Some(num), Some(den)) = (v.numer().to_u64(), v.denom().to_u64()) {
        return unit_root_ratio(num, den);
    }
    // Large denominators: same reduction, carried out in big integers.
    let four_num = v.numer() * 4u32;
    let (quadrant, rem) = four_num.div_rem(v.denom());
    let quadrant = quadrant.to_u8().unwrap_or(0) & 3;
    let den = v.denom();
    let twice_rem: BigInt = &rem * 2u32;
    let (c, s) = if &twice_rem <= den {
        let frac = BigRational::new(rem, den.clone()).to_f64().unwrap_or(0.0);
        let (s, c) = (frac * FRAC_PI_2).sin_cos();
        (c, s)
    } else {
        let comp = den - &rem;
        let frac = BigRational::new(comp, den.clone()).to_f64().unwrap_or(0.0);
        let (s, c) = (frac * FRAC_PI_2).sin_cos();
        (s, c)
    };
    rotate_quadrant(c, s, quadrant)
}

/// `e(num/den)` for machine-sized fractions; `den > 0`.
pub fn unit_root_ratio(num: u64, den: u64) -> ComplexValue {
    debug_assert!(den > 0);
    let num = num % den;
    let four = 4 * num as u128;
    let den128 = den as u128;
    let quadrant = (four / den128) as u8;
    let rem = four % den128;
    let (c, s) = if 2 * rem <= den128 {
        let (s, c) = ((rem as f64 / den as f64) * FRAC_PI_2).sin_cos();
        (c, s)
    } else {
        let comp = den128 - rem;
        let (s, c) = ((comp as f64 / den as f64) * FRAC_PI_2).sin_cos();
        (s, c)
    };
    rotate_quadrant(c, s, quadrant)
}

#[inline]
fn rotate_quadrant(c: f64, s: f64, quadrant: u8) -> ComplexValue {
    match quadrant {
        0 => ComplexValue::new(c, s),
        1 => ComplexValue::new(-s, c),
        2 => ComplexValue::new(-c, -s),
        _ => ComplexValue::new(s, -c),
    }
}

/// Precomputed `e(t/den)` for `t in 0..den`.
#[derive(Clone, Debug)]
pub struct UnitRootTable {
    den: u64,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl UnitRootTable {
    pub fn new(den: u64) -> Self {
        let (re, im) = (0..den)
            .map(|t| {
                let z = unit_root_ratio(t, den);
                (z.re, z.im)
            })
            .unzip();
        UnitRootTable { den, re, im }
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    #[inline]
    pub fn get(&self, t: u64) -> ComplexValue {
        let i = t as usize;
        ComplexValue::new(self.re[i], self.im[i])
    }

    #[inline]
    pub(crate) fn parts(&self) -> (&[f64], &[f64]) {
        (&self.re, &self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn exact_special_points() {
        assert_eq!(unit_root(&PhaseFraction::zero()), ComplexValue::new(1.0, 0.0));
        assert_eq!(
            unit_root(&PhaseFraction::from_ratio(1, 2)),
            ComplexValue::new(-1.0, 0.0)
        );
        assert_eq!(
            unit_root(&PhaseFraction::from_ratio(1, 4)),
            ComplexValue::new(0.0, 1.0)
        );
        assert_eq!(
            unit_root(&PhaseFraction::from_ratio(3, 4)),
            ComplexValue::new(0.0, -1.0)
        );
    }

    #[test]
    fn reduction_mod_one() {
        assert_eq!(PhaseFraction::from_ratio(26, 25), PhaseFraction::from_ratio(1, 25));
        assert_eq!(PhaseFraction::from_ratio(-1, 3), PhaseFraction::from_ratio(2, 3));
        let p = PhaseFraction::from_ratio(2, 7);
        assert_eq!(p.mul_int(&BigInt::from(4)), PhaseFraction::from_ratio(1, 7));
    }

    #[test]
    fn big_denominator_path_agrees() {
        let den = BigInt::from(3u64).pow(50);
        let num = BigInt::from(12345678901234567u64);
        let q = PhaseFraction::new(BigRational::new(num, den.clone()));
        let z = unit_root(&q);
        let angle = q.value().to_f64().unwrap() * std::f64::consts::TAU;
        assert!(close(z, ComplexValue::new(angle.cos(), angle.sin()), 1e-14));
        assert!((z.norm() - 1.0).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn table_matches_direct() {
        let t = UnitRootTable::new(625);
        for k in [0u64, 1, 156, 312, 313, 624] {
            assert_eq!(t.get(k), unit_root_ratio(k, 625));
        }
    }

    proptest! {
        #[test]
        fn multiplicative(a in 0u64..1_000_000, b in 1u64..=1_000_000, c in 0u64..1_000_000, d in 1u64..=1_000_000) {
            let p = PhaseFraction::from_ratio(a, b);
            let q = PhaseFraction::from_ratio(c, d);
            let lhs = unit_root(&p) * unit_root(&q);
            let rhs = unit_root(&(&p + &q));
            prop_assert!(close(lhs, rhs, 4.0 * f64::EPSILON), "{lhs} vs {rhs}");
        }

        #[test]
        fn phase_arithmetic_is_exact(a in -10_000i64..10_000, b in -10_000i64..10_000, den in 1i64..100_000, m in -50i64..50) {
            // Compare against plain integer arithmetic on numerators.
            let p = PhaseFraction::from_ratio(a, den);
            let q = PhaseFraction::from_ratio(b, den);
            let sum = &p + &q;
            let expected = PhaseFraction::from_ratio((a + b).rem_euclid(den), den);
            prop_assert_eq!(sum, expected);
            let scaled = p.mul_int(&BigInt::from(m));
            prop_assert_eq!(scaled, PhaseFraction::from_ratio((a * m).rem_euclid(den), den));
        }
    }
}
