use num_rational::BigRational;
use num_traits::Zero;

use super::MinimalPolynomial;
use crate::error::{Error, Result};
use crate::exact_arith::ExactRational;

/// An element of `ℚ(α) ≅ ℚ[x]/(P)` in the power basis `1, α, …, α^{d−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<ExactRational>,
}

impl FieldElement {
    pub fn new(coords: Vec<ExactRational>) -> Self {
        FieldElement { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        FieldElement {
            coords: coords
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        }
    }

    pub fn one(degree: usize) -> Self {
        let mut coords = vec![BigRational::zero(); degree];
        if degree > 0 {
            coords[0] = BigRational::from_integer(1.into());
        }
        FieldElement { coords }
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }
}

/// Product in `ℚ[x]/(P)`, exact.
pub fn field_multiply(
    a: &FieldElement,
    b: &FieldElement,
    poly: &MinimalPolynomial,
) -> Result<FieldElement> {
    let d = poly.degree();
    if a.degree() != d || b.degree() != d {
        return Err(Error::invalid(format!(
            "field elements of lengths {} and {} do not match degree {d}",
            a.degree(),
            b.degree()
        )));
    }
    let mut prod = vec![BigRational::zero(); 2 * d - 1];
    for (i, x) in a.coords.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coords.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    // x^m = x^{m−d} · (−c_{d−1} x^{d−1} − … − c_0), highest degree first.
    for m in (d..prod.len()).rev() {
        let top = std::mem::replace(&mut prod[m], BigRational::zero());
        if top.is_zero() {
            continue;
        }
        for (i, c) in poly.coeffs().iter().enumerate() {
            prod[m - d + i] -= &top * c;
        }
    }
    prod.truncate(d);
    Ok(FieldElement { coords: prod })
}
