//! Sparse subdomains of the torus `ℝ^k/ℤ^k` attached to a p-adic
//! localization `(N, σ)`.
//!
//! For homogeneity degrees `|e_j|` the domain is the union over index tuples
//! `0 ≤ ι_j < N^{|e_j|−σ_j}` of the boxes centred at `ι_j N^{σ_j−|e_j|}` with
//! half-widths `N^{−|e_j|}/2`. Its total measure is `N^{−Σσ_j}`; at `σ = 0`
//! the cells tile the torus.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{format_ratio, parse_rational_list, ExactRational};
use crate::padic::ScaleSpec;

/// Default limit on enumerated cells (and on ι-tuples in mean value sums).
pub const DEFAULT_CELL_BUDGET: u64 = 100_000_000;

/// Localization parameters `σ = (σ_1, …, σ_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalizationVector {
    pub sigma: Vec<ExactRational>,
}

impl LocalizationVector {
    pub fn new(sigma: Vec<ExactRational>) -> Self {
        LocalizationVector { sigma }
    }

    pub fn zeros(k: usize) -> Self {
        LocalizationVector {
            sigma: vec![BigRational::zero(); k],
        }
    }

    pub fn from_integers(sigma: &[i64]) -> Self {
        LocalizationVector {
            sigma: sigma
                .iter()
                .map(|&s| BigRational::from_integer(s.into()))
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(LocalizationVector {
            sigma: parse_rational_list(text)?,
        })
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.sigma.iter().all(|s| s.is_zero())
    }

    /// Dash-joined form used in CSV reports.
    pub fn to_label(&self) -> String {
        self.sigma
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }

    /// `σ_j K` as integers, validating `σ_j K ∈ ℤ` and `0 ≤ σ_j ≤ |e_j|`.
    pub fn scaled_exponents(&self, scale: &ScaleSpec, degrees: &[u32]) -> Result<Vec<u32>> {
        if self.sigma.len() != degrees.len() {
            return Err(Error::invalid(format!(
                "σ has {} entries but the phase has {} components",
                self.sigma.len(),
                degrees.len()
            )));
        }
        self.sigma
            .iter()
            .zip(degrees)
            .enumerate()
            .map(|(j, (s, &deg))| {
                if s.is_negative() || *s > BigRational::from_integer(deg.into()) {
                    return Err(Error::invalid(format!(
                        "σ_{} = {s} must lie in [0, {deg}]",
                        j + 1
                    )));
                }
                let sk = s * BigRational::from_integer(scale.k().into());
                if !sk.is_integer() {
                    return Err(Error::invalid(format!(
                        "σ_{}·K = {sk} is not an integer (K = {})",
                        j + 1,
                        scale.k()
                    )));
                }
                Ok(sk.to_integer().to_u32().expect("bounded by degree·K"))
            })
            .collect()
    }
}

/// Descriptor of `A_p^{(N,σ;ℙ)}`; depends on the phase only through its
/// homogeneity degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseDomain {
    pub scale: ScaleSpec,
    pub sigma: LocalizationVector,
    pub degrees: Vec<u32>,
    /// `log_p` of the cell counts: `|e_j| K − σ_j K`.
    pub count_exponents: Vec<u32>,
    /// `N^{|e_j|−σ_j}`.
    pub cell_counts: Vec<BigUint>,
    /// `N^{−|e_j|}/2`.
    pub cell_halfwidths: Vec<ExactRational>,
}

/// One cell of a sparse domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub index: Vec<u64>,
    pub center: Vec<ExactRational>,
    pub halfwidth: Vec<ExactRational>,
}

pub fn build_domain(
    scale: &ScaleSpec,
    sigma: &LocalizationVector,
    degrees: &[u32],
) -> Result<SparseDomain> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::invalid("homogeneity degrees must be positive"));
    }
    let sk = sigma.scaled_exponents(scale, degrees)?;
    let count_exponents: Vec<u32> = degrees
        .iter()
        .zip(&sk)
        .map(|(&deg, &s)| deg * scale.k() - s)
        .collect();
    let cell_counts = count_exponents.iter().map(|&e| scale.p_pow(e)).collect();
    let cell_halfwidths = degrees
        .iter()
        .map(|&deg| {
            BigRational::new(
                BigInt::one(),
                BigInt::from(scale.p_pow(deg * scale.k())) * 2u32,
            )
        })
        .collect();
    Ok(SparseDomain {
        scale: scale.clone(),
        sigma: sigma.clone(),
        degrees: degrees.to_vec(),
        count_exponents,
        cell_counts,
        cell_halfwidths,
    })
}

impl SparseDomain {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn total_cells(&self) -> BigUint {
        self.cell_counts.iter().product()
    }

    /// Total measure, computed as `Π_j count_j · 2·halfwidth_j`.
    pub fn measure(&self) -> ExactRational {
        self.cell_counts
            .iter()
            .zip(&self.cell_halfwidths)
            .map(|(c, h)| BigRational::from_integer(BigInt::from(c.clone())) * h * BigRational::from_integer(2.into()))
            .product()
    }

    /// `N^{σ_j − |e_j|}`, the spacing between neighbouring cell centres.
    pub fn spacing(&self, j: usize) -> ExactRational {
        BigRational::new(BigInt::one(), BigInt::from(self.cell_counts[j].clone()))
    }

    pub fn cell_volume(&self) -> ExactRational {
        self.cell_halfwidths
            .iter()
            .map(|h| h * BigRational::from_integer(2.into()))
            .product()
    }

    pub fn center(&self, index: &[u64]) -> Vec<ExactRational> {
        index
            .iter()
            .enumerate()
            .map(|(j, &i)| BigRational::from_integer(i.into()) * self.spacing(j))
            .collect()
    }

    /// Cell counts as machine integers, or a budget error naming the total.
    pub fn checked_counts(&self, budget: u64) -> Result<Vec<u64>> {
        let total = self.total_cells();
        if total > BigUint::from(budget) {
            return Err(Error::budget("sparse domain cells", total, budget));
        }
        Ok(self
            .cell_counts
            .iter()
            .map(|c| c.to_u64().expect("bounded by budget"))
            .collect())
    }
}

/// Cells in lexicographic order of ι (last coordinate fastest).
pub fn enumerate_cells(domain: &SparseDomain, budget: u64) -> Result<CellIter<'_>> {
    let counts = domain.checked_counts(budget)?;
    Ok(CellIter {
        domain,
        counts,
        next: Some(vec![0; domain.dim()]),
    })
}

pub struct CellIter<'a> {
    domain: &'a SparseDomain,
    counts: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for CellIter<'_> {
    type Item = Cell;

    fn next(&mut self) -> Option<Cell> {
        let index = self.next.take()?;
        let mut succ = index.clone();
        let mut j = succ.len();
        self.next = loop {
            if j == 0 {
                break None;
            }
            j -= 1;
            succ[j] += 1;
            if succ[j] < self.counts[j] {
                break Some(succ);
            }
            succ[j] = 0;
        };
        Some(Cell {
            center: self.domain.center(&index),
            halfwidth: self.domain.cell_halfwidths.clone(),
            index,
        })
    }
}

/// Write one CSV row per cell: ι components, centres, half-widths (exact
/// rationals as `a/b`). Returns the number of data rows.
pub fn write_cell_csv<W: Write>(domain: &SparseDomain, budget: u64, mut out: W) -> Result<u64> {
    let k = domain.dim();
    writeln!(
        out,
        "# domain-cells p={} K={} sigma={} degrees={}",
        domain.scale.p(),
        domain.scale.k(),
        domain.sigma.to_label(),
        domain
            .degrees
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("-")
    )?;
    let header: Vec<String> = (1..=k)
        .map(|j| format!("iota_{j}"))
        .chain((1..=k).map(|j| format!("center_{j}")))
        .chain((1..=k).map(|j| format!("halfwidth_{j}")))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    let mut rows = 0u64;
    for cell in enumerate_cells(domain, budget)? {
        let fields: Vec<String> = cell
            .index
            .iter()
            .map(|i| i.to_string())
            .chain(cell.center.iter().map(format_ratio))
            .chain(cell.halfwidth.iter().map(format_ratio))
            .collect();
        writeln!(out, "{}", fields.join(","))?;
        rows += 1;
    }
    Ok(rows)
}

/// [`write_cell_csv`] to a file path.
pub fn emit_cell_csv(domain: &SparseDomain, budget: u64, path: &std::path::Path) -> Result<u64> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    let rows = write_cell_csv(domain, budget, &mut w)?;
    w.flush()?;
    Ok(rows)
}
