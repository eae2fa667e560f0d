use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact_arith::ComplexValue;

/// A finite set `Ω ⊂ ℤ^d` of frequencies, with the scale `N` it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexDomain {
    points: Vec<Vec<i64>>,
    bound: u64,
    lookup: HashMap<Vec<i64>, usize>,
}

impl IndexDomain {
    pub fn new(points: Vec<Vec<i64>>, bound: u64) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("index domain is empty"));
        };
        let d = first.len();
        if d == 0 {
            return Err(Error::invalid("index domain points need at least one coordinate"));
        }
        let mut lookup = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::invalid(format!("point {p:?} does not have {d} coordinates")));
            }
            if lookup.insert(p.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate point {p:?} in index domain")));
            }
        }
        Ok(IndexDomain {
            points,
            bound,
            lookup,
        })
    }

    /// The half-open box `[0, N)^d`, lexicographic order.
    pub fn box_domain(n: u64, d: usize) -> Self {
        let total = (n as usize).pow(d as u32);
        let points = (0..total)
            .map(|mut idx| {
                let mut p = vec![0i64; d];
                for slot in p.iter_mut().rev() {
                    *slot = (idx % n as usize) as i64;
                    idx /= n as usize;
                }
                p
            })
            .collect();
        IndexDomain::new(points, n).expect("box points are distinct")
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn position(&self, point: &[i64]) -> Option<usize> {
        self.lookup.get(point).copied()
    }
}

/// Complex coefficients `{a_n}` indexed by the points of an [`IndexDomain`],
/// stored in the domain's point order. Points without an entry carry zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector {
    values: Vec<ComplexValue>,
}

impl CoefficientVector {
    pub fn from_values(omega: &IndexDomain, values: Vec<ComplexValue>) -> Result<Self> {
        if values.len() != omega.len() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} points",
                values.len(),
                omega.len()
            )));
        }
        Ok(CoefficientVector { values })
    }

    pub fn from_map(omega: &IndexDomain, entries: &HashMap<Vec<i64>, ComplexValue>) -> Result<Self> {
        let mut values = vec![ComplexValue::new(0.0, 0.0); omega.len()];
        for (point, a) in entries {
            let i = omega
                .position(point)
                .ok_or_else(|| Error::invalid(format!("coefficient key {point:?} is not in Ω")))?;
            values[i] = *a;
        }
        Ok(CoefficientVector { values })
    }

    pub fn ones(omega: &IndexDomain) -> Self {
        CoefficientVector {
            values: vec![ComplexValue::new(1.0, 0.0); omega.len()],
        }
    }

    pub fn zeros(omega: &IndexDomain) -> Self {
        CoefficientVector {
            values: vec![ComplexValue::new(0.0, 0.0); omega.len()],
        }
    }

    pub fn values(&self) -> &[ComplexValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, c: ComplexValue) -> Self {
        CoefficientVector {
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    /// `Σ_n |a_n|^r`.
    pub fn lr_norm_pow(&self, r: f64) -> f64 {
        let terms: Vec<f64> = self.values.iter().map(|a| a.norm().powf(r)).collect();
        crate::exact_arith::compensated_sum_real(&terms)
    }

    /// Load `index,re,im` rows (index dash-joined). `#` lines and a header
    /// starting with a non-numeric field are skipped.
    pub fn load_csv(omega: &IndexDomain, text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |what: &str| Error::invalid(format!("coefficient CSV line {}: {what}", lineno + 1));
            if fields.len() != 3 {
                return Err(bad("expected index,re,im"));
            }
            let parsed: std::result::Result<Vec<i64>, _> =
                fields[0].split('-').map(str::parse::<i64>).collect();
            let Ok(point) = parsed else {
                if lineno == 0 || entries.is_empty() {
                    continue; // header
                }
                return Err(bad("malformed index tuple"));
            };
            let re: f64 = fields[1].parse().map_err(|_| bad("malformed real part"))?;
            let im: f64 = fields[2].parse().map_err(|_| bad("malformed imaginary part"))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(bad("non-finite coefficient"));
            }
            if entries.insert(point.clone(), ComplexValue::new(re, im)).is_some() {
                return Err(bad("duplicate index"));
            }
        }
        Self::from_map(omega, &entries)
    }
}

/// Ways of drawing coefficient vectors for lower-bound estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sampler {
    AllOnes,
    /// All weight on the first point of Ω.
    SinglePoint,
    /// Unit-modulus entries with uniformly random phases.
    RandomPhases { seed: u64 },
    /// Random support (each point kept with probability 1/2, at least one)
    /// carrying random unit-modulus phases.
    RandomSparse { seed: u64 },
}

impl Sampler {
    pub fn name(&self) -> &'static str {
        match self {
            Sampler::AllOnes => "all-ones",
            Sampler::SinglePoint => "single-point",
            Sampler::RandomPhases { .. } => "random-phases",
            Sampler::RandomSparse { .. } => "random-sparse",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Sampler::RandomPhases { seed } | Sampler::RandomSparse { seed } => Some(*seed),
            _ => None,
        }
    }

    /// Parse `all-ones`, `single-point`, `random-phases`, `random-sparse`;
    /// random samplers take `seed`.
    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        match name.trim() {
            "all-ones" => Ok(Sampler::AllOnes),
            "single-point" => Ok(Sampler::SinglePoint),
            "random-phases" => Ok(Sampler::RandomPhases { seed }),
            "random-sparse" => Ok(Sampler::RandomSparse { seed }),
            other => Err(Error::invalid(format!("unknown sampler {other:?}"))),
        }
    }

    pub fn sample(&self, omega: &IndexDomain) -> CoefficientVector {
        let n = omega.len();
        let phase = |rng: &mut ChaCha8Rng| {
            let t: f64 = rng.gen();
            ComplexValue::from_polar(1.0, std::f64::consts::TAU * t)
        };
        let values = match *self {
            Sampler::AllOnes => vec![ComplexValue::new(1.0, 0.0); n],
            Sampler::SinglePoint => {
                let mut v = vec![ComplexValue::new(0.0, 0.0); n];
                v[0] = ComplexValue::new(1.0, 0.0);
                v
            }
            Sampler::RandomPhases { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| phase(&mut rng)).collect()
            }
            Sampler::RandomSparse { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut v: Vec<ComplexValue> = (0..n)
                    .map(|_| {
                        let keep: bool = rng.gen();
                        let z = phase(&mut rng);
                        if keep {
                            z
                        } else {
                            ComplexValue::new(0.0, 0.0)
                        }
                    })
                    .collect();
                if v.iter().all(|z| *z == ComplexValue::new(0.0, 0.0)) {
                    let i = rng.gen_range(0..n);
                    v[i] = phase(&mut rng);
                }
                v
            }
        };
        CoefficientVector { values }
    }
}

impl fmt::Display for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.seed() {
            Some(seed) => write!(f, "{}(seed={seed})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}
