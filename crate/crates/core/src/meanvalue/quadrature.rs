use crate::error::{Error, Result};

/// Default cap on tensor quadrature nodes per evaluation level.
pub const DEFAULT_MAX_NODES: u64 = 4_000_000;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1, "at least one node");
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    (p1, m as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Largest phase excursion (in periods) a subcell may carry at order `m`.
fn period_budget(m: usize) -> f64 {
    match m {
        0..=1 => 0.02,
        2..=3 => 0.06,
        4..=5 => 0.15,
        6..=7 => 0.5,
        8..=9 => 0.9,
        10..=11 => 1.8,
        12 => 2.5,
        _ => 0.2 * m as f64,
    }
}

const AUTO_ORDERS: [usize; 5] = [4, 6, 8, 10, 12];

/// Per-axis node count and dyadic subdivision depth. `None` fields are
/// chosen from the phase excursion across the cell.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    pub order: Option<usize>,
    pub depth: Option<u32>,
    pub max_nodes: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            order: None,
            depth: None,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

/// A one-dimensional composite rule on `[−h, h]` with weights normalized
/// to sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisRule {
    pub order: usize,
    pub depth: u32,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisRule {
    pub fn new(halfwidth: f64, order: usize, depth: u32) -> Self {
        let (x, w) = gauss_legendre(order);
        let pieces = 1usize << depth;
        let sub = 2.0 * halfwidth / pieces as f64;
        let mut nodes = Vec::with_capacity(pieces * order);
        let mut weights = Vec::with_capacity(pieces * order);
        for piece in 0..pieces {
            let mid = -halfwidth + (piece as f64 + 0.5) * sub;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * sub * xi);
                weights.push(wi / (2.0 * pieces as f64));
            }
        }
        AxisRule {
            order,
            depth,
            nodes,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A tensor rule over the centred cell: a fine level and a coarser level of
/// order two lower on the same subcells, whose difference is the reported
/// error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraturePlan {
    pub fine: Vec<AxisRule>,
    pub coarse: Vec<AxisRule>,
    /// Phase excursion across the whole cell, in periods, per axis.
    pub excursions: Vec<f64>,
}

impl QuadraturePlan {
    /// `halfwidths[j]` is the cell half-width on axis j and `spreads[j]` the
    /// range `max_n ℙ_j(n) − min_n ℙ_j(n)`; the integrand `|S|^r` carries
    /// frequencies up to `max(1, r/2)` times that range.
    pub fn new(config: &QuadratureConfig, halfwidths: &[f64], spreads: &[f64], r: f64) -> Result<Self> {
        if let Some(m) = config.order {
            if !(1..=64).contains(&m) {
                return Err(Error::invalid(format!("quadrature order {m} outside 1..=64")));
            }
        }
        if let Some(s) = config.depth {
            if s > 30 {
                return Err(Error::invalid(format!("subdivision depth {s} exceeds 30")));
            }
        }
        let boost = (r / 2.0).max(1.0);
        let excursions: Vec<f64> = halfwidths
            .iter()
            .zip(spreads)
            .map(|(h, s)| 2.0 * h * s * boost)
            .collect();
        let mut fine = Vec::with_capacity(halfwidths.len());
        let mut coarse = Vec::with_capacity(halfwidths.len());
        for (&h, &phi) in halfwidths.iter().zip(&excursions) {
            let (order, depth) = match (config.order, config.depth) {
                (Some(m), Some(s)) => (m, s),
                (Some(m), None) => (m, depth_for(phi, period_budget(m))),
                (None, Some(s)) => {
                    let per = phi / (1u64 << s) as f64;
                    let m = AUTO_ORDERS
                        .iter()
                        .copied()
                        .find(|&m| per <= period_budget(m))
                        .unwrap_or(12);
                    (m, s)
                }
                (None, None) => match AUTO_ORDERS.iter().copied().find(|&m| phi <= period_budget(m)) {
                    Some(m) => (m, 0),
                    None => (12, depth_for(phi, period_budget(12))),
                },
            };
            fine.push(AxisRule::new(h, order, depth));
            coarse.push(AxisRule::new(h, order.saturating_sub(2).max(1), depth));
        }
        let plan = QuadraturePlan {
            fine,
            coarse,
            excursions,
        };
        let nodes = plan.fine_nodes();
        if nodes > config.max_nodes as u128 {
            return Err(Error::budget("quadrature nodes", nodes, config.max_nodes));
        }
        Ok(plan)
    }

    pub fn fine_nodes(&self) -> u128 {
        self.fine.iter().map(|a| a.len() as u128).product()
    }

    pub fn coarse_nodes(&self) -> u128 {
        self.coarse.iter().map(|a| a.len() as u128).product()
    }

    /// All fine-level nodes, last axis fastest.
    pub fn fine_points(&self) -> Vec<Vec<f64>> {
        tensor_points(&self.fine).map(|(v, _)| v).collect()
    }
}

fn depth_for(excursion: f64, budget: f64) -> u32 {
    let mut s = 0;
    while excursion / (1u64 << s) as f64 > budget && s < 30 {
        s += 1;
    }
    s
}

/// Tensor nodes with product weights, last axis fastest.
pub(crate) fn tensor_points(axes: &[AxisRule]) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
    let total: usize = axes.iter().map(AxisRule::len).product();
    (0..total).map(move |i| tensor_point(axes, i))
}

pub(crate) fn tensor_point(axes: &[AxisRule], mut index: usize) -> (Vec<f64>, f64) {
    let mut v = vec![0.0; axes.len()];
    let mut w = 1.0;
    for (j, axis) in axes.iter().enumerate().rev() {
        let i = index % axis.len();
        index /= axis.len();
        v[j] = axis.nodes[i];
        w *= axis.weights[i];
    }
    (v, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_integrate_polynomials() {
        for m in 1..=14 {
            let (x, w) = gauss_legendre(m);
            for deg in 0..2 * m {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "m={m} deg={deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn known_three_point_rule() {
        let (x, w) = gauss_legendre(3);
        assert!((x[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_average_within_budget() {
        // average of e(θt) over t ∈ [−1/2, 1/2] is sin(πθ)/(πθ)
        for &m in &AUTO_ORDERS {
            let theta = period_budget(m);
            let rule = AxisRule::new(0.5, m, 0);
            let (re, im) = rule.nodes.iter().zip(&rule.weights).fold((0.0, 0.0), |(a, b), (t, w)| {
                let ph = std::f64::consts::TAU * theta * t;
                (a + w * ph.cos(), b + w * ph.sin())
            });
            let exact = (std::f64::consts::PI * theta).sin() / (std::f64::consts::PI * theta);
            assert!((re - exact).abs() < 1e-9 && im.abs() < 1e-14, "m={m}: {re} vs {exact}");
        }
    }

    #[test]
    fn plan_choices() {
        let cfg = QuadratureConfig::default();
        let plan = QuadraturePlan::new(&cfg, &[1.0 / 18.0, 1.0 / 162.0], &[8.0, 64.0], 4.0).unwrap();
        assert_eq!(plan.fine[0].order, 10);
        assert_eq!(plan.fine[1].order, 10);
        assert_eq!(plan.coarse[0].order, 8);
        assert_eq!(plan.fine_nodes(), 100);
        let fixed = QuadratureConfig {
            order: Some(4),
            ..Default::default()
        };
        let plan = QuadraturePlan::new(&fixed, &[0.5], &[3.0], 2.0).unwrap();
        // excursion 3 periods at ≤ 0.15 per subcell needs 32 pieces
        assert_eq!(plan.fine[0].depth, 5);
        let tiny = QuadratureConfig {
            max_nodes: 10,
            ..Default::default()
        };
        assert!(matches!(
            QuadraturePlan::new(&tiny, &[0.5, 0.5], &[1.0, 1.0], 2.0),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn weights_sum_to_one() {
        let rule = AxisRule::new(0.01, 6, 3);
        assert_eq!(rule.len(), 48);
        assert!((rule.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(rule.nodes.iter().all(|x| x.abs() < 0.01));
    }
}
