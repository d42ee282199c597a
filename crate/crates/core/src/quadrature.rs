//! Averaging rules over a uniform distribution on `[lo, hi]`.
//!
//! Every rule returns nodes with weights that sum to one, so a weighted sum
//! is directly the mean of the integrand over the interval.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadratureRule {
    GaussLegendre,
    CompositeSimpson,
    /// Uniform sampling from a ChaCha8 stream seeded with `QuadratureSpec::seed`.
    MonteCarlo,
}

impl QuadratureRule {
    pub fn name(self) -> &'static str {
        match self {
            QuadratureRule::GaussLegendre => "gauss-legendre",
            QuadratureRule::CompositeSimpson => "simpson",
            QuadratureRule::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuadratureRule {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gauss-legendre" => Ok(QuadratureRule::GaussLegendre),
            "simpson" => Ok(QuadratureRule::CompositeSimpson),
            "monte-carlo" => Ok(QuadratureRule::MonteCarlo),
            other => Err(format!(
                "unknown rule `{other}` (expected gauss-legendre, simpson or monte-carlo)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    /// Nodes per dimension (sample count for Monte Carlo).
    pub nodes: usize,
    pub seed: u64,
}

pub const DEFAULT_NODES: usize = 129;

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec::gauss(DEFAULT_NODES)
    }
}

impl QuadratureSpec {
    pub fn gauss(nodes: usize) -> Self {
        QuadratureSpec {
            rule: QuadratureRule::GaussLegendre,
            nodes,
            seed: 0,
        }
    }

    pub fn simpson(nodes: usize) -> Self {
        QuadratureSpec {
            rule: QuadratureRule::CompositeSimpson,
            nodes,
            seed: 0,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        QuadratureSpec {
            rule: QuadratureRule::MonteCarlo,
            nodes: samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.rule {
            QuadratureRule::GaussLegendre if self.nodes < 3 => Err(Error::Quadrature(format!(
                "gauss-legendre needs at least 3 nodes, got {}",
                self.nodes
            ))),
            QuadratureRule::CompositeSimpson if self.nodes < 3 || self.nodes.is_multiple_of(2) => {
                Err(Error::Quadrature(format!(
                    "simpson needs an odd node count >= 3, got {}",
                    self.nodes
                )))
            }
            QuadratureRule::MonteCarlo if self.nodes == 0 => {
                Err(Error::Quadrature("monte-carlo needs at least one sample".into()))
            }
            _ => Ok(()),
        }
    }

    /// Nodes and normalized weights for the mean over `[lo, hi]`.
    pub fn nodes_1d(&self, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        Ok(match self.rule {
            QuadratureRule::GaussLegendre => gauss_legendre(self.nodes)
                .into_iter()
                .map(|(x, w)| (mid + half * x, 0.5 * w))
                .collect(),
            QuadratureRule::CompositeSimpson => simpson_unit(self.nodes)
                .into_iter()
                .map(|(x, w)| (mid + half * x, 0.5 * w))
                .collect(),
            QuadratureRule::MonteCarlo => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let w = 1.0 / self.nodes as f64;
                (0..self.nodes)
                    .map(|_| (lo + (hi - lo) * rng.random::<f64>(), w))
                    .collect()
            }
        })
    }

    /// Nodes and weights for the mean over the square `[lo, hi]²`.
    ///
    /// Deterministic rules use the tensor product; Monte Carlo draws
    /// `nodes` independent pairs.
    pub fn nodes_2d(&self, lo: f64, hi: f64) -> Result<Vec<((f64, f64), f64)>> {
        if self.rule == QuadratureRule::MonteCarlo {
            self.validate()?;
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let w = 1.0 / self.nodes as f64;
            return Ok((0..self.nodes)
                .map(|_| {
                    let a = lo + (hi - lo) * rng.random::<f64>();
                    let b = lo + (hi - lo) * rng.random::<f64>();
                    ((a, b), w)
                })
                .collect());
        }
        let line = self.nodes_1d(lo, hi)?;
        Ok(line
            .iter()
            .flat_map(|&(x, wx)| line.iter().map(move |&(y, wy)| ((x, y), wx * wy)))
            .collect())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (weights sum to 2).
///
/// Roots of `P_n` by Newton iteration from the Tricomi initial guesses.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        // exact zero for the middle node
        out[n / 2].0 = 0.0;
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Simpson on `[-1, 1]` with an odd number of nodes.
fn simpson_unit(n: usize) -> Vec<(f64, f64)> {
    let h = 2.0 / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let x = -1.0 + h * i as f64;
            let c = if i == 0 || i == n - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (x, c * h / 3.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean(spec: &QuadratureSpec, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        spec.nodes_1d(lo, hi)
            .unwrap()
            .into_iter()
            .map(|(x, w)| w * f(x))
            .sum()
    }

    #[test]
    fn gauss_weights_and_symmetry() {
        for n in [3, 4, 5, 64, 129, 257, 513] {
            let g = gauss_legendre(n);
            let total: f64 = g.iter().map(|&(_, w)| w).sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} total={total}");
            for i in 0..n {
                assert!((g[i].0 + g[n - 1 - i].0).abs() < 1e-15);
                assert!(g[i].1 > 0.0);
            }
            assert!(g.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn gauss_three_point_nodes() {
        let g = gauss_legendre(3);
        let x = (0.6f64).sqrt();
        assert!((g[0].0 + x).abs() < 1e-15 && g[1].0 == 0.0 && (g[2].0 - x).abs() < 1e-15);
        assert!((g[0].1 - 5.0 / 9.0).abs() < 1e-15 && (g[1].1 - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_is_exact_for_polynomials_up_to_degree_2n_minus_1() {
        let n = 7;
        let g = gauss_legendre(n);
        for deg in 0..(2 * n) {
            let integral: f64 = g.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((integral - exact).abs() < 1e-14, "deg {deg}");
        }
    }

    #[test]
    fn oscillatory_mean_matches_midpoint_oracle() {
        let (lo, hi) = (0.5, 1.5);
        let f = |x: f64| (4.0 * x).cos();
        // midpoint Riemann sum with 1e5 cells
        let cells = 100_000;
        let h = (hi - lo) / cells as f64;
        let oracle: f64 =
            (0..cells).map(|i| f(lo + (i as f64 + 0.5) * h)).sum::<f64>() / cells as f64;
        let gauss = mean(&QuadratureSpec::gauss(129), lo, hi, f);
        assert!((gauss - oracle).abs() < 1e-9);
        let simpson = mean(&QuadratureSpec::simpson(2001), lo, hi, f);
        assert!((simpson - oracle).abs() < 1e-9);
    }

    #[test]
    fn rule_minimums_are_enforced() {
        assert!(QuadratureSpec::gauss(2).validate().is_err());
        assert!(QuadratureSpec::simpson(4).validate().is_err());
        assert!(QuadratureSpec::simpson(1).validate().is_err());
        assert!(QuadratureSpec::monte_carlo(0, 1).validate().is_err());
        assert!(QuadratureSpec::simpson(5).validate().is_ok());
        assert!(matches!(
            QuadratureSpec::gauss(1).nodes_1d(0.0, 1.0),
            Err(Error::Quadrature(_))
        ));
    }

    #[test]
    fn monte_carlo_is_seeded_and_recovers_uniform_variance() {
        let spec = QuadratureSpec::monte_carlo(200_000, 42);
        let (center, width) = (1.0, 3.0);
        let a = spec.nodes_1d(center - width / 2.0, center + width / 2.0).unwrap();
        let b = spec.nodes_1d(center - width / 2.0, center + width / 2.0).unwrap();
        assert_eq!(a, b);
        let m: f64 = a.iter().map(|&(x, w)| w * x).sum();
        let var: f64 = a.iter().map(|&(x, w)| w * (x - m).powi(2)).sum();
        // autocorrelation of static noise: width² / 12
        assert!((var - width * width / 12.0).abs() < 0.01, "var = {var}");
        assert!((m - center).abs() < 0.01);
    }

    #[test]
    fn tensor_weights_sum_to_one() {
        let pts = QuadratureSpec::gauss(9).nodes_2d(-1.0, 2.0).unwrap();
        assert_eq!(pts.len(), 81);
        let total: f64 = pts.iter().map(|&(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
