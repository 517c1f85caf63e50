//! Quadrature rules for the normalized surface measure on `S^{n-1}`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Equispaced midpoints on the circle.
    Trapezoid,
    /// Gauss–Legendre on the four quarter arcs of the circle.
    GaussArcs,
    /// Gauss–Legendre in `xi_1` on `[-1, 0]` and `[0, 1]` times a uniform
    /// longitude grid (2-sphere only).
    ProductGauss,
    /// Normalized Gaussian directions with equal weights.
    MonteCarlo,
}

impl Scheme {
    pub fn is_stochastic(self) -> bool {
        self == Scheme::MonteCarlo
    }
}

/// Nodes on the unit sphere with weights summing to one.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    n: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    scheme: Scheme,
    seed: Option<u64>,
}

impl SphereQuadrature {
    /// Default rule for dimension `n` with roughly `size` nodes: quarter-arc
    /// Gauss–Legendre for `n = 2`, product Gauss for `n = 3` and seeded Monte
    /// Carlo otherwise. The deterministic rules place panel boundaries on the
    /// great sphere `xi_1 = 0`, so data with a jump across it integrate
    /// without loss of order.
    pub fn standard(n: usize, size: usize, seed: u64) -> Result<Self> {
        match n {
            2 => Self::gauss_arcs(size.div_ceil(4).max(1)),
            3 => {
                let per_panel = ((size as f64 / 8.0).sqrt().ceil() as usize).max(2);
                Self::product_gauss(per_panel)
            }
            n if n >= 4 => Self::monte_carlo(n, size, seed),
            _ => Err(Error::UnsupportedDimension {
                check: "sphere quadrature",
                n,
            }),
        }
    }

    pub fn trapezoid(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Invalid("quadrature needs at least one node".into()));
        }
        let mut nodes = Vec::with_capacity(2 * count);
        for k in 0..count {
            let t = 2.0 * PI * (k as f64 + 0.5) / count as f64;
            nodes.extend([t.cos(), t.sin()]);
        }
        Ok(Self {
            n: 2,
            nodes,
            weights: vec![1.0 / count as f64; count],
            scheme: Scheme::Trapezoid,
            seed: None,
        })
    }

    pub fn gauss_arcs(per_arc: usize) -> Result<Self> {
        if per_arc == 0 {
            return Err(Error::Invalid("quadrature needs at least one node".into()));
        }
        let (gx, gw) = gauss_legendre(per_arc);
        let mut nodes = Vec::with_capacity(8 * per_arc);
        let mut weights = Vec::with_capacity(4 * per_arc);
        let half = PI / 4.0;
        for arc in 0..4 {
            let mid = -PI / 2.0 + half + arc as f64 * PI / 2.0;
            for (x, w) in gx.iter().zip(&gw) {
                let t = mid + half * x;
                nodes.extend([t.cos(), t.sin()]);
                weights.push(w * half / (2.0 * PI));
            }
        }
        Ok(Self {
            n: 2,
            nodes,
            weights,
            scheme: Scheme::GaussArcs,
            seed: None,
        })
    }

    pub fn product_gauss(per_panel: usize) -> Result<Self> {
        if per_panel == 0 {
            return Err(Error::Invalid("quadrature needs at least one node".into()));
        }
        let (gx, gw) = gauss_legendre(per_panel);
        let longitudes = 4 * per_panel;
        let dphi = 2.0 * PI / longitudes as f64;
        let mut nodes = Vec::with_capacity(3 * 2 * per_panel * longitudes);
        let mut weights = Vec::with_capacity(2 * per_panel * longitudes);
        for panel_mid in [-0.5, 0.5] {
            for (x, w) in gx.iter().zip(&gw) {
                let t: f64 = panel_mid + 0.5 * x;
                let s = (1.0 - t * t).max(0.0).sqrt();
                for k in 0..longitudes {
                    let phi = (k as f64 + 0.5) * dphi;
                    nodes.extend([t, s * phi.cos(), s * phi.sin()]);
                    // dsigma = dt dphi / (4 pi)
                    weights.push(0.5 * w * dphi / (4.0 * PI));
                }
            }
        }
        Ok(Self {
            n: 3,
            nodes,
            weights,
            scheme: Scheme::ProductGauss,
            seed: None,
        })
    }

    pub fn monte_carlo(n: usize, count: usize, seed: u64) -> Result<Self> {
        if n < 2 || count < 2 {
            return Err(Error::Invalid(format!(
                "Monte Carlo quadrature needs n >= 2 and at least two nodes (n = {n}, count = {count})"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes = Vec::with_capacity(n * count);
        let mut v = vec![0.0; n];
        for _ in 0..count {
            let r = loop {
                for c in v.iter_mut() {
                    *c = StandardNormal.sample(&mut rng);
                }
                let r = crate::point::norm(&v);
                if r > 1e-12 {
                    break r;
                }
            };
            nodes.extend(v.iter().map(|c| c / r));
        }
        Ok(Self {
            n,
            nodes,
            weights: vec![1.0 / count as f64; count],
            scheme: Scheme::MonteCarlo,
            seed: Some(seed),
        })
    }

    /// The same deterministic rule at half the resolution, used to estimate
    /// the discretization error by comparison. `None` for Monte Carlo.
    pub fn coarsened(&self) -> Option<Self> {
        let len = self.len();
        match self.scheme {
            Scheme::Trapezoid => Self::trapezoid(len.div_ceil(2)).ok(),
            Scheme::GaussArcs => Self::gauss_arcs((len / 4).div_ceil(2)).ok(),
            Scheme::ProductGauss => {
                let p = ((len / 8) as f64).sqrt().round() as usize;
                Self::product_gauss(p.div_ceil(2)).ok()
            }
            Scheme::MonteCarlo => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn node(&self, k: usize) -> &[f64] {
        &self.nodes[k * self.n..(k + 1) * self.n]
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes.chunks_exact(self.n).zip(self.weights.iter().copied())
    }

    /// Weighted sum of `f` over the nodes.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.iter().map(|(xi, w)| w * f(xi)).sum()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(count, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(count, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[count - 1 - i] = x;
        weights[i] = w;
        weights[count - 1 - i] = w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(6);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 11 is the exactness limit for 6 nodes
        let int: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((int - 2.0 / 11.0).abs() < 1e-14);
        let odd: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(11)).sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_one_and_nodes_on_sphere() {
        let rules = [
            SphereQuadrature::trapezoid(64).unwrap(),
            SphereQuadrature::gauss_arcs(16).unwrap(),
            SphereQuadrature::product_gauss(12).unwrap(),
            SphereQuadrature::monte_carlo(5, 1000, 9).unwrap(),
        ];
        for q in &rules {
            assert!((q.weights().iter().sum::<f64>() - 1.0).abs() < 1e-13, "{:?}", q.scheme());
            for (xi, _) in q.iter() {
                assert!((crate::point::norm(xi) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn second_moments() {
        // E[xi_1^2] = 1/n on S^{n-1}
        for q in [SphereQuadrature::gauss_arcs(8).unwrap(), SphereQuadrature::product_gauss(8).unwrap()] {
            let n = q.dim() as f64;
            assert!((q.integrate(|xi| xi[0] * xi[0]) - 1.0 / n).abs() < 1e-14);
            assert!((q.integrate(|xi| xi[1] * xi[1]) - 1.0 / n).abs() < 1e-14);
        }
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = SphereQuadrature::monte_carlo(4, 50, 123).unwrap();
        let b = SphereQuadrature::monte_carlo(4, 50, 123).unwrap();
        assert_eq!(a.nodes, b.nodes);
        let c = SphereQuadrature::monte_carlo(4, 50, 124).unwrap();
        assert_ne!(a.nodes, c.nodes);
    }

    #[test]
    fn standard_scheme_selection() {
        assert_eq!(SphereQuadrature::standard(2, 100, 0).unwrap().scheme(), Scheme::GaussArcs);
        assert_eq!(SphereQuadrature::standard(3, 100, 0).unwrap().scheme(), Scheme::ProductGauss);
        assert_eq!(SphereQuadrature::standard(6, 100, 0).unwrap().scheme(), Scheme::MonteCarlo);
        assert!(SphereQuadrature::standard(1, 100, 0).is_err());
    }
}
