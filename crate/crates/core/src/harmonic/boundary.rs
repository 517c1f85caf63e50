//! Bounded harmonic functions given as Poisson integrals of boundary data.

use std::fmt;
use std::sync::Arc;

use super::quadrature::SphereQuadrature;
use super::kernel_and_grad;
use crate::error::{Error, Result};
use crate::lab::jacobian::JacobianMatrix;
use crate::point::{require_interior, same_dim};

type Evaluator = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Function `g: S^{n-1} -> R^m`.
#[derive(Clone)]
pub struct BoundaryData {
    n: usize,
    m: usize,
    bounded: bool,
    label: String,
    eval: Evaluator,
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("bounded", &self.bounded)
            .field("label", &self.label)
            .finish()
    }
}

impl BoundaryData {
    /// `bounded` asserts `|g| <= 1`; it is verified at quadrature nodes when
    /// the data is sampled.
    pub fn new(
        n: usize,
        m: usize,
        bounded: bool,
        label: impl Into<String>,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            n,
            m,
            bounded,
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// `+1` on `xi_1 > 0`, `-1` on `xi_1 < 0`.
    pub fn hemisphere(n: usize) -> Self {
        Self::new(n, 1, true, "hemisphere", |xi: &[f64]| {
            vec![if xi[0] > 0.0 {
                1.0
            } else if xi[0] < 0.0 {
                -1.0
            } else {
                0.0
            }]
        })
    }

    pub fn constant(n: usize, value: Vec<f64>) -> Self {
        let bounded = crate::point::norm(&value) <= 1.0;
        let m = value.len();
        Self::new(n, m, bounded, "constant", move |_| value.clone())
    }

    /// `xi -> g(T xi)` for a square matrix `T` given row-major.
    pub fn rotated(&self, t: &[f64]) -> Result<Self> {
        same_dim(self.n * self.n, t.len())?;
        let inner = self.eval.clone();
        let n = self.n;
        let t = t.to_vec();
        Ok(Self {
            n,
            m: self.m,
            bounded: self.bounded,
            label: format!("{}∘T", self.label),
            eval: Arc::new(move |xi: &[f64]| {
                let rotated: Vec<f64> = (0..n)
                    .map(|r| (0..n).map(|c| t[r * n + c] * xi[c]).sum())
                    .collect();
                inner(&rotated)
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.m
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, xi: &[f64]) -> Vec<f64> {
        (self.eval)(xi)
    }
}

/// Poisson integral of boundary data under a fixed quadrature rule. The data
/// is sampled once at the nodes.
#[derive(Debug, Clone)]
pub struct PoissonIntegral<'q> {
    quad: &'q SphereQuadrature,
    m: usize,
    samples: Vec<f64>,
}

/// Value, Jacobian and error indicators of a Poisson integral at one point.
#[derive(Debug, Clone)]
pub struct PoissonEval {
    pub value: Vec<f64>,
    pub jacobian: JacobianMatrix,
    /// `sum_k w_k P(x, xi_k)`, exactly `1` for an exact rule.
    pub kernel_mass: f64,
    /// Monte Carlo standard errors of `value` (zero for deterministic rules).
    pub value_se: Vec<f64>,
    /// Monte Carlo standard errors of the Jacobian entries.
    pub jacobian_se: JacobianMatrix,
}

impl PoissonEval {
    /// `|kernel_mass - 1|`, the error of the rule on the constant function.
    pub fn quadrature_error(&self) -> f64 {
        (self.kernel_mass - 1.0).abs()
    }

    /// Frobenius norm of the Jacobian standard errors.
    pub fn jacobian_se_norm(&self) -> f64 {
        let mut s = 0.0;
        for r in 0..self.jacobian_se.rows() {
            s += self.jacobian_se.row(r).iter().map(|v| v * v).sum::<f64>();
        }
        s.sqrt()
    }
}

impl<'q> PoissonIntegral<'q> {
    pub fn new(data: &BoundaryData, quad: &'q SphereQuadrature) -> Result<Self> {
        same_dim(quad.dim(), data.dim())?;
        let m = data.target_dim();
        let mut samples = Vec::with_capacity(quad.len() * m);
        for (xi, _) in quad.iter() {
            let v = data.eval(xi);
            same_dim(m, v.len())?;
            if data.is_bounded() {
                let r = crate::point::norm(&v);
                if r > 1.0 + 1e-12 {
                    return Err(Error::Invalid(format!(
                        "boundary data '{}' flagged bounded but |g| = {r} at a node",
                        data.label()
                    )));
                }
            }
            samples.extend(v);
        }
        Ok(Self { quad, m, samples })
    }

    pub fn dim(&self) -> usize {
        self.quad.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.m
    }

    pub fn quadrature(&self) -> &SphereQuadrature {
        self.quad
    }

    pub fn is_stochastic(&self) -> bool {
        self.quad.scheme().is_stochastic()
    }

    pub fn value(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (k, (xi, w)) in self.quad.iter().enumerate() {
            let p = w * super::kernel(x, xi);
            for (o, g) in out.iter_mut().zip(&self.samples[k * self.m..(k + 1) * self.m]) {
                *o += p * g;
            }
        }
        out
    }

    /// Full evaluation at an interior point.
    pub fn evaluate(&self, x: &[f64]) -> Result<PoissonEval> {
        same_dim(self.dim(), x.len())?;
        require_interior(x)?;
        let n = self.dim();
        let m = self.m;
        let mut value = vec![0.0; m];
        let mut value_sq = vec![0.0; m];
        let mut jac = vec![0.0; m * n];
        let mut jac_sq = vec![0.0; m * n];
        let mut mass = 0.0;
        let mut grad = vec![0.0; n];
        for (k, (xi, w)) in self.quad.iter().enumerate() {
            let p = kernel_and_grad(x, xi, &mut grad);
            mass += w * p;
            let g = &self.samples[k * m..(k + 1) * m];
            for r in 0..m {
                let v = p * g[r];
                value[r] += w * v;
                value_sq[r] += w * v * v;
                for c in 0..n {
                    let d = grad[c] * g[r];
                    jac[r * n + c] += w * d;
                    jac_sq[r * n + c] += w * d * d;
                }
            }
        }
        let count = self.quad.len() as f64;
        let se = |mean: f64, mean_sq: f64| {
            if self.is_stochastic() {
                ((mean_sq - mean * mean).max(0.0) / (count - 1.0)).sqrt()
            } else {
                0.0
            }
        };
        let value_se = value.iter().zip(&value_sq).map(|(&a, &b)| se(a, b)).collect();
        let jac_se = jac.iter().zip(&jac_sq).map(|(&a, &b)| se(a, b)).collect();
        Ok(PoissonEval {
            value,
            jacobian: JacobianMatrix::from_row_major(m, n, jac)?,
            kernel_mass: mass,
            value_se,
            jacobian_se: JacobianMatrix::from_row_major(m, n, jac_se)?,
        })
    }
}

/// `sum_k w_k P(x, xi_k) g(xi_k)`.
pub fn poisson_integral(data: &BoundaryData, quad: &SphereQuadrature, x: &[f64]) -> Result<Vec<f64>> {
    same_dim(quad.dim(), x.len())?;
    require_interior(x)?;
    Ok(PoissonIntegral::new(data, quad)?.value(x))
}

/// `|grad U(0)|` for the hemisphere data and its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HemisphereEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Since `grad P(0, xi) = n xi`, `grad U(0) = n * integral of xi sign(xi_1)`.
pub fn hemisphere_gradient_at_zero(quad: &SphereQuadrature) -> Result<HemisphereEstimate> {
    let n = quad.dim();
    let data = BoundaryData::hemisphere(n);
    let pi = PoissonIntegral::new(&data, quad)?;
    let origin = vec![0.0; n];
    let eval = pi.evaluate(&origin)?;
    let grad = eval.jacobian.row(0).to_vec();
    let value = crate::point::norm(&grad);
    let std_error = if quad.scheme().is_stochastic() && value > 0.0 {
        // standard error of the projection of each sample onto the estimate
        let dir: Vec<f64> = grad.iter().map(|g| g / value).collect();
        let nf = n as f64;
        let (mut mean, mut mean_sq) = (0.0, 0.0);
        for (k, (xi, w)) in quad.iter().enumerate() {
            let s = nf * crate::point::dot(xi, &dir) * pi.samples[k];
            mean += w * s;
            mean_sq += w * s * s;
        }
        ((mean_sq - mean * mean).max(0.0) / (quad.len() as f64 - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(HemisphereEstimate { value, std_error })
}
