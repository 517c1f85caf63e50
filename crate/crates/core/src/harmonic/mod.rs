//! Poisson-kernel machinery for harmonic functions on the unit ball.

pub mod boundary;
pub mod poly;
pub mod quadrature;

pub use boundary::{hemisphere_gradient_at_zero, poisson_integral, BoundaryData, HemisphereEstimate, PoissonEval, PoissonIntegral};
pub use poly::Polynomial;
pub use quadrature::{Scheme, SphereQuadrature};

use std::sync::Arc;

use crate::diff;
use crate::error::{Error, Result};
use crate::mobius::{bracket, bracket_sqr, mobius_grad_norm, mobius_jacobian, mobius_map};
use crate::point::{norm_sqr, require_boundary, require_interior, same_dim};
use crate::report::{CheckReport, Regime};

/// Real-valued field on the unit ball with an optional analytic gradient.
pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Central differences unless overridden.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        diff::gradient(|p| self.value(p), x, diff::GRAD_STEP)
    }

    fn laplacian(&self, x: &[f64]) -> f64 {
        diff::laplacian(|p| self.value(p), x, diff::LAPLACIAN_STEP)
    }
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn laplacian(&self, x: &[f64]) -> f64 {
        (**self).laplacian(x)
    }
}

impl<T: ScalarField + ?Sized> ScalarField for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (**self).gradient(x)
    }
    fn laplacian(&self, x: &[f64]) -> f64 {
        (**self).laplacian(x)
    }
}

/// Closure-backed field; derivatives by finite differences.
pub struct FnField<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> FnField<F> {
    pub fn new(n: usize, f: F) -> Self {
        Self { n, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> ScalarField for FnField<F> {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// `P(x, xi) = (1 - |x|^2) / |x - xi|^n`.
pub fn poisson_kernel(x: &[f64], xi: &[f64]) -> Result<f64> {
    same_dim(x.len(), xi.len())?;
    require_interior(x)?;
    require_boundary(xi)?;
    Ok(kernel(x, xi))
}

/// Analytic gradient of `P(., xi)` at `x`.
pub fn poisson_grad(x: &[f64], xi: &[f64]) -> Result<Vec<f64>> {
    same_dim(x.len(), xi.len())?;
    require_interior(x)?;
    require_boundary(xi)?;
    let mut g = vec![0.0; x.len()];
    kernel_and_grad(x, xi, &mut g);
    Ok(g)
}

#[inline]
pub(crate) fn kernel(x: &[f64], xi: &[f64]) -> f64 {
    let n = x.len() as i32;
    let d2: f64 = x.iter().zip(xi).map(|(a, b)| (a - b) * (a - b)).sum();
    (1.0 - norm_sqr(x)) / d2.sqrt().powi(n)
}

/// Writes `grad P(x, xi)` into `grad` and returns `P(x, xi)`:
/// `grad P = -2x / |x - xi|^n - n (1 - |x|^2)(x - xi) / |x - xi|^{n+2}`.
#[inline]
pub(crate) fn kernel_and_grad(x: &[f64], xi: &[f64], grad: &mut [f64]) -> f64 {
    let n = x.len();
    let d2: f64 = x.iter().zip(xi).map(|(a, b)| (a - b) * (a - b)).sum();
    let inv_dn = 1.0 / d2.sqrt().powi(n as i32);
    let one_minus = 1.0 - norm_sqr(x);
    let c = n as f64 * one_minus * inv_dn / d2;
    for k in 0..n {
        grad[k] = -2.0 * x[k] * inv_dn - c * (x[k] - xi[k]);
    }
    one_minus * inv_dn
}

/// Positive harmonic function `sum_k w_k P(x, xi_k)`: the Poisson integral of
/// a finite atomic measure on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicHarmonic {
    n: usize,
    weights: Vec<f64>,
    sites: Vec<Vec<f64>>,
}

impl AtomicHarmonic {
    pub fn new(n: usize, atoms: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDimension {
                check: "atomic harmonic",
                n,
            });
        }
        if atoms.is_empty() {
            return Err(Error::Invalid("an atomic measure needs at least one atom".into()));
        }
        let mut weights = Vec::with_capacity(atoms.len());
        let mut sites = Vec::with_capacity(atoms.len());
        for (w, xi) in atoms {
            same_dim(n, xi.len())?;
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Invalid(format!("atom weight must be positive, got {w}")));
            }
            require_boundary(&xi)?;
            weights.push(w);
            sites.push(xi);
        }
        Ok(Self { n, weights, sites })
    }

    /// `w P_xi`.
    pub fn single(w: f64, xi: Vec<f64>) -> Result<Self> {
        Self::new(xi.len(), vec![(w, xi)])
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.weights.iter().copied().zip(self.sites.iter().map(Vec::as_slice))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total mass, equal to `f(0)`.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn value_and_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let mut grad = vec![0.0; self.n];
        let mut g = vec![0.0; self.n];
        let mut value = 0.0;
        for (w, xi) in self.atoms() {
            value += w * kernel_and_grad(x, xi, &mut g);
            for (o, gk) in grad.iter_mut().zip(&g) {
                *o += w * gk;
            }
        }
        (value, grad)
    }
}

impl ScalarField for AtomicHarmonic {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.atoms().map(|(w, xi)| w * kernel(x, xi)).sum()
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.value_and_gradient(x).1
    }
}

/// `x -> f(a) |1 - phi_a(x) conj(a)|^{n-2} P_xi(phi_a(x))`, the family of
/// positive harmonic functions attaining equality in the sharp gradient
/// estimate at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalFunction {
    a: Vec<f64>,
    xi: Vec<f64>,
    scale: f64,
}

impl ExtremalFunction {
    pub fn new(a: &[f64], xi: &[f64], scale: f64) -> Result<Self> {
        same_dim(a.len(), xi.len())?;
        require_interior(a)?;
        require_boundary(xi)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Invalid(format!("extremal scale f(a) must be positive, got {scale}")));
        }
        Ok(Self {
            a: a.to_vec(),
            xi: xi.to_vec(),
            scale,
        })
    }

    pub fn center(&self) -> &[f64] {
        &self.a
    }

    pub fn pole(&self) -> &[f64] {
        &self.xi
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl ScalarField for ExtremalFunction {
    fn dim(&self) -> usize {
        self.a.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let n = self.a.len() as i32;
        let y = mobius_map(&self.a, x);
        self.scale * bracket(&y, &self.a).powi(n - 2) * kernel(&y, &self.xi)
    }

    /// Uses `|1 - phi_a(x) conj(a)| = (1 - |a|^2) / [x, a]`, so
    /// `f(x) = f(a) (1 - |a|^2)^{n-2} [x, a]^{2-n} P_xi(phi_a(x))`.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = self.a.len();
        let a = &self.a;
        let c = self.scale * (1.0 - norm_sqr(a)).powi(n as i32 - 2);
        let s = bracket_sqr(x, a);
        let br = s.sqrt();
        let weight = br.powi(2 - n as i32);
        let a2 = norm_sqr(a);
        // grad [x,a]^{2-n} = (2-n)(|a|^2 x - a) / [x,a]^n
        let dweight: Vec<f64> = x
            .iter()
            .zip(a)
            .map(|(&xk, &ak)| (2.0 - n as f64) * (a2 * xk - ak) / br.powi(n as i32))
            .collect();
        let y = mobius_map(a, x);
        let mut gp = vec![0.0; n];
        let p = kernel_and_grad(&y, &self.xi, &mut gp);
        let chain = mobius_jacobian(a, x).apply_transpose(&gp);
        (0..n).map(|k| c * (dweight[k] * p + weight * chain[k])).collect()
    }
}

/// `f[phi_a](x) = ((1 - |a|^2) / |1 - x conj(a)|^2)^{n/2 - 1} f(phi_a(x))`.
/// Harmonic whenever `f` is.
pub struct HuaTransform<F> {
    inner: F,
    a: Vec<f64>,
}

pub fn hua_transform<F: ScalarField>(f: F, a: &[f64]) -> Result<HuaTransform<F>> {
    same_dim(f.dim(), a.len())?;
    require_interior(a)?;
    Ok(HuaTransform { inner: f, a: a.to_vec() })
}

impl<F: ScalarField> ScalarField for HuaTransform<F> {
    fn dim(&self) -> usize {
        self.a.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let exponent = self.a.len() as f64 / 2.0 - 1.0;
        let weight = mobius_grad_norm(&self.a, x).powf(exponent);
        weight * self.inner.value(&mobius_map(&self.a, x))
    }
}

/// Relative residual scale for a finite-difference Laplacian: the sum of the
/// magnitudes of the unmixed second derivatives plus the field magnitude.
pub fn laplacian_scale(f: &dyn ScalarField, x: &[f64]) -> f64 {
    let parts = diff::second_derivatives(|p| f.value(p), x, diff::LAPLACIAN_STEP);
    parts.iter().map(|v| v.abs()).sum::<f64>() + f.value(x).abs()
}

/// Harmonicity residual `|Delta f(x)|` against a `1e-3` relative tolerance.
pub fn harmonicity_check(name: &str, f: &dyn ScalarField, x: &[f64]) -> CheckReport {
    let lap = diff::laplacian_richardson(|p| f.value(p), x, diff::LAPLACIAN_STEP);
    let scale = laplacian_scale(f, x);
    CheckReport::equal(name, f.dim(), lap, 0.0, 1e-3 * scale, Regime::FiniteDifference).with_point(x)
}

/// Conformal invariance of the Laplace operator under `y = phi_a(x)`:
/// `(1 - |x|^2)^{n/2+1} Delta X(x) = (1 - |y|^2)^{n/2+1} Delta Y(y)`, where
/// `Y` is the weighted composite [`hua_transform`] of `X`. Both Laplacians are
/// taken by finite differences; tolerance `1e-3` relative.
pub fn laplace_invariance_check(field: &dyn ScalarField, a: &[f64], x: &[f64]) -> Result<CheckReport> {
    let n = field.dim();
    same_dim(n, a.len())?;
    same_dim(n, x.len())?;
    require_interior(x)?;
    let y = mobius_map(a, x);
    let transformed = hua_transform(field, a)?;
    let power = n as f64 / 2.0 + 1.0;
    let lap_x = diff::laplacian_richardson(|p| field.value(p), x, diff::LAPLACIAN_STEP);
    let lap_y = diff::laplacian_richardson(|p| transformed.value(p), &y, diff::LAPLACIAN_STEP);
    let wx = (1.0 - norm_sqr(x)).powf(power);
    let wy = (1.0 - norm_sqr(&y)).powf(power);
    let lhs = wx * lap_x;
    let rhs = wy * lap_y;
    let scale = (wx * laplacian_scale(field, x)).max(lhs.abs()).max(rhs.abs());
    Ok(CheckReport::equal("harmonic.laplace_invariance", n, lhs, rhs, 1e-3 * scale, Regime::FiniteDifference)
        .with_points(&[a, x]))
}
