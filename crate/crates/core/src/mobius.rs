//! Möbius self-maps of the unit ball and the associated metrics.
//!
//! `phi_a(x) = ((1 - |a|^2)(a - x) + |a - x|^2 a) / [x, a]^2` with
//! `[x, a]^2 = 1 + |a|^2 |x|^2 - 2 <a, x>`. It swaps `0` and `a` and is an
//! involution. Viewing `R^n` as paravectors in the Clifford algebra with
//! `n - 1` generators, `[x, a] = |1 - x conj(a)|` and
//! `phi_a(x) = (1 - x conj(a))^{-1} (a - x)`.

use crate::clifford::MultiVector;
use crate::error::{Error, Result};
use crate::lab::jacobian::JacobianMatrix;
use crate::point::{self, dot, norm, norm_sqr, require_away_from_boundary, require_interior, same_dim};
use crate::report::{CheckReport, Regime};

/// Slack for closed-form identities on `O(1)` quantities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// `[x, a] = sqrt(1 + |a|^2 |x|^2 - 2 <a, x>)`.
pub fn bracket(x: &[f64], a: &[f64]) -> f64 {
    bracket_sqr(x, a).sqrt()
}

/// `[x, a]^2`, which is at least `(1 - |a||x|)^2`.
pub fn bracket_sqr(x: &[f64], a: &[f64]) -> f64 {
    (1.0 + norm_sqr(a) * norm_sqr(x) - 2.0 * dot(a, x)).max(0.0)
}

/// `|1 - x conj(a)|` computed in the Clifford algebra.
pub fn bracket_clifford(x: &[f64], a: &[f64]) -> Result<f64> {
    same_dim(x.len(), a.len())?;
    let xv = MultiVector::paravector(x)?;
    let av = MultiVector::paravector(a)?;
    let one = MultiVector::one(xv.generators())?;
    Ok((&one - &(&xv * &av.conj())).norm())
}

/// Möbius map `phi_a` with `phi_a(0) = a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMap {
    center: Vec<f64>,
}

impl MobiusMap {
    pub fn new(center: &[f64]) -> Result<Self> {
        if center.len() < 2 {
            return Err(Error::Invalid(format!("dimension {} < 2", center.len())));
        }
        require_interior(center)?;
        Ok(Self {
            center: center.to_vec(),
        })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mobius_map(&self.center, x)
    }

    pub fn jacobian(&self, x: &[f64]) -> JacobianMatrix {
        mobius_jacobian(&self.center, x)
    }

    /// Conformal factor `(1 - |a|^2) / [x, a]^2`.
    pub fn grad_norm(&self, x: &[f64]) -> f64 {
        mobius_grad_norm(&self.center, x)
    }
}

/// Closed-form `phi_a(x)`. Callers are expected to pass `|a| < 1` and
/// `|x| <= 1`; the formula itself is total on those inputs.
pub fn mobius_map(a: &[f64], x: &[f64]) -> Vec<f64> {
    let a2 = norm_sqr(a);
    let diff2: f64 = a.iter().zip(x).map(|(ai, xi)| (ai - xi) * (ai - xi)).sum();
    let s = bracket_sqr(x, a);
    a.iter()
        .zip(x)
        .map(|(&ai, &xi)| ((1.0 - a2) * (ai - xi) + diff2 * ai) / s)
        .collect()
}

/// `phi_a(x) = (1 - x conj(a))^{-1} (a - x)` evaluated with multivector
/// inversion. Used to cross-check [`mobius_map`].
pub fn mobius_clifford_form(a: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    same_dim(a.len(), x.len())?;
    let av = MultiVector::paravector(a)?;
    let xv = MultiVector::paravector(x)?;
    let one = MultiVector::one(av.generators())?;
    let denom = &one - &(&xv * &av.conj());
    let out = &denom.inverse()? * &(&av - &xv);
    Ok(out.paravector_part())
}

/// `(1 - |a|^2)(1 - |x|^2) / [x, a]^2`, which equals `1 - |phi_a(x)|^2`.
pub fn one_minus_phi_sq(a: &[f64], x: &[f64]) -> f64 {
    (1.0 - norm_sqr(a)) * (1.0 - norm_sqr(x)) / bracket_sqr(x, a)
}

/// `||D phi_a(x)|| = (1 - |a|^2) / [x, a]^2`.
pub fn mobius_grad_norm(a: &[f64], x: &[f64]) -> f64 {
    (1.0 - norm_sqr(a)) / bracket_sqr(x, a)
}

/// Analytic Jacobian of `phi_a` at `x`.
pub fn mobius_jacobian(a: &[f64], x: &[f64]) -> JacobianMatrix {
    let n = a.len();
    let a2 = norm_sqr(a);
    let diff: Vec<f64> = a.iter().zip(x).map(|(ai, xi)| ai - xi).collect();
    let diff2 = norm_sqr(&diff);
    let s = bracket_sqr(x, a);
    let num: Vec<f64> = a
        .iter()
        .zip(&diff)
        .map(|(&ai, &di)| (1.0 - a2) * di + diff2 * ai)
        .collect();
    // grad s = 2(|a|^2 x - a)
    let grad_s: Vec<f64> = a.iter().zip(x).map(|(&ai, &xi)| 2.0 * (a2 * xi - ai)).collect();
    let mut j = JacobianMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let dnum = if i == k { -(1.0 - a2) } else { 0.0 } - 2.0 * diff[k] * a[i];
            j.set(i, k, dnum / s - num[i] * grad_s[k] / (s * s));
        }
    }
    j
}

/// Pseudo-hyperbolic distance `rho(x, y) = |phi_y(x)| = |x - y| / [x, y]`.
pub fn pseudo_metric(x: &[f64], y: &[f64]) -> Result<f64> {
    same_dim(x.len(), y.len())?;
    require_away_from_boundary(x)?;
    require_away_from_boundary(y)?;
    Ok(rho(x, y))
}

/// Hyperbolic distance `d(x, y) = 2 artanh(rho(x, y))`.
pub fn hyperbolic_metric(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(2.0 * pseudo_metric(x, y)?.atanh())
}

pub(crate) fn rho(x: &[f64], y: &[f64]) -> f64 {
    let b = bracket(x, y);
    if b == 0.0 {
        return 0.0;
    }
    (point::dist(x, y) / b).min(1.0)
}

pub(crate) fn dist_h(x: &[f64], y: &[f64]) -> f64 {
    2.0 * rho(x, y).atanh()
}

/// Hyperbolic geodesic from `x` to `y` at parameter `t`, affine in hyperbolic
/// arclength: `d(gamma(s), gamma(t)) = |s - t| d(x, y)`.
pub fn geodesic(x: &[f64], y: &[f64], t: f64) -> Result<Vec<f64>> {
    Ok(Geodesic::new(x, y)?.point(t))
}

/// Geodesic `gamma(t) = phi_x(tanh(t D / 2) u)`, where `u` is the unit
/// direction of `phi_x(y)` and `D = d(x, y)`.
#[derive(Debug, Clone)]
pub struct Geodesic {
    start: Vec<f64>,
    direction: Vec<f64>,
    half_length: f64,
}

impl Geodesic {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        same_dim(x.len(), y.len())?;
        require_away_from_boundary(x)?;
        require_away_from_boundary(y)?;
        let image = mobius_map(x, y);
        let r = norm(&image);
        let direction = if r > 0.0 {
            image.iter().map(|c| c / r).collect()
        } else {
            vec![0.0; x.len()]
        };
        Ok(Self {
            start: x.to_vec(),
            direction,
            half_length: r.min(1.0).atanh(),
        })
    }

    /// Hyperbolic length `d(x, y)`.
    pub fn length(&self) -> f64 {
        2.0 * self.half_length
    }

    pub fn point(&self, t: f64) -> Vec<f64> {
        let s = (t * self.half_length).tanh();
        let straight: Vec<f64> = self.direction.iter().map(|u| s * u).collect();
        mobius_map(&self.start, &straight)
    }

    /// `gamma'(t)`.
    pub fn velocity(&self, t: f64) -> Vec<f64> {
        let th = (t * self.half_length).tanh();
        let speed = self.half_length * (1.0 - th * th);
        let straight: Vec<f64> = self.direction.iter().map(|u| th * u).collect();
        let dir: Vec<f64> = self.direction.iter().map(|u| speed * u).collect();
        mobius_jacobian(&self.start, &straight).apply(&dir)
    }
}

fn pair_points(x: &[f64], y: &[f64]) -> Vec<Vec<f64>> {
    vec![x.to_vec(), y.to_vec()]
}

/// `|1 - x conj(a)| |1 - y conj(a)| = 1 - |a|^2` for `y = phi_a(x)`.
pub fn product_identity_check(a: &[f64], x: &[f64]) -> Result<CheckReport> {
    same_dim(a.len(), x.len())?;
    require_interior(a)?;
    require_interior(x)?;
    let y = mobius_map(a, x);
    let lhs = bracket(x, a) * bracket(&y, a);
    let rhs = 1.0 - norm_sqr(a);
    let mut r = CheckReport::equal("mobius.product_identity", a.len(), lhs, rhs, IDENTITY_TOL, Regime::Structural);
    r.point = pair_points(a, x);
    Ok(r)
}

/// `1 - |phi_a(x)|^2` from the coordinates versus the closed form.
pub fn one_minus_phi_sq_check(a: &[f64], x: &[f64]) -> Result<CheckReport> {
    same_dim(a.len(), x.len())?;
    require_interior(a)?;
    require_interior(x)?;
    let direct = 1.0 - norm_sqr(&mobius_map(a, x));
    let closed = one_minus_phi_sq(a, x);
    let mut r = CheckReport::equal("mobius.one_minus_phi_sq", a.len(), direct, closed, IDENTITY_TOL, Regime::Structural);
    r.point = pair_points(a, x);
    Ok(r)
}

/// `|phi_a(phi_a(x)) - x| = 0`.
pub fn involution_check(a: &[f64], x: &[f64]) -> Result<CheckReport> {
    same_dim(a.len(), x.len())?;
    require_interior(a)?;
    require_interior(x)?;
    let back = mobius_map(a, &mobius_map(a, x));
    let residual = point::dist(&back, x);
    let mut r = CheckReport::equal("mobius.involution", a.len(), residual, 0.0, 1e-11, Regime::Structural);
    r.point = pair_points(a, x);
    Ok(r)
}

/// `[x, a]` against the Clifford norm `|1 - x conj(a)|`.
pub fn bracket_clifford_check(x: &[f64], a: &[f64]) -> Result<CheckReport> {
    let clifford = bracket_clifford(x, a)?;
    let mut r = CheckReport::equal("mobius.bracket_clifford", a.len(), bracket(x, a), clifford, IDENTITY_TOL, Regime::Structural);
    r.point = pair_points(x, a);
    Ok(r)
}

/// Invariance of `|x - y|^2 / ((1 - |x|^2)(1 - |y|^2))` under `phi_a`,
/// relative tolerance `1e-12`.
pub fn stoll_identity_check(phi: &MobiusMap, x: &[f64], y: &[f64]) -> Result<CheckReport> {
    same_dim(phi.dim(), x.len())?;
    same_dim(phi.dim(), y.len())?;
    require_interior(x)?;
    require_interior(y)?;
    let invariant = |p: &[f64], q: &[f64]| {
        let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
        d2 / ((1.0 - norm_sqr(p)) * (1.0 - norm_sqr(q)))
    };
    let px = phi.apply(x);
    let py = phi.apply(y);
    let lhs = invariant(&px, &py);
    let rhs = invariant(x, y);
    let tol = IDENTITY_TOL * lhs.abs().max(rhs.abs());
    let mut r = CheckReport::equal("mobius.stoll_identity", phi.dim(), lhs, rhs, tol, Regime::Structural);
    r.point = vec![phi.center().to_vec(), x.to_vec(), y.to_vec()];
    Ok(r)
}

/// `(1 - |y|^2)/(1 - |x|^2) <= (1 + rho)/(1 - rho)` with `rho = |phi_y(x)|`.
pub fn fact_inequality_check(x: &[f64], y: &[f64]) -> Result<CheckReport> {
    let r = pseudo_metric(x, y)?;
    let lhs = (1.0 - norm_sqr(y)) / (1.0 - norm_sqr(x));
    let rhs = (1.0 + r) / (1.0 - r);
    let mut rep = CheckReport::at_most("mobius.fact", x.len(), lhs, rhs, IDENTITY_TOL * rhs, Regime::Structural);
    rep.point = pair_points(x, y);
    Ok(rep)
}

/// `1 - |y|^2 <= |1 - x conj(y)| + |x - y|`, stated for `|x| > |y|`.
pub fn main_fact_check(x: &[f64], y: &[f64]) -> Result<CheckReport> {
    same_dim(x.len(), y.len())?;
    require_interior(x)?;
    require_interior(y)?;
    if norm(x) <= norm(y) {
        return Err(Error::Precondition {
            check: "mobius.main_fact",
            reason: format!("requires |x| > |y|, got |x| = {}, |y| = {}", norm(x), norm(y)),
        });
    }
    let lhs = 1.0 - norm_sqr(y);
    let rhs = bracket(x, y) + point::dist(x, y);
    let mut rep = CheckReport::at_most("mobius.main_fact", x.len(), lhs, rhs, IDENTITY_TOL, Regime::Structural);
    rep.point = pair_points(x, y);
    Ok(rep)
}

/// Both sides of the pseudo-hyperbolic triangle inequality through `z`.
/// Returns `[lower, upper]`.
pub fn tri_inequality_check(x: &[f64], y: &[f64], z: &[f64]) -> Result<[CheckReport; 2]> {
    let rxy = pseudo_metric(x, y)?;
    let rxz = pseudo_metric(x, z)?;
    let rzy = pseudo_metric(z, y)?;
    let lower = (rxz - rzy).abs() / (1.0 - rxz * rzy);
    let upper = (rxz + rzy) / (1.0 + rxz * rzy);
    let pts = vec![x.to_vec(), y.to_vec(), z.to_vec()];
    let mut lo = CheckReport::at_most("mobius.tri_lower", x.len(), lower, rxy, IDENTITY_TOL, Regime::Structural);
    lo.point = pts.clone();
    let mut hi = CheckReport::at_most("mobius.tri_upper", x.len(), rxy, upper, IDENTITY_TOL, Regime::Structural);
    hi.point = pts;
    Ok([lo, hi])
}
