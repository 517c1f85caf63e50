//! Checks returning [`CheckReport`]s for the gradient and Lipschitz estimates
//! of positive and bounded harmonic functions.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::constants::{liu_constant, sharp_gradient_constant};
use super::jacobian::{operator_norm, JacobianMatrix};
use crate::error::{Error, Result};
use crate::harmonic::{hemisphere_gradient_at_zero, BoundaryData, PoissonIntegral, ScalarField, SphereQuadrature};
use crate::mobius::{dist_h, Geodesic};
use crate::point::{self, norm, norm_sqr, require_away_from_boundary, require_interior, same_dim};
use crate::report::{CheckReport, Regime};

/// Slack for the deterministic quadrature regime on top of the estimated
/// discretization error.
pub const QUADRATURE_TOL: f64 = 1e-8;

/// Monte Carlo tolerances are this many standard errors.
pub const MC_SIGMAS: f64 = 3.0;

/// A sphere rule together with its half-resolution companion, which is used
/// to estimate discretization error for deterministic schemes.
#[derive(Debug, Clone)]
pub struct QuadraturePair {
    fine: SphereQuadrature,
    coarse: Option<SphereQuadrature>,
}

impl QuadraturePair {
    pub fn new(fine: SphereQuadrature) -> Self {
        let coarse = fine.coarsened();
        Self { fine, coarse }
    }

    pub fn standard(n: usize, size: usize, seed: u64) -> Result<Self> {
        Ok(Self::new(SphereQuadrature::standard(n, size, seed)?))
    }

    pub fn fine(&self) -> &SphereQuadrature {
        &self.fine
    }

    pub fn dim(&self) -> usize {
        self.fine.dim()
    }

    pub fn regime(&self) -> Regime {
        if self.fine.scheme().is_stochastic() {
            Regime::MonteCarlo
        } else {
            Regime::Quadrature
        }
    }
}

/// Bounded harmonic function `u = P[g]` with error estimates.
#[derive(Debug, Clone)]
pub struct BoundedHarmonic<'q> {
    fine: PoissonIntegral<'q>,
    coarse: Option<PoissonIntegral<'q>>,
    regime: Regime,
}

/// Value and Jacobian of a bounded harmonic function with absolute error
/// estimates (Euclidean for the value, Frobenius for the Jacobian).
#[derive(Debug, Clone)]
pub struct Estimate {
    pub value: Vec<f64>,
    pub jacobian: JacobianMatrix,
    pub value_err: f64,
    pub jacobian_err: f64,
    pub kernel_mass: f64,
}

impl<'q> BoundedHarmonic<'q> {
    pub fn new(g: &BoundaryData, q: &'q QuadraturePair) -> Result<Self> {
        if !g.is_bounded() {
            return Err(Error::Precondition {
                check: "bounded harmonic",
                reason: format!("boundary data '{}' is not flagged |g| <= 1", g.label()),
            });
        }
        let fine = PoissonIntegral::new(g, &q.fine)?;
        let coarse = q.coarse.as_ref().map(|c| PoissonIntegral::new(g, c)).transpose()?;
        Ok(Self {
            fine,
            coarse,
            regime: q.regime(),
        })
    }

    pub fn dim(&self) -> usize {
        self.fine.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.fine.target_dim()
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn estimate(&self, x: &[f64]) -> Result<Estimate> {
        let e = self.fine.evaluate(x)?;
        let (value_err, jacobian_err) = match &self.coarse {
            Some(c) => {
                let ec = c.evaluate(x)?;
                let dj: f64 = (0..e.jacobian.rows())
                    .flat_map(|r| {
                        let (a, b) = (e.jacobian.row(r), ec.jacobian.row(r));
                        a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).collect::<Vec<_>>()
                    })
                    .sum();
                (point::dist(&e.value, &ec.value) + e.quadrature_error(), dj.sqrt())
            }
            None => (MC_SIGMAS * norm(&e.value_se), MC_SIGMAS * e.jacobian_se_norm()),
        };
        Ok(Estimate {
            value: e.value,
            jacobian: e.jacobian,
            value_err,
            jacobian_err,
            kernel_mass: e.kernel_mass,
        })
    }
}

fn require_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition {
            check: name,
            reason: format!("function value must be positive, got {v}"),
        })
    }
}

/// `|(|x|^2 - 1) grad f(x) + (n - 2) x f(x)|` and `n f(x)`.
fn main_sharp_sides(f: &dyn ScalarField, x: &[f64]) -> Result<(f64, f64)> {
    same_dim(f.dim(), x.len())?;
    require_interior(x)?;
    let n = x.len() as f64;
    let v = f.value(x);
    require_positive("main_sharp", v)?;
    let g = f.gradient(x);
    let t = norm_sqr(x) - 1.0;
    let combo: Vec<f64> = g.iter().zip(x).map(|(gk, xk)| t * gk + (n - 2.0) * xk * v).collect();
    Ok((norm(&combo), n * v))
}

/// Sharp gradient estimate for positive harmonic `f`; slack `1e-10 rhs`.
pub fn check_main_sharp(f: &dyn ScalarField, x: &[f64]) -> Result<CheckReport> {
    let (lhs, rhs) = main_sharp_sides(f, x)?;
    Ok(CheckReport::at_most("main_sharp", x.len(), lhs, rhs, 1e-10 * rhs, Regime::Structural).with_point(x))
}

/// Equality in the sharp gradient estimate, relative tolerance `1e-9`.
pub fn check_main_sharp_equality(f: &dyn ScalarField, x: &[f64]) -> Result<CheckReport> {
    let (lhs, rhs) = main_sharp_sides(f, x)?;
    Ok(CheckReport::equal("main_sharp.extremal", x.len(), lhs, rhs, 1e-9 * rhs, Regime::Structural).with_point(x))
}

/// Hyperbolic Lipschitz bound for positive harmonic `f` together with the
/// chain of intermediate bounds through `W(x) = (1 - |x|^2)^{n/2 - 1} f(x)`:
///
/// - `main_ball`: `|log(f(x)/f(y))| <= (n - 1) d(x, y)`;
/// - `main_ball.weighted`: `|log(W(x)/W(y))| <= (n/2) d(x, y)`;
/// - `main_ball.chain`: `|log(f(x)/f(y))| <= (n/2) d + (n/2 - 1) |log((1 - |y|^2)/(1 - |x|^2))|`;
/// - `main_ball.chain_bound`: the chain's right side is at most `(n - 1) d`.
pub fn check_main_ball(f: &dyn ScalarField, x: &[f64], y: &[f64]) -> Result<Vec<CheckReport>> {
    let n = f.dim();
    same_dim(n, x.len())?;
    same_dim(n, y.len())?;
    require_away_from_boundary(x)?;
    require_away_from_boundary(y)?;
    let (fx, fy) = (f.value(x), f.value(y));
    require_positive("main_ball", fx)?;
    require_positive("main_ball", fy)?;
    let d = dist_h(x, y);
    let nf = n as f64;
    let log_f = (fx / fy).ln().abs();
    let log_w_ratio = ((1.0 - norm_sqr(y)) / (1.0 - norm_sqr(x))).ln();
    let log_weighted = ((fx / fy).ln() - (nf / 2.0 - 1.0) * log_w_ratio).abs();
    let chain = nf / 2.0 * d + (nf / 2.0 - 1.0) * log_w_ratio.abs();
    let tol = 1e-10;
    let pts: [&[f64]; 2] = [x, y];
    Ok(vec![
        CheckReport::at_most("main_ball", n, log_f, (nf - 1.0) * d, tol, Regime::Structural).with_points(&pts),
        CheckReport::at_most("main_ball.weighted", n, log_weighted, nf / 2.0 * d, tol, Regime::Structural)
            .with_points(&pts),
        CheckReport::at_most("main_ball.chain", n, log_f, chain, tol, Regime::Structural).with_points(&pts),
        CheckReport::at_most("main_ball.chain_bound", n, chain, (nf - 1.0) * d, tol, Regime::Structural)
            .with_points(&pts),
    ])
}

/// Integral of `|grad log W| |gamma'|` along the geodesic from `x` to `y`
/// by composite Simpson with `steps` panels. Returns `[lower, upper]`:
/// `|log W(x) - log W(y)| <= I` and `I <= (n/2) d(x, y)`, each with
/// relative slack `1e-6`.
pub fn check_geodesic_integral(f: &dyn ScalarField, x: &[f64], y: &[f64], steps: usize) -> Result<[CheckReport; 2]> {
    let n = f.dim();
    same_dim(n, x.len())?;
    let geo = Geodesic::new(x, y)?;
    let steps = steps.max(2).next_multiple_of(2);
    let nf = n as f64;
    let log_w = |p: &[f64]| (nf / 2.0 - 1.0) * (1.0 - norm_sqr(p)).ln() + f.value(p).ln();
    let integrand = |t: f64| {
        let p = geo.point(t);
        let v = f.value(&p);
        let g = f.gradient(&p);
        let s = 1.0 - norm_sqr(&p);
        let grad: Vec<f64> = g.iter().zip(&p).map(|(gk, pk)| gk / v - (nf - 2.0) * pk / s).collect();
        norm(&grad) * norm(&geo.velocity(t))
    };
    let h = 1.0 / steps as f64;
    let mut integral = integrand(0.0) + integrand(1.0);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        integral += w * integrand(k as f64 * h);
    }
    integral *= h / 3.0;
    let endpoint = (log_w(x) - log_w(y)).abs();
    let bound = nf / 2.0 * geo.length();
    let tol = 1e-6 * (1.0 + integral);
    let pts: [&[f64]; 2] = [x, y];
    Ok([
        CheckReport::at_most("geodesic_integral.lower", n, endpoint, integral, tol, Regime::Quadrature).with_points(&pts),
        CheckReport::at_most("geodesic_integral.upper", n, integral, bound, tol, Regime::Quadrature).with_points(&pts),
    ])
}

fn gradient_tol(e: &Estimate) -> f64 {
    QUADRATURE_TOL + e.jacobian_err
}

/// Sharp gradient bound for real bounded harmonic `u`, with the `8/(3 sqrt 3)`
/// constant in dimension three.
pub fn check_liu_scalar(u: &BoundedHarmonic<'_>, x: &[f64]) -> Result<CheckReport> {
    let n = u.dim();
    if u.target_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: u.target_dim(),
        });
    }
    let e = u.estimate(x)?;
    let lhs = norm(e.jacobian.row(0));
    let rhs = sharp_gradient_constant(n) / (1.0 - norm_sqr(x));
    Ok(CheckReport::at_most("liu_scalar", n, lhs, rhs, gradient_tol(&e), u.regime()).with_point(x))
}

fn require_liu_dimension(check: &'static str, n: usize) -> Result<()> {
    if n == 3 || n < 2 {
        Err(Error::UnsupportedDimension { check, n })
    } else {
        Ok(())
    }
}

/// Operator-norm gradient bound for bounded harmonic maps into `B_m`. With a
/// unit vector `l`, also checks the scalar reduction `<u, l>`:
/// `|J^T l| <= ||J||` and `|J^T l| <= liu / (1 - |x|^2)`.
pub fn check_liu_vector(u: &BoundedHarmonic<'_>, x: &[f64], l: Option<&[f64]>) -> Result<Vec<CheckReport>> {
    let n = u.dim();
    let m = u.target_dim();
    require_liu_dimension("liu_vector", n)?;
    let e = u.estimate(x)?;
    let opnorm = operator_norm(&e.jacobian);
    let rhs = liu_constant(n) / (1.0 - norm_sqr(x));
    let tol = gradient_tol(&e);
    let mut out =
        vec![CheckReport::at_most("liu_vector", n, opnorm, rhs, tol, u.regime()).with_m(m).with_point(x)];
    if let Some(l) = l {
        same_dim(m, l.len())?;
        let proj = norm(&e.jacobian.apply_transpose(l));
        out.push(
            CheckReport::at_most("liu_vector.projection_norm", n, proj, opnorm, 1e-12 * opnorm.max(1.0), Regime::Structural)
                .with_m(m)
                .with_points(&[x, l]),
        );
        out.push(
            CheckReport::at_most("liu_vector.projection", n, proj, rhs, tol, u.regime())
                .with_m(m)
                .with_points(&[x, l]),
        );
    }
    Ok(out)
}

/// `|u(x) - u(y)| <= (liu / 2) d(x, y)` with the Euclidean norm on the left.
pub fn check_liu_hyperbolic(u: &BoundedHarmonic<'_>, x: &[f64], y: &[f64]) -> Result<CheckReport> {
    let n = u.dim();
    require_liu_dimension("liu_hyperbolic", n)?;
    require_away_from_boundary(x)?;
    require_away_from_boundary(y)?;
    let ex = u.estimate(x)?;
    let ey = u.estimate(y)?;
    let lhs = point::dist(&ex.value, &ey.value);
    let rhs = liu_constant(n) / 2.0 * dist_h(x, y);
    let tol = QUADRATURE_TOL + ex.value_err + ey.value_err;
    Ok(CheckReport::at_most("liu_hyperbolic", n, lhs, rhs, tol, u.regime())
        .with_m(u.target_dim())
        .with_points(&[x, y]))
}

/// Right-hand side of the planar bound for `f: D -> (-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KvVariant {
    /// `(4/pi)(1 - f^2) / (1 - |z|^2)`.
    Original,
    /// `(4/pi) cos(pi |f| / 2) / (1 - |z|^2)`.
    Chen,
}

impl KvVariant {
    pub fn rhs(self, f: f64, z2: f64) -> f64 {
        let c = 4.0 / PI / (1.0 - z2);
        match self {
            KvVariant::Original => c * (1.0 - f * f),
            KvVariant::Chen => c * (PI * f.abs() / 2.0).cos(),
        }
    }

    /// Bound on `|d rhs / d f|`.
    fn sensitivity(self, f: f64, z2: f64) -> f64 {
        let c = 4.0 / PI / (1.0 - z2);
        match self {
            KvVariant::Original => c * 2.0 * f.abs(),
            KvVariant::Chen => c * PI / 2.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KvVariant::Original => "kalaj_vuorinen",
            KvVariant::Chen => "kalaj_vuorinen.chen",
        }
    }
}

fn planar_scalar(u: &BoundedHarmonic<'_>, check: &'static str) -> Result<()> {
    if u.dim() != 2 {
        return Err(Error::UnsupportedDimension { check, n: u.dim() });
    }
    if u.target_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: u.target_dim(),
        });
    }
    Ok(())
}

/// Gradient bound for harmonic `f: D -> (-1, 1)` in terms of `f(z)`.
pub fn check_kalaj_vuorinen(u: &BoundedHarmonic<'_>, z: &[f64], variant: KvVariant) -> Result<CheckReport> {
    planar_scalar(u, variant.name())?;
    let e = u.estimate(z)?;
    let f = e.value[0];
    let z2 = norm_sqr(z);
    let lhs = norm(e.jacobian.row(0));
    let rhs = variant.rhs(f, z2);
    let tol = gradient_tol(&e) + variant.sensitivity(f, z2) * e.value_err;
    Ok(CheckReport::at_most(variant.name(), 2, lhs, rhs, tol, u.regime()).with_point(z))
}

/// The refined planar bound never exceeds the original one at the same
/// value of `f(z)`.
pub fn check_chen_refines(u: &BoundedHarmonic<'_>, z: &[f64]) -> Result<CheckReport> {
    planar_scalar(u, "kalaj_vuorinen.refines")?;
    let f = u.estimate(z)?.value[0];
    let z2 = norm_sqr(z);
    let chen = KvVariant::Chen.rhs(f, z2);
    let orig = KvVariant::Original.rhs(f, z2);
    Ok(CheckReport::at_most("kalaj_vuorinen.refines", 2, chen, orig, 1e-14 * orig, Regime::Structural).with_point(z))
}

/// Evaluates `|grad f| / (1 - f^2)` against `liu / (1 - |x|^2)` without
/// asserting; violations are findings.
pub fn counterexample_probe_conjecture(u: &BoundedHarmonic<'_>, x: &[f64]) -> Result<CheckReport> {
    let n = u.dim();
    if n < 4 {
        return Err(Error::UnsupportedDimension {
            check: "conjecture_probe",
            n,
        });
    }
    if u.target_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: u.target_dim(),
        });
    }
    let e = u.estimate(x)?;
    let f = e.value[0];
    let lhs = norm(e.jacobian.row(0)) / (1.0 - f * f);
    let rhs = liu_constant(n) / (1.0 - norm_sqr(x));
    Ok(CheckReport::at_most("conjecture_probe", n, lhs, rhs, gradient_tol(&e), Regime::Informational).with_point(x))
}

/// `|grad U(0)|` for the hemisphere data against `liu_constant(n)`: `1e-8`
/// for deterministic rules, three standard errors for Monte Carlo.
pub fn check_hemisphere_constant(q: &SphereQuadrature) -> Result<CheckReport> {
    let n = q.dim();
    let est = hemisphere_gradient_at_zero(q)?;
    let (tol, regime) = if q.scheme().is_stochastic() {
        (MC_SIGMAS * est.std_error, Regime::MonteCarlo)
    } else {
        (QUADRATURE_TOL, Regime::Quadrature)
    };
    Ok(CheckReport::equal("hemisphere_constant", n, est.value, liu_constant(n), tol, regime).with_point(&vec![0.0; n]))
}

/// `|u(x)| <= 1 + 5 err`, where `err` is the quadrature error estimate.
pub fn check_poisson_bound(u: &BoundedHarmonic<'_>, x: &[f64]) -> Result<CheckReport> {
    let e = u.estimate(x)?;
    let err = e.value_err.max((e.kernel_mass - 1.0).abs());
    Ok(CheckReport::at_most("poisson_bound", u.dim(), norm(&e.value), 1.0 + 5.0 * err, 1e-14, u.regime())
        .with_m(u.target_dim())
        .with_point(x))
}

/// Product of Householder reflections `I - 2 v v^T / |v|^2`, row-major.
/// An empty list gives the identity.
pub fn householder_product(n: usize, vectors: &[Vec<f64>]) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        t[i * n + i] = 1.0;
    }
    for v in vectors {
        let v2 = norm_sqr(v);
        if v2 == 0.0 {
            continue;
        }
        // T <- T (I - 2 v v^T / |v|^2)
        for r in 0..n {
            let tv: f64 = (0..n).map(|c| t[r * n + c] * v[c]).sum();
            for c in 0..n {
                t[r * n + c] -= 2.0 * tv * v[c] / v2;
            }
        }
    }
    t
}

/// Random orthogonal matrix as a product of `n` Householder reflections of
/// Gaussian vectors.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let vectors: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| StandardNormal.sample(rng)).collect())
        .collect();
    householder_product(n, &vectors)
}

/// `max |T^T T - I|` entrywise.
pub fn orthogonality_residual(t: &[f64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let s: f64 = (0..n).map(|k| t[k * n + i] * t[k * n + j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{AtomicHarmonic, ExtremalFunction, FnField};
    use crate::lab::sampling::{random_atomic, random_bounded_data, random_interior, random_unit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn main_sharp_constant_limit() {
        // f = c: lhs = (n - 2)|x| c
        let c = 0.7;
        let f = FnField::new(4, move |_: &[f64]| c);
        let x = [0.3, 0.0, 0.4, 0.0];
        let r = check_main_sharp(&f, &x).unwrap();
        assert!((r.lhs - 2.0 * 0.5 * c).abs() < 1e-9 && r.rhs == 4.0 * c && r.pass);
    }

    #[test]
    fn main_sharp_single_atom_is_equality() {
        let f = AtomicHarmonic::single(2.0, vec![0.0, 0.0, 1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = random_interior(&mut rng, 3, 0.9);
            let r = check_main_sharp_equality(&f, &x).unwrap();
            assert!(r.pass, "margin {}", r.margin);
        }
    }

    #[test]
    fn main_sharp_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [2, 3, 4, 8] {
            for _ in 0..300 {
                let f = random_atomic(&mut rng, n);
                let x = random_interior(&mut rng, n, 0.95);
                assert!(check_main_sharp(&f, &x).unwrap().pass);
            }
        }
    }

    #[test]
    fn main_ball_examples() {
        let f = AtomicHarmonic::single(1.0, vec![1.0, 0.0]).unwrap();
        let x = [0.3, 0.1];
        let reps = check_main_ball(&f, &x, &x).unwrap();
        assert!(reps.iter().all(|r| r.pass && r.lhs.abs() < 1e-15));
        // f values 2 and 6: |log(2/6)| = log 3
        assert!(((2.0f64 / 6.0).ln().abs() - 3f64.ln()).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=8 {
            for _ in 0..200 {
                let f = random_atomic(&mut rng, n);
                let x = random_interior(&mut rng, n, 0.9);
                let y = random_interior(&mut rng, n, 0.9);
                for r in check_main_ball(&f, &x, &y).unwrap() {
                    assert!(r.pass, "{} n={n} margin {}", r.check, r.margin);
                }
            }
        }
    }

    #[test]
    fn geodesic_integral_extremal_is_sharp() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [2, 3] {
            let a = random_interior(&mut rng, n, 0.5);
            let xi = random_unit(&mut rng, n);
            let f = ExtremalFunction::new(&a, &xi, 1.0).unwrap();
            let x = random_interior(&mut rng, n, 0.7);
            let y = random_interior(&mut rng, n, 0.7);
            let [lo, hi] = check_geodesic_integral(&f, &x, &y, 2000).unwrap();
            assert!(lo.pass && hi.pass);
            assert!((hi.lhs - hi.rhs).abs() <= 1e-4 * hi.rhs, "{} vs {}", hi.lhs, hi.rhs);
        }
        let f = random_atomic(&mut rng, 4);
        let x = random_interior(&mut rng, 4, 0.7);
        let y = random_interior(&mut rng, 4, 0.7);
        let [lo, hi] = check_geodesic_integral(&f, &x, &y, 400).unwrap();
        assert!(lo.pass && hi.pass);
        let [lo, _] = check_geodesic_integral(&f, &x, &x, 10).unwrap();
        assert!(lo.lhs == 0.0 && lo.rhs == 0.0);
    }

    #[test]
    fn liu_scalar_equality_at_origin() {
        for n in [2, 3] {
            let q = QuadraturePair::standard(n, 2000, 0).unwrap();
            let u = BoundedHarmonic::new(&BoundaryData::hemisphere(n), &q).unwrap();
            let r = check_liu_scalar(&u, &vec![0.0; n]).unwrap();
            assert!(r.pass);
            if n == 2 {
                assert!(r.margin.abs() < 1e-12);
            } else {
                // strict for the 3-ball override
                assert!(r.margin > 0.03);
            }
        }
        let q = QuadraturePair::standard(4, 50_000, 1).unwrap();
        let u = BoundedHarmonic::new(&BoundaryData::hemisphere(4), &q).unwrap();
        let r = check_liu_scalar(&u, &[0.0; 4]).unwrap();
        assert!(r.pass && r.margin.abs() <= r.tol);
    }

    #[test]
    fn liu_scalar_constant_data() {
        let q = QuadraturePair::standard(2, 400, 0).unwrap();
        let u = BoundedHarmonic::new(&BoundaryData::constant(2, vec![1.0]), &q).unwrap();
        let r = check_liu_scalar(&u, &[0.4, 0.2]).unwrap();
        assert!(r.lhs < 1e-10 && r.pass);
    }

    #[test]
    fn liu_vector_rejects_three() {
        let q = QuadraturePair::standard(3, 500, 0).unwrap();
        let g = BoundaryData::constant(3, vec![0.1, 0.2]);
        let u = BoundedHarmonic::new(&g, &q).unwrap();
        assert!(matches!(check_liu_vector(&u, &[0.0; 3], None), Err(Error::UnsupportedDimension { n: 3, .. })));
        assert!(matches!(check_liu_hyperbolic(&u, &[0.0; 3], &[0.1, 0.0, 0.0]), Err(Error::UnsupportedDimension { .. })));
    }

    #[test]
    fn liu_vector_embedded_hemisphere() {
        let q = QuadraturePair::standard(2, 800, 0).unwrap();
        let g = BoundaryData::new(2, 2, true, "embedded", |xi: &[f64]| vec![xi[0].signum(), 0.0]);
        let u = BoundedHarmonic::new(&g, &q).unwrap();
        let reps = check_liu_vector(&u, &[0.0, 0.0], Some(&[1.0, 0.0])).unwrap();
        assert!(reps.iter().all(|r| r.pass));
        assert!(reps[0].margin.abs() < 1e-12);
    }

    #[test]
    fn liu_sweeps_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, m) in [(2, 1), (2, 3), (3, 1), (4, 2)] {
            let q = QuadraturePair::standard(n, 4000, 11).unwrap();
            for _ in 0..10 {
                let g = random_bounded_data(&mut rng, n, m);
                let u = BoundedHarmonic::new(&g, &q).unwrap();
                let x = random_interior(&mut rng, n, 0.8);
                let y = random_interior(&mut rng, n, 0.8);
                assert!(check_poisson_bound(&u, &x).unwrap().pass);
                if m == 1 {
                    assert!(check_liu_scalar(&u, &x).unwrap().pass);
                }
                if n != 3 {
                    let l = random_unit(&mut rng, m);
                    assert!(check_liu_vector(&u, &x, Some(&l)).unwrap().iter().all(|r| r.pass));
                    assert!(check_liu_hyperbolic(&u, &x, &y).unwrap().pass);
                }
            }
        }
    }

    #[test]
    fn kalaj_vuorinen_examples() {
        let q = QuadraturePair::standard(2, 800, 0).unwrap();
        let u = BoundedHarmonic::new(&BoundaryData::hemisphere(2), &q).unwrap();
        let r = check_kalaj_vuorinen(&u, &[0.0, 0.0], KvVariant::Original).unwrap();
        assert!(r.pass && r.margin.abs() < 1e-12);
        let c = check_kalaj_vuorinen(&u, &[0.0, 0.0], KvVariant::Chen).unwrap();
        assert!((c.rhs - r.rhs).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let g = random_bounded_data(&mut rng, 2, 1);
            let u = BoundedHarmonic::new(&g, &q).unwrap();
            let z = random_interior(&mut rng, 2, 0.8);
            let o = check_kalaj_vuorinen(&u, &z, KvVariant::Original).unwrap();
            let c = check_kalaj_vuorinen(&u, &z, KvVariant::Chen).unwrap();
            assert!(o.pass && c.pass);
            assert!(c.margin <= o.margin + 1e-15);
            assert!(check_chen_refines(&u, &z).unwrap().pass);
        }
    }

    #[test]
    fn probe_is_informational() {
        let q = QuadraturePair::standard(4, 5000, 2).unwrap();
        let u = BoundedHarmonic::new(&BoundaryData::constant(4, vec![0.9]), &q).unwrap();
        let r = counterexample_probe_conjecture(&u, &[0.1, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.regime, Regime::Informational);
        // Monte Carlo noise only: |grad u| stays within the tolerance
        assert!(r.lhs * (1.0 - 0.81) <= r.tol && r.ok());
    }

    #[test]
    fn rotations() {
        assert_eq!(householder_product(3, &[]), vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=8 {
            let t = random_rotation(&mut rng, n);
            assert!(orthogonality_residual(&t, n) < 1e-12);
        }
    }

    #[test]
    fn rotated_hemisphere_keeps_gradient_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let q = QuadraturePair::standard(2, 4000, 0).unwrap();
        let t = random_rotation(&mut rng, 2);
        let g = BoundaryData::hemisphere(2).rotated(&t).unwrap();
        let u = BoundedHarmonic::new(&g, &q).unwrap();
        let e = u.estimate(&[0.0, 0.0]).unwrap();
        let got = norm(e.jacobian.row(0));
        assert!((got - 4.0 / PI).abs() <= e.jacobian_err + 1e-8, "{got} err {}", e.jacobian_err);
    }

    #[test]
    fn hemisphere_constant_reports() {
        for q in [
            SphereQuadrature::standard(2, 256, 0).unwrap(),
            SphereQuadrature::standard(3, 2000, 0).unwrap(),
            SphereQuadrature::standard(5, 100_000, 3).unwrap(),
        ] {
            let r = check_hemisphere_constant(&q).unwrap();
            assert!(r.pass, "n={} {} vs {} tol {}", r.n, r.lhs, r.rhs, r.tol);
        }
    }
}
