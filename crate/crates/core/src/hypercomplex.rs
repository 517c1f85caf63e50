//! Dirac operators for Clifford- and octonion-valued functions on the unit
//! ball, and the Schwarz-type bounds for bounded harmonic such functions.
//!
//! Domain coordinates are `x = (x_0, ..., x_n)` in `R^{n+1}`, identified with
//! the paravector `x_0 + sum x_i e_i` of the Clifford algebra with `n`
//! generators (or with an octonion when `n + 1 = 8`).

use std::sync::Arc;

use rand::Rng;

use crate::clifford::{blade_mul, MultiVector};
use crate::error::{Error, Result};
use crate::harmonic::{Polynomial, ScalarField};
use crate::lab::constants::zhang_constant;
use crate::lab::jacobian::{operator_norm, JacobianMatrix};
use crate::lab::sampling::random_unit;
use crate::mobius::{bracket, mobius_map};
use crate::octonion::Octonion;
use crate::point::{self, norm, norm_sqr, require_interior, same_dim};
use crate::report::{CheckReport, Regime};

/// Central-difference step for the Dirac operators.
pub const DIRAC_STEP: f64 = 1e-5;
/// Step for the nested second-order stencils of the factorization checks.
pub const FACTORIZATION_STEP: f64 = 1e-3;
/// Largest `|x|` at which the Dirac stencils are evaluated.
pub const DIRAC_MAX_RADIUS: f64 = 0.95;
/// Tolerance of the factorization and monogenicity checks.
pub const DIRAC_TOL: f64 = 1e-6;

/// Which operator: `D = sum e_i d_i` or `D-bar = sum conj(e_i) d_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracVariant {
    D,
    DBar,
}

impl DiracVariant {
    fn sign(self, i: usize) -> f64 {
        match (self, i) {
            (DiracVariant::DBar, i) if i > 0 => -1.0,
            _ => 1.0,
        }
    }
}

type CliffordEval = Arc<dyn Fn(&[f64]) -> MultiVector + Send + Sync>;

/// `F: B_{n+1} -> R_{0,n}`.
#[derive(Clone)]
pub struct CliffordField {
    dim: usize,
    label: String,
    eval: CliffordEval,
}

impl std::fmt::Debug for CliffordField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CliffordField").field("dim", &self.dim).field("label", &self.label).finish()
    }
}

impl CliffordField {
    pub fn new(
        dim: usize,
        label: impl Into<String>,
        eval: impl Fn(&[f64]) -> MultiVector + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim < 1 {
            return Err(Error::UnsupportedDimension {
                check: "clifford field",
                n: dim,
            });
        }
        MultiVector::zero(dim - 1)?;
        Ok(Self {
            dim,
            label: label.into(),
            eval: Arc::new(eval),
        })
    }

    /// One scalar polynomial per basis blade.
    pub fn from_polynomials(dim: usize, components: Vec<Polynomial>) -> Result<Self> {
        let m = dim.checked_sub(1).ok_or(Error::UnsupportedDimension {
            check: "clifford field",
            n: dim,
        })?;
        same_dim(1 << m, components.len())?;
        for p in &components {
            same_dim(dim, p.dim())?;
        }
        Self::new(dim, "polynomial", move |x: &[f64]| {
            let coeffs = components.iter().map(|p| p.eval(x)).collect();
            MultiVector::from_coeffs(m, coeffs).expect("component count matches")
        })
    }

    /// Fueter variable `x_i - x_0 e_i`, `1 <= i <= n`.
    pub fn fueter(dim: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= dim {
            return Err(Error::Invalid(format!("Fueter variable index {i} outside 1..{}", dim - 1)));
        }
        let m = dim - 1;
        Self::new(dim, format!("fueter_{i}"), move |x: &[f64]| {
            let mut c = vec![0.0; 1 << m];
            c[0] = x[i];
            c[1 << (i - 1)] = -x[0];
            MultiVector::from_coeffs(m, c).expect("valid")
        })
    }

    /// `x -> conj(x)` for the paravector `x`.
    pub fn paravector_conj(dim: usize) -> Result<Self> {
        Self::new(dim, "conj", |x: &[f64]| MultiVector::paravector(x).expect("valid").conj())
    }

    pub fn constant(value: MultiVector) -> Result<Self> {
        let dim = value.generators() + 1;
        Self::new(dim, "constant", move |_| value.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> usize {
        self.dim - 1
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: &[f64]) -> MultiVector {
        (self.eval)(x)
    }

    /// `alpha F + beta G`.
    pub fn combine(&self, alpha: f64, other: &CliffordField, beta: f64) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Self::new(self.dim, "combination", move |x: &[f64]| &f(x).scale(alpha) + &g(x).scale(beta))
    }
}

/// `e_A * v` for a basis blade, in `O(2^m)`.
fn left_blade_mul(blade: u32, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (b, &c) in v.iter().enumerate() {
        if c != 0.0 {
            let (s, r) = blade_mul(blade, b as u32);
            out[r as usize] += s * c;
        }
    }
    out
}

fn require_stencil(x: &[f64]) -> Result<()> {
    let r = norm(x);
    if r > DIRAC_MAX_RADIUS {
        return Err(Error::NearBoundary {
            gap: 1.0 - r,
            min_gap: 1.0 - DIRAC_MAX_RADIUS,
        });
    }
    Ok(())
}

/// `sum_i e_i dF/dx_i` (or with `conj(e_i)`), coefficient vector.
fn dirac_coeffs(f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], variant: DiracVariant, h: f64) -> Vec<f64> {
    let cols = crate::diff::jacobian(f, x, h);
    // cols: rows are coefficients, columns are directions
    let len = cols.len();
    let mut out = vec![0.0; len];
    for i in 0..x.len() {
        let partial: Vec<f64> = cols.iter().map(|row| row[i]).collect();
        let blade = if i == 0 { 0 } else { 1u32 << (i - 1) };
        let term = left_blade_mul(blade, &partial);
        let s = variant.sign(i);
        for (o, t) in out.iter_mut().zip(term) {
            *o += s * t;
        }
    }
    out
}

/// Central-difference Dirac operator, step [`DIRAC_STEP`].
pub fn dirac_fd(f: &CliffordField, x: &[f64], variant: DiracVariant) -> Result<MultiVector> {
    same_dim(f.dim(), x.len())?;
    require_stencil(x)?;
    let coeffs = dirac_coeffs(&|p: &[f64]| f.eval(p).coeffs().to_vec(), x, variant, DIRAC_STEP);
    MultiVector::from_coeffs(f.generators(), coeffs)
}

/// `D-bar(D F) = D(D-bar F) = Delta F`, nested central differences with
/// step [`FACTORIZATION_STEP`] (exact up to rounding for quadratics).
/// Returns the reports for both orders.
pub fn laplacian_factorization_check(f: &CliffordField, x: &[f64]) -> Result<[CheckReport; 2]> {
    same_dim(f.dim(), x.len())?;
    require_stencil(x)?;
    let h = FACTORIZATION_STEP;
    let comps = |p: &[f64]| f.eval(p).coeffs().to_vec();
    let lap = crate::diff::vector_laplacian(comps, x, h);
    let run = |first: DiracVariant, second: DiracVariant| {
        let inner = |p: &[f64]| dirac_coeffs(&comps, p, first, h);
        let outer = dirac_coeffs(&inner, x, second, h);
        point::dist(&outer, &lap)
    };
    let scale = norm(&lap).max(1.0);
    let n = f.dim();
    let m = 1 << f.generators();
    Ok([
        CheckReport::equal("dirac.factorization", n, run(DiracVariant::D, DiracVariant::DBar), 0.0, DIRAC_TOL * scale, Regime::FiniteDifference)
            .with_m(m)
            .with_point(x),
        CheckReport::equal("dirac.factorization_reversed", n, run(DiracVariant::DBar, DiracVariant::D), 0.0, DIRAC_TOL * scale, Regime::FiniteDifference)
            .with_m(m)
            .with_point(x),
    ])
}

/// `|D F(x)| <= 1e-6`.
pub fn monogenic_check(f: &CliffordField, x: &[f64]) -> Result<CheckReport> {
    let d = dirac_fd(f, x, DiracVariant::D)?;
    Ok(CheckReport::equal("dirac.monogenic", f.dim(), d.norm(), 0.0, DIRAC_TOL, Regime::FiniteDifference)
        .with_m(1 << f.generators())
        .with_point(x))
}

type OctonionEval = Arc<dyn Fn(&[f64]) -> Octonion + Send + Sync>;

/// `F: B_8 -> O`.
#[derive(Clone)]
pub struct OctonionField {
    label: String,
    eval: OctonionEval,
}

impl std::fmt::Debug for OctonionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OctonionField").field("label", &self.label).finish()
    }
}

impl OctonionField {
    pub fn new(label: impl Into<String>, eval: impl Fn(&[f64]) -> Octonion + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn from_polynomials(components: Vec<Polynomial>) -> Result<Self> {
        same_dim(8, components.len())?;
        for p in &components {
            same_dim(8, p.dim())?;
        }
        Ok(Self::new("polynomial", move |x: &[f64]| Octonion(std::array::from_fn(|k| components[k].eval(x)))))
    }

    /// `x_i - x_0 e_i`.
    pub fn fueter(i: usize) -> Result<Self> {
        if i == 0 || i >= 8 {
            return Err(Error::Invalid(format!("Fueter variable index {i} outside 1..7")));
        }
        Ok(Self::new(format!("fueter_{i}"), move |x: &[f64]| {
            let mut c = [0.0; 8];
            c[0] = x[i];
            c[i] = -x[0];
            Octonion(c)
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: &[f64]) -> Octonion {
        (self.eval)(x)
    }
}

fn oct_dirac_coeffs(f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], variant: DiracVariant, h: f64) -> Vec<f64> {
    let cols = crate::diff::jacobian(f, x, h);
    let mut out = Octonion::ZERO;
    for i in 0..8 {
        let partial = Octonion(std::array::from_fn(|k| cols[k][i]));
        let e = Octonion::basis(i).scale(variant.sign(i));
        out = out + e * partial;
    }
    out.0.to_vec()
}

/// Central-difference octonionic Dirac operator, left multiplication by the
/// basis units.
pub fn oct_dirac_fd(f: &OctonionField, x: &[f64], variant: DiracVariant) -> Result<Octonion> {
    same_dim(8, x.len())?;
    require_stencil(x)?;
    let c = oct_dirac_coeffs(&|p: &[f64]| f.eval(p).0.to_vec(), x, variant, DIRAC_STEP);
    Ok(Octonion(std::array::from_fn(|k| c[k])))
}

/// `D-bar(D F) = Delta F` for octonion-valued `F`.
pub fn oct_factorization_check(f: &OctonionField, x: &[f64]) -> Result<CheckReport> {
    same_dim(8, x.len())?;
    require_stencil(x)?;
    let h = FACTORIZATION_STEP;
    let comps = |p: &[f64]| f.eval(p).0.to_vec();
    let lap = crate::diff::vector_laplacian(comps, x, h);
    let inner = |p: &[f64]| oct_dirac_coeffs(&comps, p, DiracVariant::D, h);
    let outer = oct_dirac_coeffs(&inner, x, DiracVariant::DBar, h);
    let residual = point::dist(&outer, &lap);
    Ok(CheckReport::equal("dirac.octonion_factorization", 8, residual, 0.0, DIRAC_TOL * norm(&lap).max(1.0), Regime::FiniteDifference)
        .with_m(8)
        .with_point(x))
}

/// `|D F(x)| <= 1e-6` for octonion-valued `F`.
pub fn oct_monogenic_check(f: &OctonionField, x: &[f64]) -> Result<CheckReport> {
    let d = oct_dirac_fd(f, x, DiracVariant::D)?;
    Ok(CheckReport::equal("dirac.octonion_monogenic", 8, d.norm(), 0.0, DIRAC_TOL, Regime::FiniteDifference)
        .with_m(8)
        .with_point(x))
}

/// The two weighted composites of `F` with `phi_a`:
/// `g(x) = ((1 - |a|) / |1 - x conj(a)|)^{n-1} F(phi_a(x))`, bounded by one,
/// and `g1(x) = ((1 - |a|^2) / |1 - x conj(a)|^2)^{(n+1)/2 - 1} F(phi_a(x))`,
/// harmonic whenever `F` is.
pub fn schwarz_transform(f: &CliffordField, a: &[f64]) -> Result<(CliffordField, CliffordField)> {
    same_dim(f.dim(), a.len())?;
    require_interior(a)?;
    let n = f.generators() as i32;
    let dim = f.dim();
    let ra = norm(a);
    let a2 = norm_sqr(a);
    let (fa, ga) = (f.eval.clone(), a.to_vec());
    let g = CliffordField::new(dim, format!("{}[g]", f.label), move |x: &[f64]| {
        let w = ((1.0 - ra) / bracket(x, &ga)).powi(n - 1);
        fa(&mobius_map(&ga, x)).scale(w)
    })?;
    let (fb, gb) = (f.eval.clone(), a.to_vec());
    let exponent = (n as f64 + 1.0) / 2.0 - 1.0;
    let g1 = CliffordField::new(dim, format!("{}[g1]", f.label), move |x: &[f64]| {
        let w = ((1.0 - a2) / bracket(x, &gb).powi(2)).powf(exponent);
        fb(&mobius_map(&gb, x)).scale(w)
    })?;
    Ok((g, g1))
}

/// `|1 - conj(a) x|` as a Clifford product of paravectors.
pub fn clifford_bracket(a: &[f64], x: &[f64]) -> Result<f64> {
    same_dim(a.len(), x.len())?;
    let av = MultiVector::paravector(a)?;
    let xv = MultiVector::paravector(x)?;
    let one = MultiVector::one(av.generators())?;
    Ok((&one - &(&av.conj() * &xv)).norm())
}

/// `|1 - conj(a) x|` in the octonions.
pub fn octonion_bracket(a: &[f64], x: &[f64]) -> Result<f64> {
    same_dim(8, a.len())?;
    same_dim(8, x.len())?;
    let ao = Octonion(std::array::from_fn(|k| a[k]));
    let xo = Octonion(std::array::from_fn(|k| x[k]));
    Ok((Octonion::ONE - ao.conj() * xo).norm())
}

/// Largest `|F(a)|` accepted as `F(a) = 0`.
pub const VANISHING_TOL: f64 = 1e-12;

fn require_vanishing(check: &'static str, value: f64) -> Result<()> {
    if value > VANISHING_TOL {
        Err(Error::Precondition {
            check,
            reason: format!("requires F(a) = 0, got |F(a)| = {value:e}"),
        })
    } else {
        Ok(())
    }
}

/// Schwarz bounds for `F: B_{n+1} -> R_{0,n}` harmonic, `|F| <= 1`,
/// `F(a) = 0`. Reports:
///
/// - `zhang.improved`: `|F(x)| <= C (1+|a|)^{n-1} |x-a| / |1 - conj(a)x|^n`;
/// - `zhang.original`: `|F(x)| <= C (1+|a|)^n |x-a| / |1 - conj(a)x|^{n+1}`;
/// - `zhang.comparison`: improved bound below the original one, strictly
///   when `x != a` and `a != 0`.
///
/// `C = 1 / (2^{1/(n+1)} - 1)`.
pub fn check_zhang_improved(f: &CliffordField, a: &[f64], x: &[f64]) -> Result<Vec<CheckReport>> {
    let dim = f.dim();
    same_dim(dim, a.len())?;
    same_dim(dim, x.len())?;
    require_interior(a)?;
    require_interior(x)?;
    require_vanishing("zhang", f.eval(a).norm())?;
    let n = f.generators() as i32;
    let c = zhang_constant(dim);
    let ra = norm(a);
    let br = clifford_bracket(a, x)?;
    let dx = point::dist(x, a);
    let lhs = f.eval(x).norm();
    let improved = c * (1.0 + ra).powi(n - 1) * dx / br.powi(n);
    let original = c * (1.0 + ra).powi(n) * dx / br.powi(n + 1);
    let tol = 1e-12 * improved.max(1.0);
    let m = 1 << f.generators();
    let pts: [&[f64]; 2] = [a, x];
    let mut out = vec![
        CheckReport::at_most("zhang.improved", dim, lhs, improved, tol, Regime::Structural).with_m(m).with_points(&pts),
        CheckReport::at_most("zhang.original", dim, lhs, original, tol, Regime::Structural).with_m(m).with_points(&pts),
    ];
    let strict = dx > 0.0 && ra > 0.0;
    let cmp = if strict {
        CheckReport::less_than("zhang.comparison", dim, improved, original, 0.0, Regime::Structural)
    } else {
        CheckReport::at_most("zhang.comparison", dim, improved, original, 1e-15 * original, Regime::Structural)
    };
    out.push(cmp.with_m(m).with_points(&pts));
    Ok(out)
}

/// `||grad F(a)|| <= C / ((1 + |a|)(1 - |a|)^n)` with the operator norm of
/// the central-difference Jacobian.
pub fn check_zhang_gradient(f: &CliffordField, a: &[f64]) -> Result<CheckReport> {
    let dim = f.dim();
    same_dim(dim, a.len())?;
    require_stencil(a)?;
    require_vanishing("zhang.gradient", f.eval(a).norm())?;
    let n = f.generators() as i32;
    let rows = crate::diff::jacobian(|p| f.eval(p).coeffs().to_vec(), a, DIRAC_STEP);
    let lhs = operator_norm(&JacobianMatrix::from_rows(&rows)?);
    let ra = norm(a);
    let rhs = zhang_constant(dim) / ((1.0 + ra) * (1.0 - ra).powi(n));
    Ok(CheckReport::at_most("zhang.gradient", dim, lhs, rhs, DIRAC_TOL * rhs, Regime::FiniteDifference)
        .with_m(1 << f.generators())
        .with_point(a))
}

/// `|F(x)| <= (1+|a|)^6 / (2^{1/8} - 1) |x - a| / |1 - conj(a) x|^7` for
/// `F: B_8 -> O` harmonic, `|F| <= 1`, `F(a) = 0`.
pub fn check_wang(f: &OctonionField, a: &[f64], x: &[f64]) -> Result<CheckReport> {
    same_dim(8, a.len())?;
    same_dim(8, x.len())?;
    require_interior(a)?;
    require_interior(x)?;
    require_vanishing("wang", f.eval(a).norm())?;
    let br = octonion_bracket(a, x)?;
    let rhs = zhang_constant(8) * (1.0 + norm(a)).powi(6) * point::dist(x, a) / br.powi(7);
    let lhs = f.eval(x).norm();
    Ok(CheckReport::at_most("wang", 8, lhs, rhs, 1e-12 * rhs.max(1.0), Regime::Structural)
        .with_m(8)
        .with_points(&[a, x]))
}

/// Safety factor on the estimated sup norm of an admissible field.
pub const SUP_SAFETY: f64 = 1.05;
/// Radius of the sphere on which the sup norm is sampled.
pub const SUP_RADIUS: f64 = 0.999;

/// Estimate of `sup_{|x| = SUP_RADIUS} |(p_1(x), ..., p_k(x))|`: random
/// sampling followed by coordinate hill climbing from the best samples.
pub fn estimate_sup<R: Rng + ?Sized>(rng: &mut R, components: &[Polynomial], dim: usize, samples: usize) -> f64 {
    let value = |x: &[f64]| components.iter().map(|p| p.eval(x).powi(2)).sum::<f64>().sqrt();
    let mut best: Vec<(f64, Vec<f64>)> = (0..samples.max(1))
        .map(|_| {
            let x: Vec<f64> = random_unit(rng, dim).into_iter().map(|c| SUP_RADIUS * c).collect();
            (value(&x), x)
        })
        .collect();
    best.sort_by(|a, b| b.0.total_cmp(&a.0));
    best.truncate(8);
    let mut sup = best[0].0;
    for (mut v, mut x) in best {
        let mut step = 0.1;
        while step > 1e-3 {
            let mut improved = false;
            for _ in 0..4 * dim {
                let dir = random_unit(rng, dim);
                let mut y: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
                let r = norm(&y);
                for c in y.iter_mut() {
                    *c *= SUP_RADIUS / r;
                }
                let vy = value(&y);
                if vy > v {
                    (v, x) = (vy, y);
                    improved = true;
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        sup = sup.max(v);
    }
    sup
}

/// Components of an admissible field for the Schwarz bounds: random harmonic
/// quadratics `p`, normalized as `(p - p(a)) / (2 S)` where `S` is
/// [`SUP_SAFETY`] times the estimated sup norm of `(p_1, ..., p_k)`. The
/// result is harmonic, vanishes at `a` and is bounded by one.
pub fn admissible_components<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize, a: &[f64]) -> Vec<Polynomial> {
    let raw: Vec<Polynomial> = (0..count).map(|_| Polynomial::random_harmonic_quadratic(rng, dim)).collect();
    let s = SUP_SAFETY * estimate_sup(rng, &raw, dim, 400);
    raw.iter()
        .map(|p| p.shifted(-p.eval(a)).scaled(1.0 / (2.0 * s)))
        .collect()
}

/// Admissible Clifford field on `B_dim` vanishing at `a`.
pub fn admissible_clifford_field<R: Rng + ?Sized>(rng: &mut R, dim: usize, a: &[f64]) -> Result<CliffordField> {
    let comps = admissible_components(rng, dim, 1 << (dim - 1), a);
    CliffordField::from_polynomials(dim, comps)
}

/// Admissible octonionic field on `B_8` vanishing at `a`.
pub fn admissible_octonion_field<R: Rng + ?Sized>(rng: &mut R, a: &[f64]) -> Result<OctonionField> {
    OctonionField::from_polynomials(admissible_components(rng, 8, 8, a))
}

/// Random Clifford field with dense quadratic components (not harmonic).
pub fn random_quadratic_clifford<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<CliffordField> {
    let comps = (0..1usize << (dim - 1)).map(|_| Polynomial::random_dense(rng, dim, 2)).collect();
    CliffordField::from_polynomials(dim, comps)
}

pub fn random_quadratic_octonion<R: Rng + ?Sized>(rng: &mut R) -> Result<OctonionField> {
    OctonionField::from_polynomials((0..8).map(|_| Polynomial::random_dense(rng, 8, 2)).collect())
}

/// Scalar field for one coefficient of a Clifford field.
pub struct CliffordComponent<'a> {
    pub field: &'a CliffordField,
    pub blade: usize,
}

impl ScalarField for CliffordComponent<'_> {
    fn dim(&self) -> usize {
        self.field.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.field.eval(x).coeffs()[self.blade]
    }
}
