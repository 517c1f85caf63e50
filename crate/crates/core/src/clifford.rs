//! Real Clifford algebra with `m` anticommuting generators that all square
//! to `-1`.
//!
//! Elements are stored densely: one coefficient per basis blade, the blade
//! being identified with the bit-set of its generators (bit `i - 1` set means
//! `e_i` is a factor). Within a blade the generators are in increasing
//! order, so `e_{13}` is `e_1 e_3` and its index is `0b101`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Regime};

/// Largest supported generator count (4096 coefficients).
pub const MAX_GENERATORS: usize = 12;

/// Default condition-number ceiling used by [`MultiVector::inverse`].
pub const DEFAULT_CONDITION_LIMIT: f64 = 1e12;

/// Bit-set index of a basis blade.
pub type Blade = u32;

/// Product of two basis blades: `e_A e_B = sign * e_C` with `C = A xor B`.
///
/// The sign collects one factor `-1` for every transposition needed to sort
/// the concatenated generator list and one factor `-1` for every generator
/// common to both blades, since each such pair contracts to `e_i^2 = -1`.
pub fn blade_mul(a: Blade, b: Blade) -> (f64, Blade) {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    swaps += (a & b).count_ones();
    let sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
    (sign, a ^ b)
}

/// Grade (number of generators) of a blade.
#[inline]
pub fn grade(blade: Blade) -> u32 {
    blade.count_ones()
}

/// Sign picked up by a grade-`k` blade under Clifford conjugation,
/// `(-1)^{k(k+1)/2}`.
#[inline]
pub fn conj_sign(blade: Blade) -> f64 {
    let k = grade(blade);
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Element of the Clifford algebra with `m` generators.
#[derive(Clone, PartialEq)]
pub struct MultiVector {
    m: usize,
    coeffs: Vec<f64>,
}

impl MultiVector {
    pub fn zero(m: usize) -> Result<Self> {
        check_generators(m)?;
        Ok(Self {
            m,
            coeffs: vec![0.0; 1 << m],
        })
    }

    pub fn scalar(m: usize, value: f64) -> Result<Self> {
        let mut out = Self::zero(m)?;
        out.coeffs[0] = value;
        Ok(out)
    }

    pub fn one(m: usize) -> Result<Self> {
        Self::scalar(m, 1.0)
    }

    /// Unit basis blade `e_A`.
    pub fn blade(m: usize, blade: Blade) -> Result<Self> {
        let mut out = Self::zero(m)?;
        if (blade as usize) >= out.coeffs.len() {
            return Err(Error::Invalid(format!(
                "blade {blade:#b} references generators beyond e_{m}"
            )));
        }
        out.coeffs[blade as usize] = 1.0;
        Ok(out)
    }

    /// Generator `e_i` for `1 <= i <= m`; `i = 0` gives the unit.
    pub fn generator(m: usize, i: usize) -> Result<Self> {
        if i > m {
            return Err(Error::Invalid(format!("generator e_{i} does not exist for m = {m}")));
        }
        let blade = if i == 0 { 0 } else { 1 << (i - 1) };
        Self::blade(m, blade)
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_generators(m)?;
        if coeffs.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                got: coeffs.len(),
            });
        }
        Ok(Self { m, coeffs })
    }

    /// Embeds `x = (x_0, ..., x_m)` as the paravector `x_0 + sum x_i e_i`.
    pub fn paravector(x: &[f64]) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Invalid("a paravector needs at least one component".into()));
        }
        let m = x.len() - 1;
        let mut out = Self::zero(m)?;
        out.coeffs[0] = x[0];
        for (i, &xi) in x.iter().enumerate().skip(1) {
            out.coeffs[1 << (i - 1)] = xi;
        }
        Ok(out)
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, blade: Blade) -> f64 {
        self.coeffs[blade as usize]
    }

    /// Real (scalar) part.
    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    /// True when every coefficient outside grades 0 and 1 is zero.
    pub fn is_paravector(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(b, &c)| grade(b as Blade) <= 1 || c == 0.0)
    }

    /// Grade 0 and grade 1 parts as a point `(x_0, ..., x_m)`.
    pub fn paravector_part(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.m + 1);
        out.push(self.coeffs[0]);
        out.extend((0..self.m).map(|i| self.coeffs[1 << i]));
        out
    }

    /// Clifford product. Fails when the operands live in different algebras.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_algebra(rhs)?;
        let mut out = vec![0.0; self.coeffs.len()];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let (sign, c) = blade_mul(a as Blade, b as Blade);
                out[c as usize] += sign * ca * cb;
            }
        }
        Ok(Self {
            m: self.m,
            coeffs: out,
        })
    }

    /// Clifford conjugation: the grade-`k` part is scaled by `(-1)^{k(k+1)/2}`.
    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(b, &c)| conj_sign(b as Blade) * c)
            .collect();
        Self { m: self.m, coeffs }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Matrix of left multiplication `y -> self * y` in the blade basis.
    pub fn left_regular_matrix(&self) -> DMatrix<f64> {
        let dim = self.coeffs.len();
        let mut mat = DMatrix::zeros(dim, dim);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for b in 0..dim {
                let (sign, c) = blade_mul(a as Blade, b as Blade);
                mat[(c as usize, b)] += sign * ca;
            }
        }
        mat
    }

    /// Inverse with the default condition limit.
    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_limit(DEFAULT_CONDITION_LIMIT)
    }

    /// Two-sided inverse obtained by solving `L_a y = 1`, where `L_a` is the
    /// left-regular representation. In a finite-dimensional associative
    /// algebra a right inverse is also a left inverse.
    pub fn inverse_with_limit(&self, condition_limit: f64) -> Result<Self> {
        let mat = self.left_regular_matrix();
        let svd = mat.svd(true, true);
        let max = svd.singular_values.max();
        let min = svd.singular_values.min();
        let condition = if min > 0.0 { max / min } else { f64::INFINITY };
        if condition.is_nan() || condition > condition_limit {
            return Err(Error::Singular {
                condition,
                threshold: condition_limit,
            });
        }
        let mut rhs = DVector::zeros(self.coeffs.len());
        rhs[0] = 1.0;
        let sol = svd
            .solve(&rhs, 0.0)
            .map_err(|e| Error::Invalid(format!("inverse solve failed: {e}")))?;
        Ok(Self {
            m: self.m,
            coeffs: sol.iter().copied().collect(),
        })
    }

    fn same_algebra(&self, rhs: &Self) -> Result<()> {
        if self.m != rhs.m {
            return Err(Error::AlgebraMismatch {
                left: self.m,
                right: rhs.m,
            });
        }
        Ok(())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.m, rhs.m, "multivectors from different algebras");
        Self {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn check_generators(m: usize) -> Result<()> {
    if m > MAX_GENERATORS {
        Err(Error::TooManyGenerators(m))
    } else {
        Ok(())
    }
}

impl fmt::Debug for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "MultiVector[m={}](", self.m)?;
        for (b, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if b != 0 {
                write!(f, "e")?;
                for i in 0..self.m {
                    if b & (1 << i) != 0 {
                        write!(f, "{}", i + 1)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl Mul for &MultiVector {
    type Output = MultiVector;

    /// Panics on mismatched algebras; use [`MultiVector::try_mul`] to handle that case.
    fn mul(self, rhs: Self) -> MultiVector {
        self.try_mul(rhs).expect("multivectors from different algebras")
    }
}

impl Add for &MultiVector {
    type Output = MultiVector;
    fn add(self, rhs: Self) -> MultiVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &MultiVector {
    type Output = MultiVector;
    fn sub(self, rhs: Self) -> MultiVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &MultiVector {
    type Output = MultiVector;
    fn neg(self) -> MultiVector {
        self.scale(-1.0)
    }
}

/// A point of `R^{m+1}` viewed as `x_0 + sum x_i e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Paravector(Vec<f64>);

impl Paravector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.len() > MAX_GENERATORS + 1 {
            return Err(Error::Invalid(format!(
                "paravector needs 1..={} components, got {}",
                MAX_GENERATORS + 1,
                components.len()
            )));
        }
        Ok(Self(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    /// `x_0 - sum x_i e_i`.
    pub fn conj(&self) -> Self {
        let mut out = self.0.clone();
        out.iter_mut().skip(1).for_each(|c| *c = -*c);
        Self(out)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `conj(x) / |x|^2`.
    pub fn inverse(&self) -> Result<Self> {
        let n2: f64 = self.0.iter().map(|c| c * c).sum();
        if n2 == 0.0 {
            return Err(Error::Singular {
                condition: f64::INFINITY,
                threshold: DEFAULT_CONDITION_LIMIT,
            });
        }
        Ok(Self(self.conj().0.into_iter().map(|c| c / n2).collect()))
    }

    pub fn to_multivector(&self) -> MultiVector {
        MultiVector::paravector(&self.0).expect("component count checked at construction")
    }
}

/// `|a x| = |x a| = |a| |x|` for a multivector `a` and a paravector `x`,
/// relative tolerance `1e-12`. Returns the left and right product reports.
pub fn paravector_norm_check(a: &MultiVector, x: &[f64]) -> Result<[CheckReport; 2]> {
    let xv = MultiVector::paravector(x)?;
    let ax = a.try_mul(&xv)?;
    let xa = xv.try_mul(a)?;
    let rhs = a.norm() * xv.norm();
    let tol = 1e-12 * rhs.max(f64::MIN_POSITIVE);
    let m = a.generators();
    let report = |name: &str, lhs: f64| {
        let mut r = CheckReport::equal(name, m, lhs, rhs, tol, Regime::Structural).with_m(m);
        r.point = vec![a.coeffs().to_vec(), x.to_vec()];
        r
    };
    Ok([report("clifford.norm_left", ax.norm()), report("clifford.norm_right", xa.norm())])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sign of `e_A e_B` by writing out the generator word and bubble sorting
    /// it, contracting equal neighbours to `-1`.
    fn brute_force_blade_mul(a: Blade, b: Blade) -> (f64, Blade) {
        let mut word: Vec<u32> = (0..32).filter(|i| a & (1 << i) != 0).collect();
        word.extend((0..32).filter(|i| b & (1 << i) != 0));
        let mut sign = 1.0;
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < word.len() {
                if word[i] > word[i + 1] {
                    word.swap(i, i + 1);
                    sign = -sign;
                    changed = true;
                } else if word[i] == word[i + 1] {
                    word.drain(i..i + 2);
                    sign = -sign;
                    changed = true;
                    continue;
                }
                i += 1;
            }
            if !changed {
                break;
            }
        }
        let blade = word.iter().fold(0, |acc, g| acc | (1 << g));
        (sign, blade)
    }

    #[test]
    fn generators_square_to_minus_one() {
        assert_eq!(blade_mul(0b1, 0b1), (-1.0, 0));
    }

    #[test]
    fn generators_anticommute() {
        assert_eq!(blade_mul(0b01, 0b10), (1.0, 0b11));
        assert_eq!(blade_mul(0b10, 0b01), (-1.0, 0b11));
    }

    #[test]
    fn e12_times_e23_is_minus_e13() {
        // e1 e2 e2 e3 = e1 (-1) e3
        let expected = brute_force_blade_mul(0b011, 0b110);
        assert_eq!(expected, (-1.0, 0b101));
        assert_eq!(blade_mul(0b011, 0b110), expected);
    }

    #[test]
    fn blade_mul_matches_brute_force_for_m_up_to_6() {
        for a in 0..64u32 {
            for b in 0..64u32 {
                assert_eq!(blade_mul(a, b), brute_force_blade_mul(a, b), "a={a:b} b={b:b}");
            }
        }
    }

    #[test]
    fn anticommutation_relations_exhaustive() {
        for m in 1..=6 {
            for i in 1..=m {
                for j in 1..=m {
                    let ei = MultiVector::generator(m, i).unwrap();
                    let ej = MultiVector::generator(m, j).unwrap();
                    let sum = &(&ei * &ej) + &(&ej * &ei);
                    let expected = if i == j { -2.0 } else { 0.0 };
                    assert_eq!(sum.re(), expected);
                    assert!(sum.coeffs()[1..].iter().all(|&c| c == 0.0));
                }
            }
        }
    }

    #[test]
    fn product_of_sum_and_difference() {
        // (e1 + e2)(e1 - e2) = e1e1 - e1e2 + e2e1 - e2e2 = -1 - 2 e12 + 1 = -2 e12
        let m = 2;
        let e1 = MultiVector::generator(m, 1).unwrap();
        let e2 = MultiVector::generator(m, 2).unwrap();
        let p = &(&e1 + &e2) * &(&e1 - &e2);
        let mut oracle = [0.0; 4];
        for (ca, a) in [(1.0, 0b01), (1.0, 0b10)] {
            for (cb, b) in [(1.0, 0b01), (-1.0, 0b10)] {
                let (s, c) = brute_force_blade_mul(a, b);
                oracle[c as usize] += s * ca * cb;
            }
        }
        assert_eq!(p.coeffs(), &oracle[..]);
        assert_eq!(p.coeffs(), &[0.0, 0.0, 0.0, -2.0]);
    }

    #[test]
    fn unit_is_neutral() {
        let b = MultiVector::from_coeffs(2, vec![1.0, -2.0, 3.5, 0.25]).unwrap();
        let one = MultiVector::one(2).unwrap();
        assert_eq!(&one * &b, b);
        assert_eq!(&b * &one, b);
    }

    #[test]
    fn conjugation_examples() {
        let one = MultiVector::one(3).unwrap();
        assert_eq!(one.conj(), one);
        let x = MultiVector::paravector(&[0.3, -1.2]).unwrap();
        assert_eq!(x.conj().coeffs(), &[0.3, 1.2]);
        let e12 = MultiVector::blade(2, 0b11).unwrap();
        assert_eq!(e12.conj(), e12.scale(-1.0));
        let e1 = MultiVector::generator(2, 1).unwrap();
        let e2 = MultiVector::generator(2, 2).unwrap();
        assert_eq!(&e2.conj() * &e1.conj(), e12.conj());
    }

    #[test]
    fn norm_of_sum_of_generators() {
        let v = &MultiVector::generator(4, 1).unwrap() + &MultiVector::generator(4, 2).unwrap();
        assert!((v.norm() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn norm_is_not_multiplicative_in_general() {
        // (1 + e123) squares to 1 + 2e123 + e123^2 = 2 + 2e123 for m = 3,
        // so |a a| = 2 sqrt 2 while |a|^2 = 2.
        let a = MultiVector::from_coeffs(3, {
            let mut c = vec![0.0; 8];
            c[0] = 1.0;
            c[0b111] = 1.0;
            c
        })
        .unwrap();
        let aa = &a * &a;
        assert!((aa.norm() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((aa.norm() - a.norm() * a.norm()).abs() > 0.5);
    }

    #[test]
    fn inverse_of_unit_and_paravector() {
        let one = MultiVector::one(3).unwrap();
        let inv = one.inverse().unwrap();
        assert!((&inv - &one).norm() < 1e-15);

        let x = Paravector::new(vec![0.4, -0.2, 0.7, 0.1]).unwrap();
        let closed = x.inverse().unwrap().to_multivector();
        let solved = x.to_multivector().inverse().unwrap();
        assert!((&closed - &solved).norm() < 1e-14);
    }

    #[test]
    fn singular_element_is_rejected() {
        // (1 + e123)(1 - e123) = 1 - e123^2 = 0 for m = 3 (e123^2 = +1),
        // so 1 + e123 is a zero divisor.
        let mut c = vec![0.0; 8];
        c[0] = 1.0;
        c[0b111] = 1.0;
        let a = MultiVector::from_coeffs(3, c).unwrap();
        assert!(matches!(a.inverse(), Err(Error::Singular { .. })));
    }

    #[test]
    fn mismatched_algebras_error() {
        let a = MultiVector::one(2).unwrap();
        let b = MultiVector::one(3).unwrap();
        assert!(matches!(a.try_mul(&b), Err(Error::AlgebraMismatch { left: 2, right: 3 })));
    }

    #[test]
    fn too_many_generators() {
        assert!(matches!(MultiVector::zero(13), Err(Error::TooManyGenerators(13))));
        assert!(MultiVector::zero(12).is_ok());
    }

    #[test]
    fn paravector_times_conjugate_is_scalar() {
        let x = MultiVector::paravector(&[0.5, -0.25, 0.75, 1.5]).unwrap();
        let p = &x * &x.conj();
        assert!((p.re() - x.norm_sqr()).abs() < 1e-15);
        assert!(p.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
    }
}
