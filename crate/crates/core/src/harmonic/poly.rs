//! Sparse real polynomials in `n` variables with exact derivatives.

use rand::Rng;

use super::ScalarField;

/// Sum of `coeff * x^exponents` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: Vec<(f64, Vec<u32>)>,
    /// Nonzero exponents of each term as `(variable, power)`, for evaluation.
    factors: Vec<Vec<(usize, i32)>>,
}

impl Polynomial {
    pub fn new(n: usize, terms: Vec<(f64, Vec<u32>)>) -> Self {
        assert!(terms.iter().all(|(_, e)| e.len() == n), "exponent vectors must have length n");
        let factors = terms
            .iter()
            .map(|(_, e)| e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k as i32)).collect())
            .collect();
        Self { n, terms, factors }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, Vec::new())
    }

    /// `|x|^2`.
    pub fn norm_sqr(n: usize) -> Self {
        let terms = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 2;
                (1.0, e)
            })
            .collect();
        Self::new(n, terms)
    }

    /// Coordinate function `x_i`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::new(n, vec![(1.0, e)])
    }

    pub fn terms(&self) -> &[(f64, Vec<u32>)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }

    /// Every monomial of total degree at most `degree` with a uniform
    /// coefficient in `[-1, 1]`.
    pub fn random_dense<R: Rng + ?Sized>(rng: &mut R, n: usize, degree: u32) -> Self {
        let mut terms = Vec::new();
        let mut e = vec![0u32; n];
        monomials(&mut e, 0, degree, &mut |exp| {
            terms.push((rng.random_range(-1.0..1.0), exp.to_vec()));
        });
        Self::new(n, terms)
    }

    pub fn random_quartic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        Self::random_dense(rng, n, 4)
    }

    /// `c + b.x + x^T Q x` with `Q` symmetric and trace free, so the
    /// polynomial is harmonic.
    pub fn random_harmonic_quadratic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        let mut terms = Vec::new();
        terms.push((rng.random_range(-1.0..1.0), vec![0; n]));
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            terms.push((rng.random_range(-1.0..1.0), e));
        }
        let mut diag: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean = diag.iter().sum::<f64>() / n as f64;
        for d in diag.iter_mut() {
            *d -= mean;
        }
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 2;
            terms.push((diag[i], e));
            for j in i + 1..n {
                let mut e = vec![0; n];
                e[i] = 1;
                e[j] = 1;
                terms.push((rng.random_range(-1.0..1.0), e));
            }
        }
        Self::new(n, terms)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.n, self.terms.iter().map(|(c, e)| (c * s, e.clone())).collect())
    }

    /// Adds `c` to the constant term.
    pub fn shifted(&self, c: f64) -> Self {
        let mut terms = self.terms.clone();
        terms.push((c, vec![0; self.n]));
        Self::new(self.n, terms)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .zip(&self.factors)
            .map(|((c, _), f)| f.iter().fold(*c, |acc, &(i, k)| acc * x[i].powi(k)))
            .sum()
    }

    pub fn partial(&self, x: &[f64], i: usize) -> f64 {
        let mut s = 0.0;
        for (c, e) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            s += c * e[i] as f64 * monomial(x, &d);
        }
        s
    }

    pub fn second_partial(&self, x: &[f64], i: usize) -> f64 {
        let mut s = 0.0;
        for (c, e) in &self.terms {
            if e[i] < 2 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 2;
            s += c * (e[i] * (e[i] - 1)) as f64 * monomial(x, &d);
        }
        s
    }

    pub fn exact_laplacian(&self, x: &[f64]) -> f64 {
        (0..self.n).map(|i| self.second_partial(x, i)).sum()
    }
}

fn monomial(x: &[f64], e: &[u32]) -> f64 {
    x.iter().zip(e).map(|(xi, &k)| xi.powi(k as i32)).product()
}

fn monomials(e: &mut Vec<u32>, i: usize, left: u32, out: &mut impl FnMut(&[u32])) {
    if i == e.len() {
        out(e);
        return;
    }
    for k in 0..=left {
        e[i] = k;
        monomials(e, i + 1, left - k, out);
    }
    e[i] = 0;
}

impl ScalarField for Polynomial {
    fn dim(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.partial(x, i)).collect()
    }

    fn laplacian(&self, x: &[f64]) -> f64 {
        self.exact_laplacian(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dense_term_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // C(n + d, d)
        assert_eq!(Polynomial::random_dense(&mut rng, 3, 4).terms().len(), 35);
        assert_eq!(Polynomial::random_dense(&mut rng, 2, 2).terms().len(), 6);
    }

    #[test]
    fn norm_sqr_laplacian() {
        let p = Polynomial::norm_sqr(5);
        assert_eq!(p.exact_laplacian(&[0.1, 0.2, 0.3, 0.4, 0.5]), 10.0);
    }

    #[test]
    fn derivatives_match_fd() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = Polynomial::random_quartic(&mut rng, 3);
        let x = [0.3, -0.2, 0.5];
        let fd = diff::gradient(|y| p.eval(y), &x, 1e-5);
        for (a, b) in p.gradient(&x).iter().zip(&fd) {
            assert!((a - b).abs() < 1e-8);
        }
        let lap = diff::laplacian_richardson(|y| p.eval(y), &x, 1e-3);
        assert!((lap - p.exact_laplacian(&x)).abs() < 1e-6);
    }

    #[test]
    fn harmonic_quadratic_is_harmonic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=8 {
            let p = Polynomial::random_harmonic_quadratic(&mut rng, n);
            assert!(p.exact_laplacian(&vec![0.1; n]).abs() < 1e-14);
        }
    }
}
