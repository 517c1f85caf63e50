//! Random test families. Every generator takes the RNG explicitly so sweeps
//! stay reproducible under seed splitting.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::clifford::MultiVector;
use crate::harmonic::{AtomicHarmonic, BoundaryData};
use crate::octonion::Octonion;
use crate::point::{dot, norm};

/// Uniform point on `S^{n-1}`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        let r = norm(&v);
        if r > 1e-12 {
            return v.into_iter().map(|c| c / r).collect();
        }
    }
}

/// Uniform direction with radius uniform in `[0, rmax)`.
pub fn random_interior<R: Rng + ?Sized>(rng: &mut R, n: usize, rmax: f64) -> Vec<f64> {
    let r = rng.random_range(0.0..rmax);
    random_unit(rng, n).into_iter().map(|c| r * c).collect()
}

/// One to five atoms, weights log-uniform in `[0.1, 10]`, sites uniform.
pub fn random_atomic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AtomicHarmonic {
    let count = rng.random_range(1..=5);
    let atoms = (0..count)
        .map(|_| {
            let w = 10f64.powf(rng.random_range(-1.0..=1.0));
            (w, random_unit(rng, n))
        })
        .collect();
    AtomicHarmonic::new(n, atoms).expect("random atoms are valid")
}

/// Coefficients uniform in `[-1, 1]`.
pub fn random_multivector<R: Rng + ?Sized>(rng: &mut R, m: usize) -> MultiVector {
    let coeffs = (0..1usize << m).map(|_| rng.random_range(-1.0..1.0)).collect();
    MultiVector::from_coeffs(m, coeffs).expect("generator count within range")
}

pub fn random_octonion<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    let mut c = [0.0; 8];
    for v in c.iter_mut() {
        *v = rng.random_range(-1.0..1.0);
    }
    Octonion(c)
}

/// Random boundary data `S^{n-1} -> closed unit ball of R^m` drawn from
/// three families:
///
/// - ridges: `g_r = tanh(beta_r (u_r . xi - t_r)) / sqrt(m)`, steepness up to 30;
/// - caps: `v` on the cap `u . xi > t`, `w` elsewhere (`|v|, |w| <= 1`);
/// - waves: `g_r = sin(k_r . xi + c_r) / sqrt(m)`.
pub fn random_bounded_data<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> BoundaryData {
    let scale = 1.0 / (m as f64).sqrt();
    match rng.random_range(0..3) {
        0 => {
            let ridges: Vec<(Vec<f64>, f64, f64)> = (0..m)
                .map(|_| {
                    let u = random_unit(rng, n);
                    let beta = 10f64.powf(rng.random_range(-0.5..1.5));
                    let t = rng.random_range(-0.5..0.5);
                    (u, beta, t)
                })
                .collect();
            BoundaryData::new(n, m, true, "ridge", move |xi: &[f64]| {
                ridges
                    .iter()
                    .map(|(u, beta, t)| scale * (beta * (dot(u, xi) - t)).tanh())
                    .collect()
            })
        }
        1 => {
            let u = random_unit(rng, n);
            let t = rng.random_range(-0.6..0.6);
            let v = random_ball_vector(rng, m);
            let w = random_ball_vector(rng, m);
            BoundaryData::new(n, m, true, "cap", move |xi: &[f64]| {
                if dot(&u, xi) > t {
                    v.clone()
                } else {
                    w.clone()
                }
            })
        }
        _ => {
            let waves: Vec<(Vec<f64>, f64)> = (0..m)
                .map(|_| {
                    let k: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
                    (k, rng.random_range(0.0..2.0 * PI))
                })
                .collect();
            BoundaryData::new(n, m, true, "wave", move |xi: &[f64]| {
                waves.iter().map(|(k, c)| scale * (dot(k, xi) + c).sin()).collect()
            })
        }
    }
}

/// Hemisphere data for a random direction `u`, embedded along a random unit
/// vector `v` of `R^m`: `g(xi) = sign(u . xi) v`.
pub fn random_hemisphere_data<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> BoundaryData {
    let u = random_unit(rng, n);
    let v = random_unit(rng, m);
    BoundaryData::new(n, m, true, "hemisphere_rotated", move |xi: &[f64]| {
        let s = dot(&u, xi).signum();
        v.iter().map(|c| s * c).collect()
    })
}

/// Point of the closed unit ball in `R^m`, radius uniform in `[0, 1]`.
fn random_ball_vector<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    let r = rng.random_range(0.0..=1.0);
    random_unit(rng, m).into_iter().map(|c| r * c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::SphereQuadrature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_and_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=8 {
            assert!((norm(&random_unit(&mut rng, n)) - 1.0).abs() < 1e-14);
            assert!(norm(&random_interior(&mut rng, n, 0.5)) < 0.5);
        }
    }

    #[test]
    fn atomic_family_ranges() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let f = random_atomic(&mut rng, 3);
            assert!((1..=5).contains(&f.len()));
            assert!(f.atoms().all(|(w, _)| (0.1..=10.0).contains(&w)));
        }
    }

    #[test]
    fn bounded_data_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = SphereQuadrature::product_gauss(10).unwrap();
        for _ in 0..60 {
            let g = random_bounded_data(&mut rng, 3, 3);
            for (xi, _) in q.iter() {
                assert!(norm(&g.eval(xi)) <= 1.0 + 1e-12, "{}", g.label());
            }
        }
    }
}
