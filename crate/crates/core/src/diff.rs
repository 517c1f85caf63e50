//! Central finite differences.

/// Default step for first derivatives.
pub const GRAD_STEP: f64 = 1e-5;
/// Default step for the second-order Laplacian stencil.
pub const LAPLACIAN_STEP: f64 = 1e-3;

/// Central-difference gradient of a scalar function.
pub fn gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Jacobian of `F: R^n -> R^m`, returned row-major as
/// `m` rows of length `n`.
pub fn jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut probe = x.to_vec();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        cols.push(
            up.iter()
                .zip(&down)
                .map(|(u, d)| (u - d) / (2.0 * h))
                .collect::<Vec<_>>(),
        );
    }
    let m = cols.first().map_or(0, Vec::len);
    (0..m).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

/// Second-order central-difference Laplacian.
pub fn laplacian(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    second_derivatives(&f, x, h).iter().sum()
}

/// Unmixed second derivatives `d^2 f / dx_i^2`.
pub fn second_derivatives(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let center = f(x);
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            probe[i] = x[i] + h;
            let up = f(&probe);
            probe[i] = x[i] - h;
            let down = f(&probe);
            probe[i] = x[i];
            (up - 2.0 * center + down) / (h * h)
        })
        .collect()
}

/// Laplacian with one Richardson step: `(4 L(h/2) - L(h)) / 3`.
pub fn laplacian_richardson(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let coarse = laplacian(&f, x, h);
    let fine = laplacian(&f, x, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

/// Componentwise Laplacian of a vector-valued function.
pub fn vector_laplacian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: f64) -> Vec<f64> {
    let center = f(x);
    let mut out = vec![0.0; center.len()];
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        for (k, o) in out.iter_mut().enumerate() {
            *o += (up[k] - 2.0 * center[k] + down[k]) / (h * h);
        }
    }
    out
}
