use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense `m x n` matrix of partial derivatives, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl JacobianMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut j = Self::zeros(n, n);
        for i in 0..n {
            j.set(i, i, 1.0);
        }
        j
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `J v` for `v` of length `cols`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `J^T l` for `l` of length `rows`.
    pub fn apply_transpose(&self, l: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (r, &lr) in l.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o += a * lr;
            }
        }
        out
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// Largest singular value. For a single row this is the row's Euclidean norm.
pub fn operator_norm(j: &JacobianMatrix) -> f64 {
    if j.rows == 0 || j.cols == 0 {
        return 0.0;
    }
    if j.rows == 1 {
        return crate::point::norm(j.row(0));
    }
    j.to_dmatrix()
        .singular_values()
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Power iteration on `J^T J`.
    fn power_iteration_norm(j: &JacobianMatrix) -> f64 {
        let mut v = vec![1.0; j.cols()];
        let mut lambda = 0.0;
        for _ in 0..10_000 {
            let w = j.apply_transpose(&j.apply(&v));
            let nw = crate::point::norm(&w);
            if nw == 0.0 {
                return 0.0;
            }
            let next = nw / crate::point::norm(&v);
            v = w.iter().map(|c| c / nw).collect();
            if (next - lambda).abs() <= 1e-15 * next {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda.sqrt()
    }

    #[test]
    fn identity_has_unit_norm() {
        assert!((operator_norm(&JacobianMatrix::identity(2)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_norm_is_largest_entry() {
        let j = JacobianMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        assert!((operator_norm(&j) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn random_3x5_matches_power_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let data: Vec<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
            let j = JacobianMatrix::from_row_major(3, 5, data).unwrap();
            let oracle = power_iteration_norm(&j);
            assert!((operator_norm(&j) - oracle).abs() < 1e-10, "{} vs {oracle}", operator_norm(&j));
        }
    }

    #[test]
    fn single_row_is_euclidean_norm() {
        let j = JacobianMatrix::from_rows(&[vec![3.0, -4.0, 12.0]]).unwrap();
        assert!((operator_norm(&j) - 13.0).abs() < 1e-12);
        let via_svd = j.to_dmatrix().singular_values()[0];
        assert!((via_svd - 13.0).abs() < 1e-12);
    }

    #[test]
    fn norm_dominates_every_unit_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
        let j = JacobianMatrix::from_row_major(4, 3, data).unwrap();
        let norm = operator_norm(&j);
        for _ in 0..200 {
            let v: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let nv = crate::point::norm(&v);
            let jv = crate::point::norm(&j.apply(&v)) / nv;
            assert!(jv <= norm * (1.0 + 1e-12));
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(JacobianMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
