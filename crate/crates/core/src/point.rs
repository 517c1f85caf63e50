use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `| |xi| - 1 |` for a point to count as on the unit sphere.
pub const SPHERE_TOL: f64 = 1e-12;

/// Points with `1 - |x|` below this are rejected by metric computations.
pub const BOUNDARY_GAP: f64 = 1e-9;

/// A point of `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn origin(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// `k`-th standard basis vector (0-based) of `R^n`.
    pub fn axis(n: usize, k: usize) -> Self {
        let mut c = vec![0.0; n];
        c[k] = 1.0;
        Self(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_interior(&self) -> bool {
        self.norm() < 1.0
    }

    pub fn is_boundary(&self) -> bool {
        (self.norm() - 1.0).abs() <= SPHERE_TOL
    }

    /// Projects a nonzero vector onto the unit sphere.
    pub fn normalized(&self) -> Result<Self> {
        let r = self.norm();
        if r == 0.0 || !r.is_finite() {
            return Err(Error::Invalid("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Self(self.0.iter().map(|c| c / r).collect()))
    }
}

impl Deref for Point {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl From<&[f64]> for Point {
    fn from(v: &[f64]) -> Self {
        Self(v.to_vec())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sqr(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sqr(a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `DimensionMismatch` unless `expected == got`.
pub fn same_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

/// Fails unless `|x| < 1`.
pub fn require_interior(x: &[f64]) -> Result<()> {
    let r = norm(x);
    if r < 1.0 {
        Ok(())
    } else {
        Err(Error::NotInBall { norm: r })
    }
}

/// Fails unless `1 - |x| >= BOUNDARY_GAP`; points outside the open ball
/// give `NotInBall`.
pub fn require_away_from_boundary(x: &[f64]) -> Result<()> {
    require_interior(x)?;
    let gap = 1.0 - norm(x);
    if gap >= BOUNDARY_GAP {
        Ok(())
    } else {
        Err(Error::NearBoundary {
            gap,
            min_gap: BOUNDARY_GAP,
        })
    }
}

/// Fails unless `| |xi| - 1 | <= SPHERE_TOL`.
pub fn require_boundary(xi: &[f64]) -> Result<()> {
    let r = norm(xi);
    if (r - 1.0).abs() <= SPHERE_TOL {
        Ok(())
    } else {
        Err(Error::NotOnSphere { norm: r })
    }
}
