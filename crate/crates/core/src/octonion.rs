//! Octonions as Cayley–Dickson pairs of quaternions.
//!
//! Basis `e0 = 1, e1, e2, e3` spans the first quaternion slot (`1, i, j, k`)
//! and `e4..e7` the second, i.e. `e_{4+k} = (0, q_k)`. The product is
//! `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Octonion(pub [f64; 8]);

#[derive(Clone, Copy)]
struct Quat([f64; 4]);

impl Quat {
    fn mul(self, r: Quat) -> Quat {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = r.0;
        Quat([
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ])
    }

    fn conj(self) -> Quat {
        let [a0, a1, a2, a3] = self.0;
        Quat([a0, -a1, -a2, -a3])
    }

    fn sub(self, r: Quat) -> Quat {
        Quat(std::array::from_fn(|i| self.0[i] - r.0[i]))
    }

    fn add(self, r: Quat) -> Quat {
        Quat(std::array::from_fn(|i| self.0[i] + r.0[i]))
    }
}

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn basis(i: usize) -> Octonion {
        assert!(i < 8, "octonion basis index {i} out of range");
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    pub fn scalar(s: f64) -> Octonion {
        Octonion::ONE.scale(s)
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn conj(&self) -> Octonion {
        let mut c = self.0;
        c.iter_mut().skip(1).for_each(|x| *x = -*x);
        Octonion(c)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn scale(&self, s: f64) -> Octonion {
        Octonion(self.0.map(|c| c * s))
    }

    fn halves(&self) -> (Quat, Quat) {
        let c = self.0;
        (Quat([c[0], c[1], c[2], c[3]]), Quat([c[4], c[5], c[6], c[7]]))
    }

    fn from_halves(a: Quat, b: Quat) -> Octonion {
        Octonion([a.0[0], a.0[1], a.0[2], a.0[3], b.0[0], b.0[1], b.0[2], b.0[3]])
    }

    pub fn mul(&self, rhs: &Octonion) -> Octonion {
        let (a, b) = self.halves();
        let (c, d) = rhs.halves();
        Octonion::from_halves(a.mul(c).sub(d.conj().mul(b)), d.mul(a).add(b.mul(c.conj())))
    }

    /// `(ab)c - a(bc)`.
    pub fn associator(a: &Octonion, b: &Octonion, c: &Octonion) -> Octonion {
        (*a * *b) * *c - *a * (*b * *c)
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        Octonion::mul(&self, &rhs)
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(-1.0)
    }
}
