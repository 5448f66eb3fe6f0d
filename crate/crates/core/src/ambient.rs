//! Vectors of Euclidean 4-space carrying the standard complex structure.
//!
//! A point of R^4 is stored as `[x1, y1, x2, y2]` and read as the pair of
//! complex coordinates `(x1 + i y1, x2 + i y2)`. The complex structure `J`
//! acts as multiplication by `i` on each complex coordinate, and the
//! symplectic pairing is `omega(v, w) = <J v, w>`.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A vector (or point) of R^4 identified with C^2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AmbientVector(pub [f64; 4]);

impl AmbientVector {
    pub const ZERO: AmbientVector = AmbientVector([0.0; 4]);

    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        AmbientVector([x1, y1, x2, y2])
    }

    /// Build from the two complex coordinates.
    pub fn from_complex(z1: Complex64, z2: Complex64) -> Self {
        AmbientVector([z1.re, z1.im, z2.re, z2.im])
    }

    pub fn z1(&self) -> Complex64 {
        Complex64::new(self.0[0], self.0[1])
    }

    pub fn z2(&self) -> Complex64 {
        Complex64::new(self.0[2], self.0[3])
    }

    /// Euclidean inner product of R^4.
    pub fn dot(&self, other: &AmbientVector) -> f64 {
        self.0[0] * other.0[0]
            + self.0[1] * other.0[1]
            + self.0[2] * other.0[2]
            + self.0[3] * other.0[3]
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The complex structure: multiplication by `i` on each complex coordinate,
    /// `(x1, y1, x2, y2) -> (-y1, x1, -y2, x2)`.
    pub fn j(&self) -> AmbientVector {
        AmbientVector([-self.0[1], self.0[0], -self.0[3], self.0[2]])
    }

    /// Kaehler two-form `omega(v, w) = <J v, w>`.
    pub fn omega(&self, other: &AmbientVector) -> f64 {
        self.j().dot(other)
    }
}

impl Add for AmbientVector {
    type Output = AmbientVector;
    fn add(self, rhs: AmbientVector) -> AmbientVector {
        AmbientVector([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl AddAssign for AmbientVector {
    fn add_assign(&mut self, rhs: AmbientVector) {
        for k in 0..4 {
            self.0[k] += rhs.0[k];
        }
    }
}

impl Sub for AmbientVector {
    type Output = AmbientVector;
    fn sub(self, rhs: AmbientVector) -> AmbientVector {
        AmbientVector([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

impl Mul<f64> for AmbientVector {
    type Output = AmbientVector;
    fn mul(self, s: f64) -> AmbientVector {
        AmbientVector([self.0[0] * s, self.0[1] * s, self.0[2] * s, self.0[3] * s])
    }
}

impl Neg for AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self * -1.0
    }
}
