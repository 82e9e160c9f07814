use serde::{Deserialize, Serialize};
use std::ops::Mul;

use super::matrix::{GroupTag, Mat4, MatrixElement};

/// Point of the 6-dimensional unipotent group of 4×4 upper unitriangular
/// matrices. Slots: (1,2)=x1, (2,3)=x2, (1,3)=x3, (3,4)=x4, (2,4)=x5, (1,4)=x6.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NilPoint6 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub x5: f64,
    pub x6: f64,
}

impl NilPoint6 {
    pub const IDENTITY: Self = Self {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
        x4: 0.0,
        x5: 0.0,
        x6: 0.0,
    };

    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64, x5: f64, x6: f64) -> Self {
        Self {
            x1,
            x2,
            x3,
            x4,
            x5,
            x6,
        }
    }

    /// Coordinates in the order (x1, ..., x6).
    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.x1, self.x2, self.x3, self.x4, self.x5, self.x6]
    }

    pub fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::identity();
        m[(0, 1)] = self.x1;
        m[(1, 2)] = self.x2;
        m[(0, 2)] = self.x3;
        m[(2, 3)] = self.x4;
        m[(1, 3)] = self.x5;
        m[(0, 3)] = self.x6;
        m
    }

    /// Reads the six slots; entries below the diagonal are ignored.
    pub fn from_matrix(m: &Mat4) -> Self {
        Self::new(
            m[(0, 1)],
            m[(1, 2)],
            m[(0, 2)],
            m[(2, 3)],
            m[(1, 3)],
            m[(0, 3)],
        )
    }

    pub fn embed(&self) -> MatrixElement {
        MatrixElement::new(self.to_matrix(), GroupTag::UpperUnipotent)
            .expect("unitriangular by construction")
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn nil_mul(p: &NilPoint6, q: &NilPoint6) -> NilPoint6 {
    NilPoint6 {
        x1: p.x1 + q.x1,
        x2: p.x2 + q.x2,
        x3: p.x3 + q.x3 + p.x1 * q.x2,
        x4: p.x4 + q.x4,
        x5: p.x5 + q.x5 + p.x2 * q.x4,
        x6: p.x6 + q.x6 + p.x1 * q.x5 + p.x3 * q.x4,
    }
}

pub fn nil_inv(p: &NilPoint6) -> NilPoint6 {
    NilPoint6 {
        x1: -p.x1,
        x2: -p.x2,
        x3: -p.x3 + p.x1 * p.x2,
        x4: -p.x4,
        x5: -p.x5 + p.x2 * p.x4,
        x6: -p.x6 + p.x1 * p.x5 + p.x3 * p.x4 - p.x1 * p.x2 * p.x4,
    }
}

impl Mul for NilPoint6 {
    type Output = NilPoint6;
    fn mul(self, rhs: NilPoint6) -> NilPoint6 {
        nil_mul(&self, &rhs)
    }
}

/// The reference expansion of `Y⁻¹X′` for `Y = y`, `X′ = x_prime`, term for
/// term. It agrees with `nil_mul(nil_inv(y), x_prime)` in slots 1, 2, 3
/// and 6 only: slot 4 reads `x4 + y4` and slot 5 carries the `x2` terms with
/// the opposite sign.
pub fn nil_quotient_reference(y: &NilPoint6, x_prime: &NilPoint6) -> NilPoint6 {
    let (x, p) = (y, x_prime);
    NilPoint6 {
        x1: p.x1 - x.x1,
        x2: p.x2 - x.x2,
        x3: p.x3 - x.x3 - x.x1 * p.x2 + x.x1 * x.x2,
        x4: x.x4 + p.x4,
        x5: p.x5 - x.x5 + x.x2 * p.x4 - x.x2 * x.x4,
        x6: p.x6 - x.x6 + x.x1 * x.x5 - x.x1 * p.x5 - x.x1 * x.x2 * x.x4 + x.x3 * x.x4
            - x.x3 * p.x4
            + x.x1 * x.x2 * p.x4,
    }
}
