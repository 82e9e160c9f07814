use serde::{Deserialize, Serialize};

use super::matrix::{GroupTag, Mat4, MatrixElement};
use super::GroupError;

/// Point `(z, y, x)` of the 3-dimensional nilpotent symplectic group with law
/// `(z,y,x)(c,b,a) = (z + c + xb − ay, y + b, x + a)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeisPoint3 {
    pub z: f64,
    pub y: f64,
    pub x: f64,
}

impl HeisPoint3 {
    pub const IDENTITY: Self = Self {
        z: 0.0,
        y: 0.0,
        x: 0.0,
    };

    pub fn new(z: f64, y: f64, x: f64) -> Self {
        Self { z, y, x }
    }

    /// Matrix realization: (1,2)←x, (1,3)←z, (1,4)=(2,3)←y, (4,3)←−x.
    pub fn to_matrix(&self) -> Mat4 {
        let mut m = Mat4::identity();
        m[(0, 1)] = self.x;
        m[(0, 2)] = self.z;
        m[(0, 3)] = self.y;
        m[(1, 2)] = self.y;
        m[(3, 2)] = -self.x;
        m
    }

    pub fn from_matrix(m: &Mat4) -> Self {
        Self::new(m[(0, 2)], m[(0, 3)], m[(0, 1)])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.z - other.z)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.x - other.x).abs())
    }
}

pub fn heis_mul(p: &HeisPoint3, q: &HeisPoint3) -> HeisPoint3 {
    HeisPoint3 {
        z: p.z + q.z + p.x * q.y - q.x * p.y,
        y: p.y + q.y,
        x: p.x + q.x,
    }
}

pub fn heis_inv(p: &HeisPoint3) -> HeisPoint3 {
    HeisPoint3::new(-p.z, -p.y, -p.x)
}

/// Point `(x, y, z, t)` of the 4-dimensional nilpotent symplectic group.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpNPoint4 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl SpNPoint4 {
    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        Self { x, y, z, t }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x, self.y, self.z, self.t]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    /// The matrix `[[1,x,y,z],[0,1,z−xt,t],[0,0,1,0],[0,0,−x,1]]`.
    pub fn to_matrix(&self) -> Mat4 {
        let Self { x, y, z, t } = *self;
        Mat4::new(
            1.0,
            x,
            y,
            z,
            0.0,
            1.0,
            z - x * t,
            t,
            0.0,
            0.0,
            1.0,
            0.0,
            0.0,
            0.0,
            -x,
            1.0,
        )
    }

    /// Reads `(x, y, z, t)` back from a matrix of the same pattern.
    pub fn from_matrix(m: &Mat4) -> Self {
        Self::new(m[(0, 1)], m[(0, 2)], m[(0, 3)], m[(1, 3)])
    }
}

/// Embeds into SP(4,ℝ); the symplectic check guards against transcription errors.
pub fn spn_embed(p: &SpNPoint4) -> Result<MatrixElement, GroupError> {
    MatrixElement::new(p.to_matrix(), GroupTag::Sp4)
}

/// Group law of the 4-dimensional group in `(x, y, z, t)` coordinates, read
/// off the matrix product.
pub fn spn_mul(p: &SpNPoint4, q: &SpNPoint4) -> SpNPoint4 {
    SpNPoint4::from_matrix(&(p.to_matrix() * q.to_matrix()))
}

/// Whether `m` equals the embedding of its own `(x, y, z, t)` slots.
pub fn has_spn_pattern(m: &Mat4, tol: f64) -> bool {
    (SpNPoint4::from_matrix(m).to_matrix() - m).amax() <= tol
}
