use std::ops::Mul;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::groups::{orthogonality_defect, Mat4};
use crate::quadrature::EulerAngles;

use super::PeterWeylError;

/// Residual tolerated when recovering SU(2) factors from a 4×4 matrix.
pub const RECOVERY_TOL: f64 = 1e-9;

/// An element `[[a, −b̄], [b, ā]]` of SU(2), stored by its first column.
///
/// The same shape with `|a|² + |b|² ≠ 1` is a scaled quaternion; the
/// arithmetic below does not renormalize, which lets it double as the
/// quaternion model of ℝ⁴ used for SO(4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2 {
    pub a: Complex64,
    pub b: Complex64,
}

impl Su2 {
    pub const IDENTITY: Su2 = Su2 {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
    };

    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    /// ZYZ Euler angles, matching the spin-½ Wigner matrix:
    /// `a = e^{−i(α+γ)/2} cos(β/2)`, `b = e^{i(α−γ)/2} sin(β/2)`.
    pub fn from_euler(e: &EulerAngles) -> Self {
        let (s, c) = (0.5 * e.beta).sin_cos();
        Self {
            a: Complex64::from_polar(c, -0.5 * (e.alpha + e.gamma)),
            b: Complex64::from_polar(s, 0.5 * (e.alpha - e.gamma)),
        }
    }

    /// Euler angles with `β ∈ [0, π]`; at the poles the split of `α ± γ` is
    /// conventional but the element is reproduced exactly.
    pub fn to_euler(&self) -> EulerAngles {
        let beta = 2.0 * self.b.norm().atan2(self.a.norm());
        let sum_half = -self.a.arg();
        let diff_half = self.b.arg();
        EulerAngles::new(sum_half + diff_half, beta, sum_half - diff_half)
    }

    /// From real coordinates `(Re a, Im a, Re b, Im b)`.
    pub fn from_coords(x: [f64; 4]) -> Self {
        Self {
            a: Complex64::new(x[0], x[1]),
            b: Complex64::new(x[2], x[3]),
        }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.a.re, self.a.im, self.b.re, self.b.im]
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.a, -self.b.conj(), self.b, self.a.conj())
    }

    /// Reads the first column; the caller is responsible for the shape.
    pub fn from_matrix(m: &Matrix2<Complex64>) -> Self {
        Self {
            a: m[(0, 0)],
            b: m[(1, 0)],
        }
    }

    /// Conjugate transpose (the inverse for unit elements).
    pub fn adjoint(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            a: self.a * s,
            b: self.b * s,
        }
    }
}

impl Mul for Su2 {
    type Output = Su2;

    fn mul(self, o: Su2) -> Su2 {
        // First column of [[a, −b̄], [b, ā]]·[[c, −d̄], [d, c̄]].
        Su2 {
            a: self.a * o.a - self.b.conj() * o.b,
            b: self.b * o.a + self.a.conj() * o.b,
        }
    }
}

/// Basis of ℝ⁴ as quaternion-shaped 2×2 matrices.
fn basis(i: usize) -> Su2 {
    let mut x = [0.0; 4];
    x[i] = 1.0;
    Su2::from_coords(x)
}

/// Matrix of `x ↦ p·X·q†` on ℝ⁴.
fn pair_matrix(p: &Su2, q: &Su2) -> Mat4 {
    let qa = q.adjoint();
    let mut m = Mat4::zeros();
    for j in 0..4 {
        let y = (*p * basis(j) * qa).coords();
        for i in 0..4 {
            m[(i, j)] = y[i];
        }
    }
    m
}

/// An element of SO(4) = (SU(2)×SU(2))/±1, acting on ℝ⁴ ≅ ℍ by
/// `x ↦ left·x·right†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So4Element {
    pub left: Su2,
    pub right: Su2,
}

impl So4Element {
    pub const IDENTITY: So4Element = So4Element {
        left: Su2::IDENTITY,
        right: Su2::IDENTITY,
    };

    pub fn new(left: Su2, right: Su2) -> Self {
        Self { left, right }
    }

    pub fn from_euler(left: &EulerAngles, right: &EulerAngles) -> Self {
        Self::new(Su2::from_euler(left), Su2::from_euler(right))
    }

    pub fn matrix(&self) -> Mat4 {
        pair_matrix(&self.left, &self.right)
    }

    /// Recovers a lift `(p, q)` of a rotation. The 16 matrices
    /// `B_ij = pair_matrix(e_i, e_j)` are orthogonal with Frobenius norm² 4,
    /// so `p_i q_j = ¼⟨R, B_ij⟩` and the rank-one matrix `p qᵀ` gives both
    /// factors up to a common sign.
    pub fn from_matrix(r: &Mat4) -> Result<Self, PeterWeylError> {
        let defect = orthogonality_defect(r);
        if defect > RECOVERY_TOL || r.determinant() < 0.0 {
            return Err(PeterWeylError::NotSo4 { defect });
        }
        let mut pq = [[0.0; 4]; 4];
        for (i, row) in pq.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = 0.25 * r.component_mul(&pair_matrix(&basis(i), &basis(j))).sum();
            }
        }
        let col = (0..4)
            .max_by(|&a, &b| {
                let na: f64 = (0..4).map(|i| pq[i][a] * pq[i][a]).sum();
                let nb: f64 = (0..4).map(|i| pq[i][b] * pq[i][b]).sum();
                na.total_cmp(&nb)
            })
            .expect("four columns");
        let mut p = [pq[0][col], pq[1][col], pq[2][col], pq[3][col]];
        let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        p.iter_mut().for_each(|v| *v /= norm);
        let mut q = [0.0; 4];
        for (j, qj) in q.iter_mut().enumerate() {
            *qj = (0..4).map(|i| pq[i][j] * p[i]).sum();
        }
        let out = Self::new(Su2::from_coords(p), Su2::from_coords(q));
        let residual = (out.matrix() - r).amax();
        if residual > RECOVERY_TOL {
            return Err(PeterWeylError::NotSo4 { defect: residual });
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.left.adjoint(), self.right.adjoint())
    }
}

impl Mul for So4Element {
    type Output = So4Element;

    fn mul(self, o: So4Element) -> So4Element {
        So4Element::new(self.left * o.left, self.right * o.right)
    }
}

/// An element `e^{iφ}·V` of U(2) with `V ∈ SU(2)`; `(φ, V)` and `(φ+π, −V)`
/// name the same element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2Element {
    pub phase: f64,
    pub v: Su2,
}

impl U2Element {
    pub const IDENTITY: U2Element = U2Element {
        phase: 0.0,
        v: Su2::IDENTITY,
    };

    pub fn new(phase: f64, v: Su2) -> Self {
        Self { phase, v }
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        self.v.matrix() * Complex64::from_polar(1.0, self.phase)
    }

    /// Factors a unitary 2×2 matrix, choosing `φ = ½ arg det U`.
    pub fn from_matrix(u: &Matrix2<Complex64>) -> Result<Self, PeterWeylError> {
        let defect = (u.adjoint() * u - Matrix2::identity())
            .map(|z| z.norm())
            .max();
        if defect > RECOVERY_TOL {
            return Err(PeterWeylError::NotUnitary { defect });
        }
        let phase = 0.5 * u.determinant().arg();
        let v = u * Complex64::from_polar(1.0, -phase);
        Ok(Self::new(phase, Su2::from_matrix(&v)))
    }

    /// The real 4×4 image `[[A, B], [−B, A]]` of `U = A + iB`, which lies in
    /// SO(4) ∩ SP(4,ℝ).
    pub fn real_matrix(&self) -> Mat4 {
        let u = self.matrix();
        let mut m = Mat4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = u[(i, j)].re;
                m[(i + 2, j + 2)] = u[(i, j)].re;
                m[(i, j + 2)] = u[(i, j)].im;
                m[(i + 2, j)] = -u[(i, j)].im;
            }
        }
        m
    }

    pub fn from_real_matrix(m: &Mat4) -> Result<Self, PeterWeylError> {
        let mut block_defect: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                block_defect = block_defect
                    .max((m[(i, j)] - m[(i + 2, j + 2)]).abs())
                    .max((m[(i, j + 2)] + m[(i + 2, j)]).abs());
            }
        }
        if block_defect > RECOVERY_TOL {
            return Err(PeterWeylError::NotUnitary {
                defect: block_defect,
            });
        }
        let u = Matrix2::from_fn(|i, j| Complex64::new(m[(i, j)], m[(i, j + 2)]));
        Self::from_matrix(&u)
    }

    pub fn inverse(&self) -> Self {
        Self::new(-self.phase, self.v.adjoint())
    }
}

impl Mul for U2Element {
    type Output = U2Element;

    fn mul(self, o: U2Element) -> U2Element {
        U2Element::new(self.phase + o.phase, self.v * o.v)
    }
}
