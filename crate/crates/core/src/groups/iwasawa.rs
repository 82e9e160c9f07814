use nalgebra::{Matrix4, Vector4};
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{symplectic_form, GroupTag, Mat4, MatrixElement};
use super::nil::NilPoint6;
use super::GroupError;

/// Gram–Schmidt pivots below this are treated as rank deficiency.
pub const PIVOT_FLOOR: f64 = 1e-13;

/// The factors of `g = k·a·n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IwasawaFactors {
    pub k: MatrixElement,
    pub a: MatrixElement,
    pub n: MatrixElement,
    /// `a = diag(e^{t1}, e^{t2}, e^{t3}, e^{−t1−t2−t3})`.
    pub log_a: [f64; 3],
}

impl IwasawaFactors {
    pub fn product(&self) -> Mat4 {
        self.k.entries() * self.a.entries() * self.n.entries()
    }
}

/// QR by modified Gram–Schmidt with one re-orthogonalization pass.
/// Returns `(q, r)` with `r` upper triangular and positive on the diagonal.
pub fn mgs_qr(g: &Mat4) -> Result<(Mat4, Mat4), GroupError> {
    let mut q = Mat4::zeros();
    let mut r = Mat4::zeros();
    for j in 0..4 {
        let mut v: Vector4<f64> = g.column(j).into();
        for _ in 0..2 {
            for i in 0..j {
                let qi: Vector4<f64> = q.column(i).into();
                let c = qi.dot(&v);
                r[(i, j)] += c;
                v -= qi * c;
            }
        }
        let pivot = v.norm();
        if !(pivot >= PIVOT_FLOOR) {
            return Err(GroupError::NearSingular { pivot });
        }
        r[(j, j)] = pivot;
        q.set_column(j, &(v / pivot));
    }
    Ok((q, r))
}

/// Swaps the third and fourth basis vectors. Conjugating by it turns the
/// symplectic Iwasawa factors into an ordinary QR factorization.
fn swap34() -> Mat4 {
    let mut p = Mat4::zeros();
    p[(0, 0)] = 1.0;
    p[(1, 1)] = 1.0;
    p[(2, 3)] = 1.0;
    p[(3, 2)] = 1.0;
    p
}

pub fn diag_from_log(log_a: &[f64; 3]) -> Mat4 {
    let t4 = -(log_a[0] + log_a[1] + log_a[2]);
    Mat4::from_diagonal(&Vector4::new(
        log_a[0].exp(),
        log_a[1].exp(),
        log_a[2].exp(),
        t4.exp(),
    ))
}

/// Iwasawa decomposition `g = k·a·n`.
///
/// For `Sl4` input `n` is upper unitriangular. For `Sp4` input the
/// decomposition is taken in the basis order (e1, e2, e4, e3), in which the
/// symplectic Iwasawa subgroups are triangular; then `k` is in U(2) ⊂ SO(4),
/// `a = diag(b1, b2, 1/b1, 1/b2)` and `n` lies in the 4-parameter nilpotent
/// symplectic group (tag `SpUnipotent`). All three factors are symplectic.
pub fn iwasawa_decompose(g: &MatrixElement) -> Result<IwasawaFactors, GroupError> {
    let (q, r) = match g.tag() {
        GroupTag::Sl4 => mgs_qr(g.entries())?,
        GroupTag::Sp4 => {
            let p = swap34();
            let (q, r) = mgs_qr(&(p * g.entries() * p))?;
            (p * q * p, p * r * p)
        }
        other => return Err(GroupError::UnsupportedTag(other)),
    };
    let diag = Vector4::new(r[(0, 0)], r[(1, 1)], r[(2, 2)], r[(3, 3)]);
    let inv = Mat4::from_diagonal(&diag.map(|d| 1.0 / d));
    let mut n = inv * r;
    for i in 0..4 {
        n[(i, i)] = 1.0;
    }
    let log_a = [diag[0].ln(), diag[1].ln(), diag[2].ln()];
    let n_tag = if g.tag() == GroupTag::Sl4 {
        for i in 0..4 {
            for j in 0..i {
                n[(i, j)] = 0.0;
            }
        }
        GroupTag::UpperUnipotent
    } else {
        GroupTag::SpUnipotent
    };
    // Rebuild `a` from its log chart so that the fourth entry is exactly the
    // dependent one and det a = 1 holds to rounding.
    let a = diag_from_log(&log_a);
    Ok(IwasawaFactors {
        k: MatrixElement::new(q, GroupTag::So4)?,
        a: MatrixElement::new(a, GroupTag::DiagPositive)?,
        n: MatrixElement::new(n, n_tag)?,
        log_a,
    })
}

/// `Π_{i<j} a_i/a_j = a1³·a2·a3⁻¹·a4⁻³`, the Jacobian of `n ↦ a n a⁻¹` on N.
pub fn modulus_factor(log_a: &[f64; 3]) -> f64 {
    let t4 = -(log_a[0] + log_a[1] + log_a[2]);
    (3.0 * log_a[0] + log_a[1] - log_a[2] - 3.0 * t4).exp()
}

/// `a n a⁻¹` in coordinates; entry (i,j) scales by `a_i / a_j`.
pub fn conjugate_by_a(log_a: &[f64; 3], n: &NilPoint6) -> NilPoint6 {
    let a = diag_from_log(log_a);
    let inv = Mat4::from_diagonal(&Vector4::new(
        1.0 / a[(0, 0)],
        1.0 / a[(1, 1)],
        1.0 / a[(2, 2)],
        1.0 / a[(3, 3)],
    ));
    NilPoint6::from_matrix(&(a * n.to_matrix() * inv))
}

/// `exp(X)` for a random traceless `X` with entries of standard deviation `scale`.
pub fn random_sl4<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> MatrixElement {
    let mut x = Matrix4::from_fn(|_, _| scale * rng.sample::<f64, _>(StandardNormal));
    let tr = x.trace() / 4.0;
    for i in 0..4 {
        x[(i, i)] -= tr;
    }
    let g = x.exp();
    let det = g.determinant();
    // exp of a traceless matrix has det 1 up to rounding; rescale to remove it.
    let g = g / det.abs().powf(0.25);
    MatrixElement::new(g, GroupTag::Sl4).expect("exp of traceless matrix lies in SL4")
}

/// `exp(J·S)` for a random symmetric `S`, an element of SP(4,ℝ).
pub fn random_sp4<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> MatrixElement {
    let s = Matrix4::from_fn(|_, _| scale * rng.sample::<f64, _>(StandardNormal));
    let s = (s + s.transpose()) * 0.5;
    let g = (symplectic_form() * s).exp();
    MatrixElement::new(g, GroupTag::Sp4).expect("exp of a Hamiltonian matrix is symplectic")
}

/// Random rotation: the orthogonal factor of a random Gaussian matrix.
pub fn random_so4<R: Rng + ?Sized>(rng: &mut R) -> MatrixElement {
    loop {
        let m = Matrix4::from_fn(|_, _| rng.sample::<f64, _>(StandardNormal));
        if let Ok((mut q, _)) = mgs_qr(&m) {
            if q.determinant() < 0.0 {
                let c = -q.column(0);
                q.set_column(0, &c);
            }
            return MatrixElement::new(q, GroupTag::So4).expect("orthonormal columns");
        }
    }
}
