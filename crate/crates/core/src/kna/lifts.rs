use nalgebra::{Matrix5, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::groups::{random_sl4, Mat4};

use super::family::{KnaGroup, Sl4Kna};
use super::transform::SeparableKna;
use super::KnaError;

/// `Υ(f)(g, k₁) = f(g·k₁)` on `G × K`.
pub fn lift_upsilon<G: KnaGroup>(
    f: &SeparableKna<G>,
    g: &Mat4,
    k1: &Mat4,
) -> Result<num_complex::Complex64, KnaError> {
    f.eval_matrix(&(g * k1))
}

/// `h(f)(v, g) = f(g·v, g)` on the semidirect product.
pub fn lift_h(
    f: &SeparableKna<Sl4Kna>,
    v: &Vector4<f64>,
    g: &Mat4,
) -> Result<num_complex::Complex64, KnaError> {
    f.eval_affine(&(g * v), g)
}

/// `f̃(v, g, h) = f(g·v, g·h)` on ℝ⁴ × SL(4,ℝ) × SL(4,ℝ).
pub fn lift_q(
    f: &SeparableKna<Sl4Kna>,
    v: &Vector4<f64>,
    g: &Mat4,
    h: &Mat4,
) -> Result<num_complex::Complex64, KnaError> {
    f.eval_affine(&(g * v), &(g * h))
}

/// Largest pointwise discrepancy of an identity over random samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub name: String,
    pub samples: usize,
    pub max_abs: f64,
    /// Largest `|value|` seen, to show the identity is not checked on zeros.
    pub max_value: f64,
}

fn run<F>(name: &str, samples: usize, seed: u64, mut one: F) -> Result<InvarianceReport, KnaError>
where
    F: FnMut(
        &mut ChaCha20Rng,
    ) -> Result<(num_complex::Complex64, num_complex::Complex64), KnaError>,
{
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut max_abs: f64 = 0.0;
    let mut max_value: f64 = 0.0;
    for _ in 0..samples {
        let (a, b) = one(&mut rng)?;
        max_abs = max_abs.max((a - b).norm());
        max_value = max_value.max(a.norm());
    }
    Ok(InvarianceReport {
        name: name.to_string(),
        samples,
        max_abs,
        max_value,
    })
}

fn random_vec4<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Vector4<f64> {
    Vector4::from_fn(|_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

/// `Υ(f)(gh, h⁻¹k₁) = Υ(f)(g, k₁)` for random `g ∈ G`, `h, k₁ ∈ K`.
pub fn upsilon_invariance_check<G: KnaGroup>(
    f: &SeparableKna<G>,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport, KnaError> {
    run("upsilon right-K invariance", samples, seed, |rng| {
        let g = G::random_element(rng, 0.3);
        let h = G::k_matrix(&G::random_k(rng));
        let k1 = G::k_matrix(&G::random_k(rng));
        let lhs = lift_upsilon(f, &(g * h), &(h.transpose() * k1))?;
        let rhs = lift_upsilon(f, &g, &k1)?;
        Ok((lhs, rhs))
    })
}

/// `Υ(f)(g, I) = f(g)`.
pub fn upsilon_restriction_check<G: KnaGroup>(
    f: &SeparableKna<G>,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport, KnaError> {
    run("upsilon restriction", samples, seed, |rng| {
        let g = G::random_element(rng, 0.3);
        Ok((lift_upsilon(f, &g, &Mat4::identity())?, f.eval_matrix(&g)?))
    })
}

/// `f̃(q⁻¹v, g, q⁻¹h) = f̃(v, gq⁻¹, h)` for random `q, g, h ∈ SL(4,ℝ)`.
pub fn q_lift_invariance_check(
    f: &SeparableKna<Sl4Kna>,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport, KnaError> {
    run("affine lift invariance", samples, seed, |rng| {
        let q = *random_sl4(rng, 0.3).entries();
        let g = *random_sl4(rng, 0.3).entries();
        let h = *random_sl4(rng, 0.3).entries();
        let v = random_vec4(rng, 1.0);
        let q_inv = q.try_inverse().ok_or(KnaError::Singular)?;
        let lhs = lift_q(f, &(q_inv * v), &g, &(q_inv * h))?;
        let rhs = lift_q(f, &v, &(g * q_inv), &h)?;
        Ok((lhs, rhs))
    })
}

/// `f̃(v, h, I) = h(f)(v, h)`: the affine lift at the identity reduces to `h(f)`.
pub fn h_lift_reduction_check(
    f: &SeparableKna<Sl4Kna>,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport, KnaError> {
    run("affine lift at identity", samples, seed, |rng| {
        let h = *random_sl4(rng, 0.3).entries();
        let v = random_vec4(rng, 1.0);
        // f̃(v, h, I) = f(hv, h) and h(f)(v, h) = f(hv, h).
        Ok((lift_q(f, &v, &h, &Mat4::identity())?, lift_h(f, &v, &h)?))
    })
}

/// A point `(v, g)` of ℝ⁴ ⋊ SL(4,ℝ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinePoint {
    pub v: Vector4<f64>,
    pub g: Mat4,
}

impl AffinePoint {
    pub fn new(v: Vector4<f64>, g: Mat4) -> Self {
        Self { v, g }
    }

    /// `(v, g)(v′, g′) = (v + g v′, g g′)`.
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.v + self.g * o.v, self.g * o.g)
    }

    pub fn inverse(&self) -> Result<Self, KnaError> {
        let gi = self.g.try_inverse().ok_or(KnaError::Singular)?;
        Ok(Self::new(-(gi * self.v), gi))
    }

    /// `[[g, v], [0, 1]]`.
    pub fn to_matrix(&self) -> Matrix5<f64> {
        let mut m = Matrix5::identity();
        m.fixed_view_mut::<4, 4>(0, 0).copy_from(&self.g);
        m.fixed_view_mut::<4, 1>(0, 4).copy_from(&self.v);
        m
    }

    pub fn from_matrix(m: &Matrix5<f64>) -> Self {
        Self::new(
            m.fixed_view::<4, 1>(0, 4).into(),
            m.fixed_view::<4, 4>(0, 0).into(),
        )
    }
}

/// Coordinate law and inverse against 5×5 affine matrix arithmetic;
/// returns the largest entry difference.
pub fn semidirect_law_check(samples: usize, seed: u64) -> Result<f64, KnaError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let p = AffinePoint::new(
            random_vec4(&mut rng, 1.0),
            *random_sl4(&mut rng, 0.3).entries(),
        );
        let q = AffinePoint::new(
            random_vec4(&mut rng, 1.0),
            *random_sl4(&mut rng, 0.3).entries(),
        );
        let by_law = p.mul(&q).to_matrix();
        let by_matrix = p.to_matrix() * q.to_matrix();
        worst = worst.max((by_law - by_matrix).amax());
        let inv = p.inverse()?.to_matrix();
        let inv_matrix = p.to_matrix().try_inverse().ok_or(KnaError::Singular)?;
        worst = worst.max((inv - inv_matrix).amax());
    }
    Ok(worst)
}

/// Jacobian of `n ↦ a n a⁻¹` by central differences in the N coordinates,
/// against [`KnaGroup::modulus`]. Returns the largest relative error.
pub fn conjugation_jacobian_check<G: KnaGroup>(samples: usize, seed: u64) -> Result<f64, KnaError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let d = G::N_DIM;
    let step = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let t: Vec<f64> = (0..G::A_DIM).map(|_| rng.random_range(-0.5..0.5)).collect();
        let n: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = G::a_matrix(&t);
        let a_inv = a.try_inverse().ok_or(KnaError::Singular)?;
        let conj = |x: &[f64]| G::n_coords(&(a * G::n_matrix(x) * a_inv));
        let mut jac = nalgebra::DMatrix::<f64>::zeros(d, d);
        for j in 0..d {
            let mut xp = n.clone();
            let mut xm = n.clone();
            xp[j] += step;
            xm[j] -= step;
            let (fp, fm) = (conj(&xp), conj(&xm));
            for i in 0..d {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * step);
            }
        }
        let m = G::modulus(&t);
        worst = worst.max((jac.determinant() - m).abs() / m);
    }
    Ok(worst)
}
