use nalgebra::Vector4;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::groups::{
    diag_from_log, modulus_factor, random_sl4, random_sp4, GroupTag, Mat4, NilPoint6, SpNPoint4,
};
use crate::peterweyl::{
    so4_labels, so4_nodes, so4_transform, u2_labels, u2_nodes, u2_transform, CompactGroup,
    CompactSpectrum, So4, So4Element, Su2, U2Element, U2,
};
use crate::quadrature::{so4_quadrature, u2_quadrature, HalfInt, DEFAULT_SO4_BUDGET};

use super::KnaError;

pub type KElement<G> = <<G as KnaGroup>::K as CompactGroup>::Element;
pub type KLabel<G> = <<G as KnaGroup>::K as CompactGroup>::Label;

/// A real reductive group with an Iwasawa decomposition `G = K·N·A` whose
/// compact factor has a concrete Peter–Weyl model.
pub trait KnaGroup: Send + Sync {
    type K: CompactGroup;
    /// The band-limit parameter of the compact quadrature.
    type Band: Copy + std::fmt::Debug + Send + Sync;

    const NAME: &'static str;
    const N_DIM: usize;
    const A_DIM: usize;

    fn tag() -> GroupTag;

    fn k_matrix(k: &KElement<Self>) -> Mat4;

    fn k_from_matrix(m: &Mat4) -> Result<KElement<Self>, KnaError>;

    fn n_matrix(x: &[f64]) -> Mat4;

    fn n_coords(m: &Mat4) -> Vec<f64>;

    fn a_matrix(t: &[f64]) -> Mat4;

    /// Chart coordinates of `a` from the full log-diagonal `(t1, t2, t3)`.
    fn a_coords(log_a: &[f64; 3]) -> Vec<f64>;

    fn k_labels(band: Self::Band) -> Vec<KLabel<Self>>;

    fn k_nodes(band: Self::Band) -> Result<Vec<(KElement<Self>, f64)>, KnaError>;

    fn k_transform<F>(f: F, band: Self::Band) -> Result<CompactSpectrum<KLabel<Self>>, KnaError>
    where
        F: Fn(&KElement<Self>) -> num_complex::Complex64 + Sync;

    /// `dim K + dim N + dim A`.
    fn dimension() -> usize;

    /// Jacobian of `n ↦ a n a⁻¹` in the N coordinates.
    fn modulus(t: &[f64]) -> f64;

    fn random_element<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Mat4;

    fn random_k<R: Rng + ?Sized>(rng: &mut R) -> KElement<Self>;
}

fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Su2 {
    let x: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Su2::from_coords(x.map(|v| v / r))
}

/// SL(4,ℝ) with K = SO(4), N upper unitriangular in (x1..x6), A in the logA
/// chart ℝ³.
pub struct Sl4Kna;

impl KnaGroup for Sl4Kna {
    type K = So4;
    type Band = HalfInt;

    const NAME: &'static str = "SL(4,R)";
    const N_DIM: usize = 6;
    const A_DIM: usize = 3;

    fn tag() -> GroupTag {
        GroupTag::Sl4
    }

    fn k_matrix(k: &So4Element) -> Mat4 {
        k.matrix()
    }

    fn k_from_matrix(m: &Mat4) -> Result<So4Element, KnaError> {
        Ok(So4Element::from_matrix(m)?)
    }

    fn n_matrix(x: &[f64]) -> Mat4 {
        NilPoint6::new(x[0], x[1], x[2], x[3], x[4], x[5]).to_matrix()
    }

    fn n_coords(m: &Mat4) -> Vec<f64> {
        NilPoint6::from_matrix(m).to_array().to_vec()
    }

    fn a_matrix(t: &[f64]) -> Mat4 {
        diag_from_log(&[t[0], t[1], t[2]])
    }

    fn a_coords(log_a: &[f64; 3]) -> Vec<f64> {
        log_a.to_vec()
    }

    fn k_labels(band: HalfInt) -> Vec<<So4 as CompactGroup>::Label> {
        so4_labels(band)
    }

    fn k_nodes(band: HalfInt) -> Result<Vec<(So4Element, f64)>, KnaError> {
        Ok(so4_nodes(&so4_quadrature(band, DEFAULT_SO4_BUDGET)?))
    }

    fn k_transform<F>(
        f: F,
        band: HalfInt,
    ) -> Result<CompactSpectrum<<So4 as CompactGroup>::Label>, KnaError>
    where
        F: Fn(&So4Element) -> num_complex::Complex64 + Sync,
    {
        Ok(so4_transform(f, &so4_quadrature(band, DEFAULT_SO4_BUDGET)?))
    }

    fn dimension() -> usize {
        6 + Self::N_DIM + Self::A_DIM
    }

    fn modulus(t: &[f64]) -> f64 {
        modulus_factor(&[t[0], t[1], t[2]])
    }

    fn random_element<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Mat4 {
        *random_sl4(rng, scale).entries()
    }

    fn random_k<R: Rng + ?Sized>(rng: &mut R) -> So4Element {
        So4Element::new(random_su2(rng), random_su2(rng))
    }
}

/// SP(4,ℝ) with K = U(2), N the 4-parameter nilpotent symplectic group in
/// `(x, y, z, t)` and `a = diag(e^{t1}, e^{t2}, e^{−t1}, e^{−t2})`.
pub struct Sp4Kna;

impl KnaGroup for Sp4Kna {
    type K = U2;
    /// Largest `|m1|, |m2|` of the U(2) labels.
    type Band = u32;

    const NAME: &'static str = "SP(4,R)";
    const N_DIM: usize = 4;
    const A_DIM: usize = 2;

    fn tag() -> GroupTag {
        GroupTag::Sp4
    }

    fn k_matrix(k: &U2Element) -> Mat4 {
        k.real_matrix()
    }

    fn k_from_matrix(m: &Mat4) -> Result<U2Element, KnaError> {
        Ok(U2Element::from_real_matrix(m)?)
    }

    fn n_matrix(x: &[f64]) -> Mat4 {
        SpNPoint4::new(x[0], x[1], x[2], x[3]).to_matrix()
    }

    fn n_coords(m: &Mat4) -> Vec<f64> {
        SpNPoint4::from_matrix(m).to_array().to_vec()
    }

    fn a_matrix(t: &[f64]) -> Mat4 {
        Mat4::from_diagonal(&Vector4::new(
            t[0].exp(),
            t[1].exp(),
            (-t[0]).exp(),
            (-t[1]).exp(),
        ))
    }

    fn a_coords(log_a: &[f64; 3]) -> Vec<f64> {
        vec![log_a[0], log_a[1]]
    }

    fn k_labels(band: u32) -> Vec<<U2 as CompactGroup>::Label> {
        u2_labels(band)
    }

    fn k_nodes(band: u32) -> Result<Vec<(U2Element, f64)>, KnaError> {
        Ok(u2_nodes(&u2_quadrature(band, DEFAULT_SO4_BUDGET)?))
    }

    fn k_transform<F>(
        f: F,
        band: u32,
    ) -> Result<CompactSpectrum<<U2 as CompactGroup>::Label>, KnaError>
    where
        F: Fn(&U2Element) -> num_complex::Complex64 + Sync,
    {
        Ok(u2_transform(f, &u2_quadrature(band, DEFAULT_SO4_BUDGET)?))
    }

    fn dimension() -> usize {
        4 + Self::N_DIM + Self::A_DIM
    }

    /// The entries x, y, z, t scale by `b1/b2, b1², b1·b2, b2²`.
    fn modulus(t: &[f64]) -> f64 {
        (4.0 * t[0] + 2.0 * t[1]).exp()
    }

    fn random_element<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Mat4 {
        *random_sp4(rng, scale).entries()
    }

    fn random_k<R: Rng + ?Sized>(rng: &mut R) -> U2Element {
        U2Element::new(
            rng.random_range(0.0..2.0 * std::f64::consts::PI),
            random_su2(rng),
        )
    }
}
