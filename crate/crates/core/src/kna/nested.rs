use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::groups::Mat4;
use crate::peterweyl::{CompactGroup, IrrepLabel};
use crate::quadrature::gauss_hermite;

use super::factor::EuclidFactor;
use super::family::{KLabel, KnaGroup};
use super::transform::{kna_transform, KnaGrid, SeparableKna};
use super::KnaError;

type CMat = DMatrix<Complex64>;

/// One point `(γ, λ, ξ)` of the spectral domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint<L> {
    pub label: L,
    pub lambda: Vec<f64>,
    pub xi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpotCheck {
    pub label: String,
    pub lambda: Vec<f64>,
    pub xi: Vec<f64>,
    /// `max |factorized − nested| / max |factorized|` over matrix entries.
    pub rel_err: f64,
    #[serde(skip)]
    pub factorized: CMat,
    #[serde(skip)]
    pub nested: CMat,
}

/// Random spectral points with `|ξ_a σ_a|, |λ_a σ_a| ≤ max_scaled`, where
/// `σ` is the envelope width of the matching factor of `f`.
pub fn random_spectral_points<G: KnaGroup, R: Rng + ?Sized>(
    rng: &mut R,
    f: &SeparableKna<G>,
    band: G::Band,
    count: usize,
    max_scaled: f64,
) -> Vec<SpectralPoint<KLabel<G>>> {
    let labels = G::k_labels(band);
    let draw = |rng: &mut R, e: &EuclidFactor| -> Vec<f64> {
        e.sigma
            .iter()
            .map(|s| rng.random_range(-max_scaled..=max_scaled) / s)
            .collect()
    };
    (0..count)
        .map(|_| {
            let label = labels[rng.random_range(0..labels.len())];
            let lambda = draw(rng, &f.w);
            let xi = draw(rng, &f.v);
            SpectralPoint { label, lambda, xi }
        })
        .collect()
}

/// Tensor Gauss–Hermite rule adapted to the Gaussian envelope of `e`:
/// `∫ h(x) dx ≈ Σ W_i h(x_i)`, exact when `h/envelope` is a polynomial of
/// degree `< 2m` in each coordinate.
fn hermite_rule(e: &EuclidFactor, m: usize) -> Vec<(Vec<f64>, f64)> {
    let (z, w) = gauss_hermite(m);
    let mut rule = vec![(Vec::new(), 1.0)];
    for a in 0..e.dim() {
        let s = SQRT_2 * e.sigma[a];
        let mut next = Vec::with_capacity(rule.len() * m);
        for (x, wx) in &rule {
            for (zi, wi) in z.iter().zip(&w) {
                let mut y = x.clone();
                y.push(e.mu[a] + s * zi);
                next.push((y, wx * wi * s * (zi * zi).exp()));
            }
        }
        rule = next;
    }
    rule
}

fn phases(rule: &[(Vec<f64>, f64)], freq: &[f64]) -> Vec<Complex64> {
    rule.iter()
        .map(|(x, w)| {
            let dot: f64 = x.iter().zip(freq).map(|(a, b)| a * b).sum();
            Complex64::from_polar(*w, -dot)
        })
        .collect()
}

/// Brute-force oracle for the factorized transform.
///
/// Evaluates `∫_K ∫_N ∫_A f(k·n·a) γ(k⁻¹) e^{−i⟨ξ,n⟩} e^{−i⟨λ,t⟩}` by nested
/// quadrature: the exact compact rule of the band on K and `hermite_nodes`
/// Gauss–Hermite nodes per axis on N and A. The integrand is evaluated from
/// the matrix `k·n·a` through the Iwasawa decomposition, so the check also
/// exercises the coordinate read-back.
pub fn nested_spot_check<G: KnaGroup>(
    f: &SeparableKna<G>,
    band: G::Band,
    points: &[SpectralPoint<KLabel<G>>],
    hermite_nodes: usize,
    grid: &KnaGrid,
) -> Result<Vec<SpotCheck>, KnaError> {
    if f.r.is_some() {
        return Err(KnaError::UnexpectedTranslation);
    }
    let k_nodes = G::k_nodes(band)?;
    let n_rule = hermite_rule(&f.v, hermite_nodes);
    let a_rule = hermite_rule(&f.w, hermite_nodes);
    let n_mats: Vec<Mat4> = n_rule.iter().map(|(x, _)| G::n_matrix(x)).collect();
    let a_mats: Vec<Mat4> = a_rule.iter().map(|(t, _)| G::a_matrix(t)).collect();
    let n_phase: Vec<Vec<Complex64>> = points.iter().map(|p| phases(&n_rule, &p.xi)).collect();
    let a_phase: Vec<Vec<Complex64>> = points.iter().map(|p| phases(&a_rule, &p.lambda)).collect();
    let labels: Vec<KLabel<G>> = points.iter().map(|p| p.label).collect();

    let per_k: Vec<Vec<CMat>> = k_nodes
        .par_iter()
        .map(|(k, wk)| -> Result<Vec<CMat>, KnaError> {
            let km = G::k_matrix(k);
            let mut s = vec![Complex64::new(0.0, 0.0); points.len()];
            for (i, nm) in n_mats.iter().enumerate() {
                let kn = km * nm;
                for (j, am) in a_mats.iter().enumerate() {
                    let v = f.eval_matrix(&(kn * am))?;
                    for (p, sp) in s.iter_mut().enumerate() {
                        *sp += v * n_phase[p][i] * a_phase[p][j];
                    }
                }
            }
            let reps = G::K::reps(&labels, &G::K::inverse(k));
            Ok(reps
                .into_iter()
                .zip(s)
                .map(|(r, sp)| r * (sp * *wk))
                .collect())
        })
        .collect::<Result<_, _>>()?;

    let spectrum = kna_transform(f, band, grid)?;
    points
        .iter()
        .enumerate()
        .map(|(p, pt)| {
            let mut nested = CMat::zeros(pt.label.dim(), pt.label.dim());
            for m in &per_k {
                nested += &m[p];
            }
            let factorized = spectrum.value(&pt.label, &pt.lambda, &pt.xi, None)?;
            let scale = factorized.map(|z| z.norm()).max();
            let diff = (&factorized - &nested).map(|z| z.norm()).max();
            Ok(SpotCheck {
                label: pt.label.to_string(),
                lambda: pt.lambda.clone(),
                xi: pt.xi.clone(),
                rel_err: diff / scale.max(f64::MIN_POSITIVE),
                factorized,
                nested,
            })
        })
        .collect()
}
