use std::f64::consts::PI;
use std::fmt;
use std::marker::PhantomData;

use nalgebra::{DMatrix, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::groups::{diag_from_log, iwasawa_decompose, Mat4, MatrixElement};
use crate::peterweyl::{BandLimited, CompactSpectrum, IrrepLabel, PlancherelCheck};
use crate::quadrature::pairwise_sum;

use super::factor::{EuclidFactor, FactorSpectrum};
use super::family::{KElement, KLabel, KnaGroup, Sl4Kna};
use super::KnaError;

type CMat = DMatrix<Complex64>;

/// Sampling of the Euclidean factors: a uniform box of `±half_width·σ`
/// around each factor's centre with `count` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnaGrid {
    pub half_width: f64,
    pub count: usize,
}

impl Default for KnaGrid {
    fn default() -> Self {
        Self {
            half_width: 12.0,
            count: 256,
        }
    }
}

/// `f(kna) = u(k)·v(n)·w(t)`, optionally times `r(v₀)` for the semidirect
/// product ℝ⁴ ⋊ G, with `t` the log-chart coordinates of `a`.
pub struct SeparableKna<G: KnaGroup> {
    pub u: BandLimited<KLabel<G>>,
    pub v: EuclidFactor,
    pub w: EuclidFactor,
    pub r: Option<EuclidFactor>,
    group: PhantomData<fn() -> G>,
}

impl<G: KnaGroup> Clone for SeparableKna<G> {
    fn clone(&self) -> Self {
        Self {
            u: self.u.clone(),
            v: self.v.clone(),
            w: self.w.clone(),
            r: self.r.clone(),
            group: PhantomData,
        }
    }
}

impl<G: KnaGroup> fmt::Debug for SeparableKna<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeparableKna")
            .field("group", &G::NAME)
            .field("u", &self.u)
            .field("v", &self.v)
            .field("w", &self.w)
            .field("r", &self.r)
            .finish()
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), KnaError> {
    if expected == found {
        Ok(())
    } else {
        Err(KnaError::Dimension { expected, found })
    }
}

impl<G: KnaGroup> SeparableKna<G> {
    pub fn new(
        u: BandLimited<KLabel<G>>,
        v: EuclidFactor,
        w: EuclidFactor,
    ) -> Result<Self, KnaError> {
        check_dim(G::N_DIM, v.dim())?;
        check_dim(G::A_DIM, w.dim())?;
        Ok(Self {
            u,
            v,
            w,
            r: None,
            group: PhantomData,
        })
    }

    pub fn with_translation(mut self, r: EuclidFactor) -> Result<Self, KnaError> {
        check_dim(4, r.dim())?;
        self.r = Some(r);
        Ok(self)
    }

    /// `c·f`; the scalar is carried by the N factor.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.v = self.v.scaled(c);
        out
    }

    /// Value at Iwasawa coordinates, without the translation factor.
    pub fn eval_coords(&self, k: &KElement<G>, n: &[f64], t: &[f64]) -> Complex64 {
        self.u.eval::<G::K>(k) * self.v.eval(n) * self.w.eval(t)
    }

    /// Value at a matrix `g`, read through its Iwasawa decomposition.
    pub fn eval_matrix(&self, g: &Mat4) -> Result<Complex64, KnaError> {
        let (k, n, t) = kna_coords::<G>(g)?;
        Ok(self.eval_coords(&k, &n, &t))
    }

    /// `f(v₀, g) = r(v₀)·f(g)` on the semidirect product.
    pub fn eval_affine(&self, v0: &Vector4<f64>, g: &Mat4) -> Result<Complex64, KnaError> {
        let r = self.r.as_ref().ok_or(KnaError::MissingTranslation)?;
        Ok(r.eval(v0.as_slice()) * self.eval_matrix(g)?)
    }
}

/// Coordinates `(k, n, t)` with `g = k·n·a(t)`.
///
/// The decomposition routine returns `g = k·a·n′`; the N coordinate of the
/// KNA order is `n = a·n′·a⁻¹`.
pub fn kna_coords<G: KnaGroup>(g: &Mat4) -> Result<(KElement<G>, Vec<f64>, Vec<f64>), KnaError> {
    let fac = iwasawa_decompose(&MatrixElement::new(*g, G::tag())?)?;
    let a = diag_from_log(&fac.log_a);
    let a_inv = diag_from_log(&fac.log_a.map(|t| -t));
    let n = a * fac.n.entries() * a_inv;
    let k = G::k_from_matrix(fac.k.entries())?;
    Ok((k, G::n_coords(&n), G::a_coords(&fac.log_a)))
}

/// `k·n·a(t)` as a matrix.
pub fn kna_matrix<G: KnaGroup>(k: &KElement<G>, n: &[f64], t: &[f64]) -> Mat4 {
    G::k_matrix(k) * G::n_matrix(n) * G::a_matrix(t)
}

/// `T𝓕f(λ, ξ, γ) = Tu(γ)·𝓕v(ξ)·𝓕w(λ)` (times `𝓕r(η)` on the semidirect
/// product), held factor by factor.
#[derive(Debug, Clone)]
pub struct KnaSpectrum<L: IrrepLabel> {
    pub compact: CompactSpectrum<L>,
    pub n: FactorSpectrum,
    pub a: FactorSpectrum,
    pub r: Option<FactorSpectrum>,
}

impl<L: IrrepLabel> KnaSpectrum<L> {
    /// The matrix value at one spectral point; `eta` is required exactly when
    /// the spectrum has a translation factor.
    pub fn value(
        &self,
        label: &L,
        lambda: &[f64],
        xi: &[f64],
        eta: Option<&[f64]>,
    ) -> Result<CMat, KnaError> {
        let tu = self
            .compact
            .get(label)
            .ok_or_else(|| KnaError::UnknownLabel(label.to_string()))?;
        let mut s = self.n.value_at(xi)? * self.a.value_at(lambda)?;
        match (&self.r, eta) {
            (Some(r), Some(eta)) => s *= r.value_at(eta)?,
            (None, None) => {}
            (Some(_), None) => return Err(KnaError::MissingTranslation),
            (None, Some(_)) => return Err(KnaError::UnexpectedTranslation),
        }
        Ok(tu * s)
    }

    /// `Σ_γ d_γ (2π)^{−d} ∫ ‖T𝓕f‖²_HS`, evaluated factor by factor.
    pub fn energy(&self) -> f64 {
        let mut e = self.compact.energy() * self.n.norm_sqr() * self.a.norm_sqr();
        if let Some(r) = &self.r {
            e *= r.norm_sqr();
        }
        e
    }

    /// Labels with their matrices, followed by the grid metadata of each
    /// Euclidean factor.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "compact": self.compact.to_json(),
            "n": self.n.to_json(),
            "a": self.a.to_json(),
            "r": self.r.as_ref().map(|r| r.to_json()),
        })
    }
}

/// `(2π)^{−(dim N + dim A [+ 4])}`.
pub fn spectral_constant<G: KnaGroup>(translation: bool) -> f64 {
    let d = G::N_DIM + G::A_DIM + if translation { 4 } else { 0 };
    (2.0 * PI).powi(-(d as i32))
}

/// The combined transform of a separable function.
pub fn kna_transform<G: KnaGroup>(
    f: &SeparableKna<G>,
    band: G::Band,
    grid: &KnaGrid,
) -> Result<KnaSpectrum<KLabel<G>>, KnaError> {
    let spectrum = |e: &EuclidFactor| e.sample(grid.half_width, grid.count)?.spectrum();
    Ok(KnaSpectrum {
        compact: G::k_transform(|k| f.u.eval::<G::K>(k), band)?,
        n: spectrum(&f.v)?,
        a: spectrum(&f.w)?,
        r: f.r.as_ref().map(spectrum).transpose()?,
    })
}

/// The transform on ℝ⁴ ⋊ SL(4,ℝ); the translation factor is required.
pub fn semidirect_transform(
    f: &SeparableKna<Sl4Kna>,
    band: <Sl4Kna as KnaGroup>::Band,
    grid: &KnaGrid,
) -> Result<KnaSpectrum<KLabel<Sl4Kna>>, KnaError> {
    if f.r.is_none() {
        return Err(KnaError::MissingTranslation);
    }
    kna_transform(f, band, grid)
}

fn compact_norm_sqr<G: KnaGroup>(
    u: &BandLimited<KLabel<G>>,
    band: G::Band,
) -> Result<f64, KnaError> {
    let nodes = G::k_nodes(band)?;
    let terms: Vec<Complex64> = nodes
        .par_iter()
        .map(|(k, w)| Complex64::new(u.eval::<G::K>(k).norm_sqr() * w, 0.0))
        .collect();
    Ok(pairwise_sum(&terms).re)
}

/// `∫|f|² dk dn dt (dv₀)` against `Σ_γ d_γ (2π)^{−d} ∬‖T𝓕f‖²_HS`.
pub fn plancherel_kna_check<G: KnaGroup>(
    f: &SeparableKna<G>,
    band: G::Band,
    grid: &KnaGrid,
) -> Result<PlancherelCheck, KnaError> {
    let norm = |e: &EuclidFactor| e.sample(grid.half_width, grid.count).map(|s| s.norm_sqr());
    let mut lhs = compact_norm_sqr::<G>(&f.u, band)? * norm(&f.v)? * norm(&f.w)?;
    if let Some(r) = &f.r {
        lhs *= norm(r)?;
    }
    let rhs = kna_transform(f, band, grid)?.energy();
    Ok(PlancherelCheck::new(lhs, rhs))
}

pub fn plancherel_sl4_check(
    f: &SeparableKna<Sl4Kna>,
    band: <Sl4Kna as KnaGroup>::Band,
    grid: &KnaGrid,
) -> Result<PlancherelCheck, KnaError> {
    if f.r.is_some() {
        return Err(KnaError::UnexpectedTranslation);
    }
    plancherel_kna_check(f, band, grid)
}

pub fn sp4_restrict_check(
    f: &SeparableKna<super::family::Sp4Kna>,
    m_max: u32,
    grid: &KnaGrid,
) -> Result<PlancherelCheck, KnaError> {
    if f.r.is_some() {
        return Err(KnaError::UnexpectedTranslation);
    }
    plancherel_kna_check(f, m_max, grid)
}

pub fn plancherel_p_check(
    f: &SeparableKna<Sl4Kna>,
    band: <Sl4Kna as KnaGroup>::Band,
    grid: &KnaGrid,
) -> Result<PlancherelCheck, KnaError> {
    if f.r.is_none() {
        return Err(KnaError::MissingTranslation);
    }
    plancherel_kna_check(f, band, grid)
}
