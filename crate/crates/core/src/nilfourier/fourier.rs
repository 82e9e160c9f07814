use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::groups::{nil_inv, NilPoint6};
use crate::quadrature::{
    dft_forward, monte_carlo, Axis, GaussianSampler, GridSpec, SampledField, Spectrum,
};

use super::convolve::{convolve_n, envelope_grid, envelope_sampler, ConvMethod, Substitution};
use super::testfn::{GaussPoly, TestFn};
use super::NilFourierError;

/// The coordinate transform on N is the Euclidean one on ℝ⁶.
pub type SpectrumN = Spectrum;

/// `(2π)^{−6}`.
pub const SPECTRAL_CONSTANT_N: f64 = 1.0 / (64.0 * PI * PI * PI * PI * PI * PI);

pub fn sample_n(f: &TestFn, grid: &GridSpec) -> SampledField {
    SampledField::from_fn(grid.clone(), |x| {
        f.eval_array(x.try_into().expect("six axes"))
    })
}

/// `𝓕f(ξ) = ∫ f(X) e^{−i⟨ξ,X⟩} dX` on all axes of the grid.
pub fn fourier_n(f: &SampledField) -> Result<SpectrumN, NilFourierError> {
    let axes: Vec<usize> = (0..f.grid().dim()).collect();
    Ok(dft_forward(f, &axes)?)
}

/// 1-D boxes `[min(μ − wσ), max(μ + wσ))` per axis covering every function.
pub fn separable_axes(
    fns: &[&GaussPoly],
    half_widths: f64,
    count: usize,
) -> Result<Vec<Axis>, NilFourierError> {
    (0..6)
        .map(|a| {
            let lo = fns
                .iter()
                .map(|g| g.mu[a] - half_widths * g.sigma[a])
                .fold(f64::INFINITY, f64::min);
            let hi = fns
                .iter()
                .map(|g| g.mu[a] + half_widths * g.sigma[a])
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(Axis::uniform_box(&format!("x{}", a + 1), lo, hi, count)?)
        })
        .collect()
}

fn one_axis_field(
    axis: &Axis,
    values: impl Fn(f64) -> f64 + Sync,
) -> Result<SampledField, NilFourierError> {
    let grid = GridSpec::new(vec![axis.clone()], usize::MAX)?;
    Ok(SampledField::from_fn(grid, |x| {
        Complex64::new(values(x[0]), 0.0)
    }))
}

/// Spectrum of a [`GaussPoly`] kept in factored form: one 1-D spectrum per
/// term and axis.
#[derive(Debug, Clone)]
pub struct SeparableSpectrum {
    pub spatial: Vec<Axis>,
    pub freq: Vec<Axis>,
    pub terms: Vec<(Complex64, Vec<Vec<Complex64>>)>,
}

pub fn fourier_separable(
    g: &GaussPoly,
    axes: &[Axis],
) -> Result<SeparableSpectrum, NilFourierError> {
    if axes.len() != 6 {
        return Err(NilFourierError::Dimension(axes.len()));
    }
    let mut freq = Vec::new();
    let mut terms = Vec::new();
    for (c, k) in &g.terms {
        let mut per_axis = Vec::with_capacity(6);
        for a in 0..6 {
            let field = one_axis_field(&axes[a], |x| g.factor(a, k[a], x))?;
            let s = dft_forward(&field, &[0])?;
            if freq.len() < 6 {
                freq.push(s.field.grid().axes[0].clone());
            }
            per_axis.push(s.field.into_values());
        }
        terms.push((*c, per_axis));
    }
    if freq.is_empty() {
        freq = axes.iter().map(crate::quadrature::frequency_axis).collect();
    }
    Ok(SeparableSpectrum {
        spatial: axes.to_vec(),
        freq,
        terms,
    })
}

impl SeparableSpectrum {
    pub fn value_at(&self, idx: &[usize; 6]) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, f)| c * (0..6).map(|a| f[a][idx[a]]).product::<Complex64>())
            .sum()
    }

    /// `(2π)^{−6} ∫ 𝓕f·conj(𝓕g) dξ`, factor by factor.
    pub fn inner(&self, other: &Self) -> Result<Complex64, NilFourierError> {
        if self.freq != other.freq {
            return Err(NilFourierError::GridMismatch);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (cp, fp) in &self.terms {
            for (cq, fq) in &other.terms {
                let mut prod = cp * cq.conj();
                for a in 0..6 {
                    let dxi = self.freq[a].spacing();
                    let s: Complex64 = fp[a].iter().zip(&fq[a]).map(|(x, y)| x * y.conj()).sum();
                    prod *= s * dxi;
                }
                total += prod;
            }
        }
        Ok(total * SPECTRAL_CONSTANT_N)
    }

    /// Dense 6-D spectrum, for use with the general grid machinery.
    pub fn to_spectrum(&self, budget: usize) -> Result<Spectrum, NilFourierError> {
        let grid = GridSpec::new(self.freq.clone(), budget)?;
        let mut idx = [0usize; 6];
        let values = (0..grid.len())
            .map(|i| {
                grid.unravel(i, &mut idx);
                self.value_at(&idx)
            })
            .collect();
        Ok(Spectrum {
            field: SampledField::new(grid, values)?,
            transformed: (0..6).collect(),
            spatial: self.spatial.clone(),
        })
    }
}

/// `∫ f·conj(g) dX` by 1-D quadrature on the given axes.
pub fn separable_inner_space(f: &GaussPoly, g: &GaussPoly, axes: &[Axis]) -> Complex64 {
    let nodes: Vec<Vec<f64>> = axes.iter().map(Axis::nodes).collect();
    let weights: Vec<Vec<f64>> = axes.iter().map(Axis::weights).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (cp, kp) in &f.terms {
        for (cq, kq) in &g.terms {
            let mut prod = cp * cq.conj();
            for a in 0..6 {
                let s: f64 = nodes[a]
                    .iter()
                    .zip(&weights[a])
                    .map(|(&x, &w)| w * f.factor(a, kp[a], x) * g.factor(a, kq[a], x))
                    .sum();
                prod *= s;
            }
            total += prod;
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlancherelMethod {
    Separable,
    Grid,
    /// Norm side by Monte Carlo, spectral side on the largest grid within
    /// budget.
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NilPlancherel {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub method: PlancherelMethod,
    pub stderr: Option<f64>,
}

fn rel(lhs: f64, rhs: f64) -> f64 {
    let d = (lhs - rhs).abs();
    if lhs == 0.0 {
        d
    } else {
        d / lhs.abs()
    }
}

pub fn plancherel_n_separable(
    g: &GaussPoly,
    axes: &[Axis],
) -> Result<NilPlancherel, NilFourierError> {
    let lhs = separable_inner_space(g, g, axes).re;
    let s = fourier_separable(g, axes)?;
    let rhs = s.inner(&s)?.re;
    Ok(NilPlancherel {
        lhs,
        rhs,
        rel_err: rel(lhs, rhs),
        method: PlancherelMethod::Separable,
        stderr: None,
    })
}

/// `∫|f|²` and `(2π)^{−6}∫|𝓕f|²`, both on the 6-D grid.
pub fn plancherel_n_grid(f: &TestFn, grid: &GridSpec) -> Result<NilPlancherel, NilFourierError> {
    let field = sample_n(f, grid);
    let lhs = field.norm_sqr();
    let rhs = fourier_n(&field)?.field.norm_sqr() * SPECTRAL_CONSTANT_N;
    Ok(NilPlancherel {
        lhs,
        rhs,
        rel_err: rel(lhs, rhs),
        method: PlancherelMethod::Grid,
        stderr: None,
    })
}

/// Box, resolution and fallback settings for the Plancherel check.
#[derive(Debug, Clone, Serialize)]
pub struct PlancherelConfig {
    pub lo: f64,
    pub hi: f64,
    /// Points per axis of the 6-D grid.
    pub count: usize,
    /// Points per axis for the separable (1-D) path.
    pub separable_count: usize,
    pub budget: usize,
    pub mc_samples: usize,
    pub mc_sigma: f64,
    pub seed: u64,
}

impl Default for PlancherelConfig {
    fn default() -> Self {
        Self {
            lo: -5.0,
            hi: 5.0,
            count: 12,
            separable_count: 512,
            budget: crate::quadrature::DEFAULT_GRID_BUDGET,
            mc_samples: 200_000,
            mc_sigma: 1.2,
            seed: 0,
        }
    }
}

/// Separable functions use the 1-D path. Others use the 6-D grid when
/// `count⁶` fits the budget and otherwise fall back to Monte Carlo for the
/// norm side.
pub fn plancherel_n_check(
    f: &TestFn,
    cfg: &PlancherelConfig,
) -> Result<NilPlancherel, NilFourierError> {
    if let TestFn::Separable(g) = f {
        let axes = separable_axes(&[g], 10.0, cfg.separable_count)?;
        return plancherel_n_separable(g, &axes);
    }
    let full = cfg.count.checked_pow(6).unwrap_or(usize::MAX);
    if full <= cfg.budget {
        let grid = super::convolve::box_grid([cfg.lo; 6], [cfg.hi; 6], cfg.count, cfg.budget)?;
        return plancherel_n_grid(f, &grid);
    }
    let coarse = (cfg.budget as f64).powf(1.0 / 6.0).floor() as usize;
    if coarse < 2 {
        return Err(crate::quadrature::QuadError::BudgetExceeded {
            requested: 64,
            budget: cfg.budget,
        }
        .into());
    }
    let grid = super::convolve::box_grid([cfg.lo; 6], [cfg.hi; 6], coarse, cfg.budget)?;
    let rhs = fourier_n(&sample_n(f, &grid))?.field.norm_sqr() * SPECTRAL_CONSTANT_N;
    let sampler = GaussianSampler::isotropic(vec![0.0; 6], cfg.mc_sigma)?;
    let est = monte_carlo(
        |x| {
            Complex64::new(
                f.eval_array(x.try_into().expect("six coords")).norm_sqr(),
                0.0,
            )
        },
        &sampler,
        cfg.mc_samples,
        cfg.seed,
    )?;
    let lhs = est.estimate.re;
    Ok(NilPlancherel {
        lhs,
        rhs,
        rel_err: rel(lhs, rhs),
        method: PlancherelMethod::MonteCarlo,
        stderr: Some(est.stderr),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BilinearMethod {
    /// 6-D grid of `count` points per axis around the envelope of `f·conj(φ)`.
    Grid {
        count: usize,
        budget: usize,
    },
    MonteCarlo {
        n: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilinearCheck {
    /// `(φ̌∗f)(0)` with `φ̌(X) = conj(φ(X⁻¹))`.
    pub lhs: Complex64,
    /// `(2π)^{−6} ∫ 𝓕f·conj(𝓕φ) dξ`.
    pub rhs: Complex64,
    pub rel_err: f64,
    pub stderr: Option<f64>,
}

impl BilinearCheck {
    /// Distance between the sides in reported standard errors (Monte Carlo
    /// only).
    pub fn z_score(&self) -> Option<f64> {
        self.stderr.map(|s| (self.lhs - self.rhs).norm() / s)
    }
}

/// The bilinear identity `(φ̌∗f)(0) = (2π)^{−6}∫ 𝓕f·conj(𝓕φ)`. The left
/// side is a genuine group convolution evaluated at the identity (in the
/// inverted substitution, so that the integration variable stays where `φ`
/// lives); the right side multiplies 1-D spectra.
pub fn bilinear_identity_check(
    f: &GaussPoly,
    phi: &GaussPoly,
    method: BilinearMethod,
) -> Result<BilinearCheck, NilFourierError> {
    let phi_check = |x: &NilPoint6| phi.eval(&nil_inv(x)).conj();
    let fe = |x: &NilPoint6| f.eval(x);
    let (mu, sigma) = f.product_envelope(phi);
    let conv = match method {
        BilinearMethod::Grid { count, budget } => {
            ConvMethod::Grid(envelope_grid(mu, sigma, 7.0, count, budget)?)
        }
        BilinearMethod::MonteCarlo { n, seed } => ConvMethod::MonteCarlo {
            sampler: envelope_sampler(mu, sigma, 1.3)?,
            n,
            seed,
        },
    };
    let lhs = convolve_n(
        phi_check,
        fe,
        &NilPoint6::IDENTITY,
        &conv,
        Substitution::Inverted,
    )?;
    let axes = separable_axes(&[f, phi], 10.0, 512)?;
    let rhs = fourier_separable(f, &axes)?.inner(&fourier_separable(phi, &axes)?)?;
    Ok(BilinearCheck {
        lhs: lhs.value,
        rhs,
        rel_err: (lhs.value - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE),
        stderr: lhs.stderr,
    })
}
