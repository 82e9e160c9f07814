use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::nilfourier::GaussPoly;
use crate::quadrature::{dft_forward, transform_at, Axis, GridSpec, SampledField, Spectrum};

use super::KnaError;

/// `Σ_p c_p Π_a (x_a − μ_a)^{k_pa} · exp(−Σ_a (x_a − μ_a)²/2σ_a²)` on ℝᵈ.
///
/// The Euclidean factors of a separable function on KNA (the N part, the
/// logA part and the translation part) all have this form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclidFactor {
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub terms: Vec<(Complex64, Vec<u8>)>,
}

impl EuclidFactor {
    pub fn gaussian(mu: Vec<f64>, sigma: Vec<f64>) -> Self {
        let d = mu.len();
        assert_eq!(d, sigma.len(), "mu and sigma lengths differ");
        Self {
            mu,
            sigma,
            terms: vec![(Complex64::new(1.0, 0.0), vec![0; d])],
        }
    }

    /// The zero function, kept with a unit envelope so that grids can still
    /// be built for it.
    pub fn zero(dim: usize) -> Self {
        Self {
            mu: vec![0.0; dim],
            sigma: vec![1.0; dim],
            terms: Vec::new(),
        }
    }

    /// Constant term plus up to two random monomials of degree ≤ 2.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        dim: usize,
        sigma: (f64, f64),
        mu_max: f64,
    ) -> Self {
        let mu = (0..dim)
            .map(|_| rng.random_range(-mu_max..=mu_max))
            .collect();
        let sigma = (0..dim)
            .map(|_| rng.random_range(sigma.0..=sigma.1))
            .collect();
        let mut terms = vec![(Complex64::new(1.0, 0.0), vec![0; dim])];
        for _ in 0..rng.random_range(0..=2) {
            let mut k = vec![0u8; dim];
            for _ in 0..rng.random_range(1..=2) {
                k[rng.random_range(0..dim)] += 1;
            }
            let c = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            terms.push((c, k));
        }
        Self { mu, sigma, terms }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for (c, _) in &mut out.terms {
            *c *= s;
        }
        out
    }

    /// `(x − μ_a)^k e^{−(x − μ_a)²/2σ_a²}`.
    pub fn basis(&self, axis: usize, power: u8, x: f64) -> f64 {
        let u = x - self.mu[axis];
        let s = self.sigma[axis];
        u.powi(power as i32) * (-0.5 * u * u / (s * s)).exp()
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.dim());
        let mut env = 0.0;
        for a in 0..self.dim() {
            let u = (x[a] - self.mu[a]) / self.sigma[a];
            env += u * u;
        }
        let env = (-0.5 * env).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, k) in &self.terms {
            let mut m = 1.0;
            for a in 0..self.dim() {
                m *= (x[a] - self.mu[a]).powi(k[a] as i32);
            }
            acc += c * m;
        }
        acc * env
    }

    fn powers(&self, axis: usize) -> Vec<u8> {
        let mut p: Vec<u8> = self.terms.iter().map(|(_, k)| k[axis]).collect();
        p.sort_unstable();
        p.dedup();
        if p.is_empty() {
            p.push(0);
        }
        p
    }

    /// Samples every 1-D basis factor on a uniform box of `±half_width·σ_a`
    /// around `μ_a` with `count` nodes.
    pub fn sample(&self, half_width: f64, count: usize) -> Result<SampledFactor, KnaError> {
        let mut axes = Vec::with_capacity(self.dim());
        let mut fields = Vec::with_capacity(self.dim());
        for a in 0..self.dim() {
            let r = half_width * self.sigma[a];
            let axis = Axis::uniform_box(
                &format!("x{}", a + 1),
                self.mu[a] - r,
                self.mu[a] + r,
                count,
            )?;
            let grid = GridSpec::new(vec![axis.clone()], usize::MAX)?;
            let mut per = BTreeMap::new();
            for p in self.powers(a) {
                let field = SampledField::from_fn(grid.clone(), |x| {
                    Complex64::new(self.basis(a, p, x[0]), 0.0)
                });
                per.insert(p, field);
            }
            axes.push(axis);
            fields.push(per);
        }
        Ok(SampledFactor {
            factor: self.clone(),
            axes,
            fields,
        })
    }
}

impl From<&GaussPoly> for EuclidFactor {
    fn from(g: &GaussPoly) -> Self {
        Self {
            mu: g.mu.to_vec(),
            sigma: g.sigma.to_vec(),
            terms: g.terms.iter().map(|(c, k)| (*c, k.to_vec())).collect(),
        }
    }
}

/// A factor sampled axis by axis: one 1-D field per axis and per power that
/// occurs on that axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFactor {
    pub factor: EuclidFactor,
    pub axes: Vec<Axis>,
    fields: Vec<BTreeMap<u8, SampledField>>,
}

/// `Σ_{p,q} c_p c̄_q Π_a g_a(p_a, q_a)`.
fn gram_sum<F>(terms: &[(Complex64, Vec<u8>)], dim: usize, mut pair: F) -> Complex64
where
    F: FnMut(usize, u8, u8) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (cp, kp) in terms {
        for (cq, kq) in terms {
            let mut m = cp * cq.conj();
            for a in 0..dim {
                m *= pair(a, kp[a], kq[a]);
            }
            acc += m;
        }
    }
    acc
}

impl SampledFactor {
    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn field(&self, axis: usize, power: u8) -> &SampledField {
        &self.fields[axis][&power]
    }

    /// `∫ |v|² dx` by the 1-D rules, combined term by term.
    pub fn norm_sqr(&self) -> f64 {
        gram_sum(&self.factor.terms, self.dim(), |a, p, q| {
            self.field(a, p)
                .zip_with(self.field(a, q), |x, y| x * y.conj())
                .expect("fields of one axis share a grid")
                .integrate()
        })
        .re
    }

    /// `∫ v(x) e^{−i⟨ξ,x⟩} dx` at an arbitrary frequency.
    pub fn transform_at(&self, xi: &[f64]) -> Result<Complex64, KnaError> {
        if xi.len() != self.dim() {
            return Err(KnaError::Dimension {
                expected: self.dim(),
                found: xi.len(),
            });
        }
        let mut per: Vec<BTreeMap<u8, Complex64>> = Vec::with_capacity(self.dim());
        for (a, fields) in self.fields.iter().enumerate() {
            let mut m = BTreeMap::new();
            for (p, f) in fields {
                m.insert(*p, transform_at(f, &[xi[a]])?);
            }
            per.push(m);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, k) in &self.factor.terms {
            let mut m = *c;
            for a in 0..self.dim() {
                m *= per[a][&k[a]];
            }
            acc += m;
        }
        Ok(acc)
    }

    /// DFT of every 1-D basis factor.
    pub fn spectrum(&self) -> Result<FactorSpectrum, KnaError> {
        let mut dfts = Vec::with_capacity(self.dim());
        for fields in &self.fields {
            let mut m = BTreeMap::new();
            for (p, f) in fields {
                m.insert(*p, dft_forward(f, &[0])?);
            }
            dfts.push(m);
        }
        Ok(FactorSpectrum {
            sampled: self.clone(),
            dfts,
        })
    }
}

/// The Euclidean transform of a [`SampledFactor`], held as 1-D DFTs.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpectrum {
    pub sampled: SampledFactor,
    dfts: Vec<BTreeMap<u8, Spectrum>>,
}

impl FactorSpectrum {
    pub fn dim(&self) -> usize {
        self.dfts.len()
    }

    /// The frequency axes.
    pub fn axes(&self) -> Vec<Axis> {
        self.dfts
            .iter()
            .map(|m| {
                m.values()
                    .next()
                    .expect("at least one power per axis")
                    .field
                    .grid()
                    .axes[0]
                    .clone()
            })
            .collect()
    }

    /// `(2π)^{−d} ∫ |𝓕v(ξ)|² dξ` on the frequency grid.
    pub fn norm_sqr(&self) -> f64 {
        let d = self.dim();
        let s = gram_sum(&self.sampled.factor.terms, d, |a, p, q| {
            self.dfts[a][&p]
                .field
                .zip_with(&self.dfts[a][&q].field, |x, y| x * y.conj())
                .expect("spectra of one axis share a grid")
                .integrate()
        });
        s.re * (2.0 * PI).powi(-(d as i32))
    }

    /// Value at an arbitrary frequency, from the spatial samples.
    pub fn value_at(&self, xi: &[f64]) -> Result<Complex64, KnaError> {
        self.sampled.transform_at(xi)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "spatial_axes": self.sampled.axes,
            "frequency_axes": self.axes(),
            "factor": self.sampled.factor,
        })
    }
}
