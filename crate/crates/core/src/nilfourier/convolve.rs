use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::groups::{l_inv_with, l_mul_with, nil_inv, nil_mul, LLaw, LPoint9, NilPoint6};
use crate::quadrature::{indexed_sum, monte_carlo_multi, Axis, GaussianSampler, GridSpec};

use super::lift::LiftedFunction;
use super::testfn::GaussPoly;
use super::NilFourierError;

/// How the integration variable of `(φ∗f)(h) = ∫ f(g⁻¹h) φ(g) dg` is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Substitution {
    /// Integrate over `g` as written.
    Direct,
    /// Substitute `g = k⁻¹` (Haar measure on N is inversion invariant):
    /// `∫ f(k·h) φ(k⁻¹) dk`.
    Inverted,
}

#[derive(Debug, Clone)]
pub enum ConvMethod {
    /// Tensor quadrature over the integration variable.
    Grid(GridSpec),
    MonteCarlo {
        sampler: GaussianSampler,
        n: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvValue {
    pub value: Complex64,
    /// Reported for Monte Carlo only.
    pub stderr: Option<f64>,
}

/// A uniform box grid on ℝ⁶ in (x1, …, x6) order.
pub fn box_grid(
    lo: [f64; 6],
    hi: [f64; 6],
    count: usize,
    budget: usize,
) -> Result<GridSpec, NilFourierError> {
    let axes = (0..6)
        .map(|a| Axis::uniform_box(&format!("x{}", a + 1), lo[a], hi[a], count))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridSpec::new(axes, budget)?)
}

/// A box `μ ± half_widths·σ` around a Gaussian envelope.
pub fn envelope_grid(
    mu: [f64; 6],
    sigma: [f64; 6],
    half_widths: f64,
    count: usize,
    budget: usize,
) -> Result<GridSpec, NilFourierError> {
    let lo = std::array::from_fn(|a| mu[a] - half_widths * sigma[a]);
    let hi = std::array::from_fn(|a| mu[a] + half_widths * sigma[a]);
    box_grid(lo, hi, count, budget)
}

pub fn envelope_sampler(
    mu: [f64; 6],
    sigma: [f64; 6],
    widen: f64,
) -> Result<GaussianSampler, NilFourierError> {
    let s: Vec<f64> = sigma.iter().map(|v| v * widen).collect();
    Ok(GaussianSampler::diagonal(mu.to_vec(), &s)?)
}

fn integrate_grid<F>(grid: &GridSpec, integrand: F) -> Complex64
where
    F: Fn(&NilPoint6) -> Complex64 + Sync,
{
    let tables = grid.node_tables();
    indexed_sum(grid.len(), |i| {
        let mut x = [0.0; 6];
        let w = tables.point(i, &mut x);
        integrand(&NilPoint6::from_array(x)) * w
    })
}

/// `(φ∗f)(h) = ∫_N f(g⁻¹h) φ(g) dg` with group operations from the
/// coordinate law.
pub fn convolve_n<P, F>(
    phi: P,
    f: F,
    at: &NilPoint6,
    method: &ConvMethod,
    sub: Substitution,
) -> Result<ConvValue, NilFourierError>
where
    P: Fn(&NilPoint6) -> Complex64 + Sync,
    F: Fn(&NilPoint6) -> Complex64 + Sync,
{
    let integrand = |g: &NilPoint6| match sub {
        Substitution::Direct => f(&nil_mul(&nil_inv(g), at)) * phi(g),
        Substitution::Inverted => f(&nil_mul(g, at)) * phi(&nil_inv(g)),
    };
    match method {
        ConvMethod::Grid(grid) => {
            if grid.dim() != 6 {
                return Err(NilFourierError::Dimension(grid.dim()));
            }
            Ok(ConvValue {
                value: integrate_grid(grid, integrand),
                stderr: None,
            })
        }
        ConvMethod::MonteCarlo { sampler, n, seed } => {
            if sampler.dim() != 6 {
                return Err(NilFourierError::Dimension(sampler.dim()));
            }
            let est = monte_carlo_multi(
                |x, out| {
                    out[0] = integrand(&NilPoint6::from_array(x[..6].try_into().expect("6 coords")))
                },
                1,
                sampler,
                *n,
                *seed,
            )?;
            Ok(ConvValue {
                value: est[0].estimate,
                stderr: Some(est[0].stderr),
            })
        }
    }
}

/// Both sides of the L-convolution equality at one point of L.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvEqualityPoint {
    pub point: LPoint9,
    /// `u∗F`: the group convolution over the embedded copy of N.
    pub lhs: Complex64,
    /// `u∗_cF`: the commutative convolution in `(x, x3, x2, x1)`.
    pub rhs: Complex64,
    pub rel_err: f64,
    pub lhs_stderr: f64,
    pub rhs_stderr: f64,
    /// Standard error of the paired difference (common random numbers).
    pub diff_stderr: f64,
}

/// `u∗F(X) = ∫_N F(n⁻¹·X) u(n) dn` (product in L, `n` embedded through the
/// `(x, t3, t2, t1)` slots) against
/// `u∗_cF(X) = ∫ F(x − y, x3 − y3, x2 − y2, t3, t2, x1 − s, t1) u(y, y3, y2, s)`,
/// for `F` the lift of `f`. One Monte Carlo sample set, drawn around `u`,
/// serves every point and both sides.
pub fn convolution_equality_check<F>(
    u: &GaussPoly,
    lifted: &LiftedFunction<F>,
    points: &[LPoint9],
    law: LLaw,
    n: usize,
    seed: u64,
) -> Result<Vec<ConvEqualityPoint>, NilFourierError>
where
    F: Fn(&NilPoint6) -> Complex64 + Sync,
{
    let sampler = envelope_sampler(u.mu, u.sigma, 1.2)?;
    let np = points.len();
    let est = monte_carlo_multi(
        |x, out| {
            let m = NilPoint6::from_array(x[..6].try_into().expect("6 coords"));
            let w = u.eval(&m);
            let emb = LPoint9::from_nil(&m);
            for (i, p) in points.iter().enumerate() {
                let a = lifted.eval(&l_mul_with(law, &l_inv_with(law, &emb), p)) * w;
                let shifted = LPoint9 {
                    x6: p.x6 - m.x6,
                    x5: p.x5 - m.x5,
                    x4: p.x4 - m.x4,
                    x3: p.x3 - m.x3,
                    x2: p.x2 - m.x2,
                    x1: p.x1 - m.x1,
                    ..*p
                };
                let b = lifted.eval(&shifted) * w;
                out[3 * i] = a;
                out[3 * i + 1] = b;
                out[3 * i + 2] = a - b;
            }
        },
        3 * np,
        &sampler,
        n,
        seed,
    )?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (a, b, d) = (&est[3 * i], &est[3 * i + 1], &est[3 * i + 2]);
            ConvEqualityPoint {
                point: *p,
                lhs: a.estimate,
                rhs: b.estimate,
                rel_err: d.estimate.norm() / a.estimate.norm().max(f64::MIN_POSITIVE),
                lhs_stderr: a.stderr,
                rhs_stderr: b.stderr,
                diff_stderr: d.stderr,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssociativityCheck {
    /// `φ∗(ψ∗f)(h)`.
    pub inner_first: Complex64,
    /// `(φ∗ψ)∗f(h)`.
    pub outer_first: Complex64,
    pub rel_err: f64,
    pub stderr: f64,
}

/// Both nestings of a triple convolution as 12-dimensional integrals over
/// `(g, k)` sampled around `φ ⊗ ψ`:
/// `φ∗(ψ∗f)(h) = ∫∫ f(k⁻¹·(g⁻¹·h)) ψ(k) φ(g)` and, with `m = g·k`,
/// `(φ∗ψ)∗f(h) = ∫∫ f(m⁻¹·h) ψ(g⁻¹·m) φ(g)`.
pub fn associativity_check<P, Q, F>(
    phi: (&P, &GaussPoly),
    psi: (&Q, &GaussPoly),
    f: &F,
    at: &NilPoint6,
    n: usize,
    seed: u64,
) -> Result<AssociativityCheck, NilFourierError>
where
    P: Fn(&NilPoint6) -> Complex64 + Sync,
    Q: Fn(&NilPoint6) -> Complex64 + Sync,
    F: Fn(&NilPoint6) -> Complex64 + Sync,
{
    let mut mean = phi.1.mu.to_vec();
    mean.extend_from_slice(&psi.1.mu);
    let sig: Vec<f64> = phi
        .1
        .sigma
        .iter()
        .chain(&psi.1.sigma)
        .map(|s| 1.2 * s)
        .collect();
    let cov = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        12,
        sig.iter().map(|s| s * s),
    ));
    let sampler = GaussianSampler::new(mean, cov)?;
    let est = monte_carlo_multi(
        |x, out| {
            let g = NilPoint6::from_array(x[..6].try_into().expect("6 coords"));
            let k = NilPoint6::from_array(x[6..].try_into().expect("6 coords"));
            let pg = (phi.0)(&g);
            out[0] = f(&nil_mul(&nil_inv(&k), &nil_mul(&nil_inv(&g), at))) * (psi.0)(&k) * pg;
            let m = nil_mul(&g, &k);
            out[1] = f(&nil_mul(&nil_inv(&m), at)) * (psi.0)(&nil_mul(&nil_inv(&g), &m)) * pg;
        },
        2,
        &sampler,
        n,
        seed,
    )?;
    Ok(AssociativityCheck {
        inner_first: est[0].estimate,
        outer_first: est[1].estimate,
        rel_err: (est[0].estimate - est[1].estimate).norm()
            / est[0].estimate.norm().max(f64::MIN_POSITIVE),
        stderr: est[0].stderr,
    })
}
