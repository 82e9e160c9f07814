use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::groups::NilPoint6;

/// `Σ_p c_p Π_a (x_a − μ_a)^{k_pa} · exp(−Σ_a (x_a − μ_a)²/2σ_a²)` on ℝ⁶,
/// coordinates in the order (x1, …, x6). Every term is a product of 1-D
/// factors, which is what the separable code paths exploit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussPoly {
    pub mu: [f64; 6],
    pub sigma: [f64; 6],
    pub terms: Vec<(Complex64, [u8; 6])>,
}

impl GaussPoly {
    pub fn gaussian(mu: [f64; 6], sigma: [f64; 6]) -> Self {
        Self {
            mu,
            sigma,
            terms: vec![(Complex64::new(1.0, 0.0), [0; 6])],
        }
    }

    /// A random member of the test corpus: `σ_a ∈ [σ_lo, σ_hi]`,
    /// `|μ_a| ≤ mu_max`, the constant term plus up to three monomials of
    /// total degree ≤ 2 with random complex coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, sigma: (f64, f64), mu_max: f64) -> Self {
        let mut mu = [0.0; 6];
        let mut s = [0.0; 6];
        for a in 0..6 {
            mu[a] = rng.random_range(-mu_max..=mu_max);
            s[a] = rng.random_range(sigma.0..=sigma.1);
        }
        let mut terms = vec![(Complex64::new(1.0, 0.0), [0; 6])];
        for _ in 0..rng.random_range(0..=3) {
            let mut k = [0u8; 6];
            for _ in 0..rng.random_range(1..=2) {
                k[rng.random_range(0..6)] += 1;
            }
            let c = Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            terms.push((c, k));
        }
        Self {
            mu,
            sigma: s,
            terms,
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.im == 0.0)
    }

    /// `(x − μ_a)^k e^{−(x − μ_a)²/2σ_a²}`.
    pub fn factor(&self, axis: usize, power: u8, x: f64) -> f64 {
        let u = x - self.mu[axis];
        let s = self.sigma[axis];
        u.powi(power as i32) * (-0.5 * u * u / (s * s)).exp()
    }

    pub fn eval_array(&self, x: &[f64; 6]) -> Complex64 {
        let mut q = 0.0;
        let mut u = [0.0; 6];
        for a in 0..6 {
            u[a] = x[a] - self.mu[a];
            q += u[a] * u[a] / (self.sigma[a] * self.sigma[a]);
        }
        let env = (-0.5 * q).exp();
        let mut poly = Complex64::new(0.0, 0.0);
        for (c, k) in &self.terms {
            let mono: f64 = (0..6).map(|a| u[a].powi(k[a] as i32)).product();
            poly += c * mono;
        }
        poly * env
    }

    pub fn eval(&self, p: &NilPoint6) -> Complex64 {
        self.eval_array(&p.to_array())
    }

    /// `∫ exp(−Σ u²/2σ²)`, the mass of the envelope.
    pub fn envelope_mass(&self) -> f64 {
        self.sigma.iter().map(|s| s * (2.0 * PI).sqrt()).product()
    }

    /// Centre and width of the Gaussian envelope of `self·conj(other)`.
    pub fn product_envelope(&self, other: &Self) -> ([f64; 6], [f64; 6]) {
        let mut mu = [0.0; 6];
        let mut sigma = [0.0; 6];
        for a in 0..6 {
            let (p, q) = (self.sigma[a].powi(-2), other.sigma[a].powi(-2));
            sigma[a] = (p + q).powf(-0.5);
            mu[a] = (p * self.mu[a] + q * other.mu[a]) / (p + q);
        }
        (mu, sigma)
    }
}

type DenseFn = Arc<dyn Fn(&[f64; 6]) -> Complex64 + Send + Sync>;

/// A function on ℝ⁶ ≅ N: either separable-by-terms or an arbitrary closure
/// that can only be sampled.
#[derive(Clone)]
pub enum TestFn {
    Separable(GaussPoly),
    Dense { name: String, f: DenseFn },
}

impl fmt::Debug for TestFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFn::Separable(g) => f.debug_tuple("Separable").field(g).finish(),
            TestFn::Dense { name, .. } => f.debug_struct("Dense").field("name", name).finish(),
        }
    }
}

impl TestFn {
    pub fn dense<F>(name: &str, f: F) -> Self
    where
        F: Fn(&[f64; 6]) -> Complex64 + Send + Sync + 'static,
    {
        TestFn::Dense {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    /// `exp(−½ XᵀAX)·(1 + ½ tanh(x1·x4 + x2·x6))` with a fixed non-diagonal
    /// positive definite `A`; smooth, rapidly decaying, and not a finite sum
    /// of separable terms.
    pub fn skew_bump() -> Self {
        const A: [[f64; 6]; 6] = [
            [1.0, 0.3, 0.0, 0.1, 0.0, 0.0],
            [0.3, 1.2, 0.2, 0.0, 0.0, 0.1],
            [0.0, 0.2, 0.9, 0.0, 0.2, 0.0],
            [0.1, 0.0, 0.0, 1.1, 0.3, 0.0],
            [0.0, 0.0, 0.2, 0.3, 1.0, 0.2],
            [0.0, 0.1, 0.0, 0.0, 0.2, 0.8],
        ];
        Self::dense("skew-bump", |x| {
            let mut q = 0.0;
            for i in 0..6 {
                for j in 0..6 {
                    q += x[i] * A[i][j] * x[j];
                }
            }
            let mod_ = 1.0 + 0.5 * (x[0] * x[3] + x[1] * x[5]).tanh();
            Complex64::new((-0.5 * q).exp() * mod_, 0.0)
        })
    }

    pub fn eval_array(&self, x: &[f64; 6]) -> Complex64 {
        match self {
            TestFn::Separable(g) => g.eval_array(x),
            TestFn::Dense { f, .. } => f(x),
        }
    }

    pub fn eval(&self, p: &NilPoint6) -> Complex64 {
        self.eval_array(&p.to_array())
    }

    pub fn name(&self) -> String {
        match self {
            TestFn::Separable(_) => "gauss-poly".into(),
            TestFn::Dense { name, .. } => name.clone(),
        }
    }
}
