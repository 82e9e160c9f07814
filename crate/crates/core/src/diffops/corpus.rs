use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::expr::OpExpr;
use super::jet::Jet;
use super::poly::Exp;

/// A smooth function on ℝ³ (variables `(z, y, x)`) with exact jets.
pub trait JetFunction: Send + Sync {
    fn name(&self) -> String;

    /// Point value, computed in closed form independently of the jet code.
    fn value(&self, p: &[f64; 3]) -> Complex64;

    /// Taylor jet at `p` through total degree `degree ≤ 4`.
    fn jet(&self, p: &[f64; 3], degree: u8) -> Jet;
}

fn linear_jet(p: &[f64; 3], degree: u8, c0: Complex64, grad: [Complex64; 3]) -> Jet {
    let mut j = Jet::constant(*p, degree, c0);
    for v in 0..3 {
        j = &j
            + &(&Jet::variable(*p, degree, v)
                - &Jet::constant(*p, degree, Complex64::new(p[v], 0.0)))
                .scale(grad[v]);
    }
    j
}

/// `A·e^{i⟨k, p⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave {
    pub amplitude: Complex64,
    pub k: [f64; 3],
}

impl JetFunction for PlaneWave {
    fn name(&self) -> String {
        format!("plane wave k={:?}", self.k)
    }

    fn value(&self, p: &[f64; 3]) -> Complex64 {
        let phase: f64 = (0..3).map(|v| self.k[v] * p[v]).sum();
        self.amplitude * Complex64::from_polar(1.0, phase)
    }

    fn jet(&self, p: &[f64; 3], degree: u8) -> Jet {
        let i = Complex64::new(0.0, 1.0);
        let phase: f64 = (0..3).map(|v| self.k[v] * p[v]).sum();
        let grad = std::array::from_fn(|v| i * self.k[v]);
        linear_jet(p, degree, i * phase, grad)
            .exp()
            .scale(self.amplitude)
    }
}

/// `exp(−Σ (p_v − c_v)²/(2w_v²) + i⟨k, p⟩)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub center: [f64; 3],
    pub width: [f64; 3],
    pub k: [f64; 3],
}

impl Gaussian {
    fn exponent(&self, p: &[f64; 3]) -> Complex64 {
        let mut e = Complex64::new(0.0, 0.0);
        for v in 0..3 {
            let d = p[v] - self.center[v];
            e += Complex64::new(
                -d * d / (2.0 * self.width[v] * self.width[v]),
                self.k[v] * p[v],
            );
        }
        e
    }

    fn exponent_jet(&self, p: &[f64; 3], degree: u8) -> Jet {
        let mut j = Jet::zero(*p, degree);
        for v in 0..3 {
            let d = &Jet::variable(*p, degree, v)
                - &Jet::constant(*p, degree, Complex64::new(self.center[v], 0.0));
            let quad = (&d * &d).scale(Complex64::new(-0.5 / (self.width[v] * self.width[v]), 0.0));
            j = &(&j + &quad) + &Jet::variable(*p, degree, v).scale(Complex64::new(0.0, self.k[v]));
        }
        j
    }
}

impl JetFunction for Gaussian {
    fn name(&self) -> String {
        format!("gaussian c={:?} w={:?}", self.center, self.width)
    }

    fn value(&self, p: &[f64; 3]) -> Complex64 {
        self.exponent(p).exp()
    }

    fn jet(&self, p: &[f64; 3], degree: u8) -> Jet {
        self.exponent_jet(p, degree).exp()
    }
}

/// A [`Gaussian`] times `Σ c·(p − center)^e`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussPoly {
    pub gauss: Gaussian,
    pub terms: Vec<(Complex64, Exp)>,
}

impl JetFunction for GaussPoly {
    fn name(&self) -> String {
        format!(
            "{} × polynomial ({} terms)",
            self.gauss.name(),
            self.terms.len()
        )
    }

    fn value(&self, p: &[f64; 3]) -> Complex64 {
        let c = &self.gauss.center;
        let poly: Complex64 = self
            .terms
            .iter()
            .map(|(a, e)| {
                *a * (0..3)
                    .map(|v| (p[v] - c[v]).powi(e[v] as i32))
                    .product::<f64>()
            })
            .sum();
        poly * self.gauss.value(p)
    }

    fn jet(&self, p: &[f64; 3], degree: u8) -> Jet {
        let c = &self.gauss.center;
        let d: [Jet; 3] = std::array::from_fn(|v| {
            &Jet::variable(*p, degree, v) - &Jet::constant(*p, degree, Complex64::new(c[v], 0.0))
        });
        let mut poly = Jet::zero(*p, degree);
        for (a, e) in &self.terms {
            let mut t = Jet::constant(*p, degree, *a);
            for v in 0..3 {
                for _ in 0..e[v] {
                    t = &t * &d[v];
                }
            }
            poly = &poly + &t;
        }
        &poly * &self.gauss.jet(p, degree)
    }
}

/// `expr·base`, itself jet-evaluable to degree `4 − expr.order()`.
#[derive(Clone)]
pub struct Applied {
    pub expr: OpExpr,
    pub base: Arc<dyn JetFunction>,
}

impl Applied {
    pub fn new(expr: OpExpr, base: Arc<dyn JetFunction>) -> Self {
        Self { expr, base }
    }
}

impl JetFunction for Applied {
    fn name(&self) -> String {
        format!("{} applied to {}", self.expr, self.base.name())
    }

    fn value(&self, p: &[f64; 3]) -> Complex64 {
        self.expr
            .eval_jet(self.base.as_ref(), p, 0)
            .map(|j| j.value())
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn jet(&self, p: &[f64; 3], degree: u8) -> Jet {
        self.expr
            .eval_jet(self.base.as_ref(), p, degree)
            .expect("degree plus expression order within the jet degree")
    }
}

fn vec3(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> [f64; 3] {
    std::array::from_fn(|_| rng.random_range(lo..hi))
}

/// Ten functions: three plane waves, three Gaussians with phases, four
/// Gaussian × polynomial products. Parameters are drawn from `seed`.
pub fn standard_corpus(seed: u64) -> Vec<Arc<dyn JetFunction>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out: Vec<Arc<dyn JetFunction>> = Vec::new();
    for _ in 0..3 {
        let amplitude = Complex64::new(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5));
        out.push(Arc::new(PlaneWave {
            amplitude,
            k: vec3(&mut rng, -2.0, 2.0),
        }));
    }
    let gaussian = |rng: &mut ChaCha20Rng| Gaussian {
        center: vec3(rng, -0.5, 0.5),
        width: vec3(rng, 0.6, 1.5),
        k: vec3(rng, -1.5, 1.5),
    };
    for _ in 0..3 {
        out.push(Arc::new(gaussian(&mut rng)));
    }
    for _ in 0..4 {
        let g = gaussian(&mut rng);
        let n = rng.random_range(2..=4);
        let terms = (0..n)
            .map(|_| {
                let e: Exp = std::array::from_fn(|_| rng.random_range(0..=2));
                (
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    e,
                )
            })
            .collect();
        out.push(Arc::new(GaussPoly { gauss: g, terms }));
    }
    out
}

/// `count` points uniform in `[−1, 1]³`.
pub fn random_points(seed: u64, count: usize) -> Vec<[f64; 3]> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
        .collect()
}
