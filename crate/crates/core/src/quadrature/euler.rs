use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::legendre::gauss_legendre;
use super::QuadError;

/// A nonnegative half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(u32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_twice(twice: u32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: u32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `2j + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// ZYZ Euler angles of an SU(2) element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }
}

/// Product rule on SU(2) for the normalized Haar measure
/// `(1/32π²)·sin β dα dβ dγ`, `α, γ ∈ [0, 4π)`, `β ∈ [0, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2Quad {
    pub bandlimit: HalfInt,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub beta_weights: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl Su2Quad {
    /// Exact for products of two matrix coefficients with spins ≤ `j`.
    pub fn new(j: HalfInt) -> Self {
        let n_ang = 2 * j.twice() as usize + 1;
        let n_beta = j.twice() as usize + 1;
        let uniform = |n: usize| {
            (0..n)
                .map(|k| 4.0 * PI * k as f64 / n as f64)
                .collect::<Vec<_>>()
        };
        let (u, w) = gauss_legendre(n_beta.max(1));
        Self {
            bandlimit: j,
            alphas: uniform(n_ang),
            betas: u.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect(),
            beta_weights: w.iter().map(|v| v / 2.0).collect(),
            gammas: uniform(n_ang),
        }
    }

    pub fn len(&self) -> usize {
        self.alphas.len() * self.betas.len() * self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `i` in (α, β, γ) row-major order, with its weight.
    pub fn node(&self, i: usize) -> (EulerAngles, f64) {
        let ng = self.gammas.len();
        let nb = self.betas.len();
        let g = i % ng;
        let b = (i / ng) % nb;
        let a = i / (ng * nb);
        let w = self.beta_weights[b] / (self.alphas.len() * ng) as f64;
        (
            EulerAngles::new(self.alphas[a], self.betas[b], self.gammas[g]),
            w,
        )
    }

    pub fn nodes(&self) -> Vec<(EulerAngles, f64)> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }
}

/// Tensor-product rule on SU(2)×SU(2), the double cover of SO(4).
#[derive(Debug, Clone, PartialEq)]
pub struct EulerQuadSO4 {
    pub bandlimit: HalfInt,
    pub factor: Su2Quad,
}

/// Default cap on the number of SO(4) quadrature nodes.
pub const DEFAULT_SO4_BUDGET: usize = 2_000_000;

impl EulerQuadSO4 {
    pub fn len(&self) -> usize {
        self.factor.len() * self.factor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `i` as (left, right) Euler angles and weight.
    pub fn node(&self, i: usize) -> (EulerAngles, EulerAngles, f64) {
        let m = self.factor.len();
        let (l, wl) = self.factor.node(i / m);
        let (r, wr) = self.factor.node(i % m);
        (l, r, wl * wr)
    }
}

pub fn so4_quadrature(j: HalfInt, max_nodes: usize) -> Result<EulerQuadSO4, QuadError> {
    let factor = Su2Quad::new(j);
    let total = factor.len().saturating_mul(factor.len());
    if total > max_nodes {
        return Err(QuadError::BudgetExceeded {
            requested: total,
            budget: max_nodes,
        });
    }
    Ok(EulerQuadSO4 {
        bandlimit: j,
        factor,
    })
}

/// Rule on U(2) = (U(1)×SU(2))/±: uniform phase `φ ∈ [0, 2π)` times the SU(2)
/// rule. Exact for products of two irreps with |m1|, |m2| ≤ `m_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct U2Quad {
    pub m_max: u32,
    pub phases: Vec<f64>,
    pub factor: Su2Quad,
}

impl U2Quad {
    pub fn len(&self) -> usize {
        self.phases.len() * self.factor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `i` as (phase, SU(2) angles, weight).
    pub fn node(&self, i: usize) -> (f64, EulerAngles, f64) {
        let m = self.factor.len();
        let (e, w) = self.factor.node(i % m);
        (self.phases[i / m], e, w / self.phases.len() as f64)
    }
}

pub fn u2_quadrature(m_max: u32, max_nodes: usize) -> Result<U2Quad, QuadError> {
    let n_phase = 4 * m_max as usize + 1;
    let factor = Su2Quad::new(HalfInt::from_int(m_max));
    let total = n_phase * factor.len();
    if total > max_nodes {
        return Err(QuadError::BudgetExceeded {
            requested: total,
            budget: max_nodes,
        });
    }
    Ok(U2Quad {
        m_max,
        phases: (0..n_phase)
            .map(|k| 2.0 * PI * k as f64 / n_phase as f64)
            .collect(),
        factor,
    })
}
