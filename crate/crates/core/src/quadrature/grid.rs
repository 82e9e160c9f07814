use serde::{Deserialize, Serialize};

use super::legendre::gauss_legendre;
use super::QuadError;

/// Default cap on the number of points of a tensor grid (16⁶).
pub const DEFAULT_GRID_BUDGET: usize = 16_777_216;

/// Largest supported grid dimension.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisKind {
    /// Equispaced nodes `lo + i·h`, `h = (hi − lo)/count`, on a period `[lo, hi)`.
    UniformPeriodic,
    /// Same nodes as `UniformPeriodic`, used as a truncation of ℝ to a box on
    /// which the integrand has decayed.
    UniformBox,
    GaussLegendre,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub kind: AxisKind,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(
        name: &str,
        kind: AxisKind,
        lo: f64,
        hi: f64,
        count: usize,
    ) -> Result<Self, QuadError> {
        if count < 2 {
            return Err(QuadError::InvalidAxis(format!("{name}: count {count} < 2")));
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(QuadError::InvalidAxis(format!(
                "{name}: bounds [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            name: name.to_string(),
            kind,
            lo,
            hi,
            count,
        })
    }

    pub fn uniform_box(name: &str, lo: f64, hi: f64, count: usize) -> Result<Self, QuadError> {
        Self::new(name, AxisKind::UniformBox, lo, hi, count)
    }

    pub fn periodic(name: &str, lo: f64, hi: f64, count: usize) -> Result<Self, QuadError> {
        Self::new(name, AxisKind::UniformPeriodic, lo, hi, count)
    }

    pub fn gauss_legendre(name: &str, lo: f64, hi: f64, count: usize) -> Result<Self, QuadError> {
        Self::new(name, AxisKind::GaussLegendre, lo, hi, count)
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, AxisKind::UniformBox | AxisKind::UniformPeriodic)
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.count as f64
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn nodes(&self) -> Vec<f64> {
        match self.kind {
            AxisKind::UniformBox | AxisKind::UniformPeriodic => {
                let h = self.spacing();
                (0..self.count).map(|i| self.lo + i as f64 * h).collect()
            }
            AxisKind::GaussLegendre => {
                let (x, _) = gauss_legendre(self.count);
                let c = 0.5 * (self.hi + self.lo);
                let r = 0.5 * (self.hi - self.lo);
                x.into_iter().map(|t| c + r * t).collect()
            }
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        match self.kind {
            AxisKind::UniformBox | AxisKind::UniformPeriodic => vec![self.spacing(); self.count],
            AxisKind::GaussLegendre => {
                let (_, w) = gauss_legendre(self.count);
                let r = 0.5 * (self.hi - self.lo);
                w.into_iter().map(|v| v * r).collect()
            }
        }
    }
}

/// Tensor-product grid. Values on it are stored row-major: the last axis
/// varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>, budget: usize) -> Result<Self, QuadError> {
        if axes.is_empty() || axes.len() > MAX_DIM {
            return Err(QuadError::InvalidAxis(format!(
                "grid dimension {} outside 1..={MAX_DIM}",
                axes.len()
            )));
        }
        let total = axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.count))
            .unwrap_or(usize::MAX);
        if total > budget {
            return Err(QuadError::BudgetExceeded {
                requested: total,
                budget,
            });
        }
        Ok(Self { axes })
    }

    /// `dim` identical uniform-box axes on `[lo, hi)` named `x0, x1, …`.
    pub fn cube(
        dim: usize,
        lo: f64,
        hi: f64,
        count: usize,
        budget: usize,
    ) -> Result<Self, QuadError> {
        let axes = (0..dim)
            .map(|i| Axis::uniform_box(&format!("x{i}"), lo, hi, count))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(axes, budget)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.count).collect()
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.name == name)
    }

    /// Multi-index of flat index `i`.
    pub fn unravel(&self, mut i: usize, out: &mut [usize]) {
        for (k, a) in self.axes.iter().enumerate().rev() {
            out[k] = i % a.count;
            i /= a.count;
        }
    }

    pub fn node_tables(&self) -> GridTables {
        GridTables {
            nodes: self.axes.iter().map(Axis::nodes).collect(),
            weights: self.axes.iter().map(Axis::weights).collect(),
            shape: self.shape(),
        }
    }
}

/// Precomputed per-axis nodes and weights for fast point lookup.
#[derive(Debug, Clone)]
pub struct GridTables {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<Vec<f64>>,
    pub shape: Vec<usize>,
}

impl GridTables {
    /// Writes the coordinates of flat index `i` into `point` and returns the
    /// tensor-product weight.
    pub fn point(&self, mut i: usize, point: &mut [f64]) -> f64 {
        let mut w = 1.0;
        for k in (0..self.shape.len()).rev() {
            let n = self.shape[k];
            let j = i % n;
            i /= n;
            point[k] = self.nodes[k][j];
            w *= self.weights[k][j];
        }
        w
    }
}
