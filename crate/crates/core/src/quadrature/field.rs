use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{Axis, GridSpec};
use super::sum::{indexed_sum, BLOCK};
use super::QuadError;

/// Complex values on a tensor grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BinaryHeader {
    shape: Vec<usize>,
    axes: Vec<Axis>,
    dtype: String,
    endian: String,
}

impl SampledField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self, QuadError> {
        if values.len() != grid.len() {
            return Err(QuadError::ShapeMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(QuadError::NonFinite);
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Samples `f` at every grid point (in parallel; order of evaluation does
    /// not affect the result).
    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let tables = grid.node_tables();
        let dim = grid.dim();
        let n = grid.len();
        let mut values = vec![Complex64::new(0.0, 0.0); n];
        values
            .par_chunks_mut(BLOCK)
            .enumerate()
            .for_each(|(b, chunk)| {
                let mut p = vec![0.0; dim];
                for (k, v) in chunk.iter_mut().enumerate() {
                    tables.point(b * BLOCK + k, &mut p);
                    *v = f(&p);
                }
            });
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map<F: Fn(Complex64) -> Complex64 + Sync>(&self, f: F) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.par_iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination with a field on the same grid.
    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self, QuadError>
    where
        F: Fn(Complex64, Complex64) -> Complex64 + Sync,
    {
        if self.grid != other.grid {
            return Err(QuadError::ShapeMismatch {
                expected: self.values.len(),
                found: other.values.len(),
            });
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Tensor-product quadrature `Σ w(i)·f(i)` with pairwise summation.
    pub fn integrate(&self) -> Complex64 {
        let tables = self.grid.node_tables();
        let dim = self.grid.dim();
        indexed_sum(self.values.len(), |i| {
            let mut p = [0.0; super::grid::MAX_DIM];
            let w = tables.point(i, &mut p[..dim]);
            self.values[i] * w
        })
    }

    /// `∫ |f|²` by the same rule.
    pub fn norm_sqr(&self) -> f64 {
        self.map(|v| Complex64::new(v.norm_sqr(), 0.0))
            .integrate()
            .re
    }

    /// Writes the binary field format: a JSON header line followed by
    /// interleaved little-endian f64 `(re, im)` pairs in row-major order.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<(), QuadError> {
        let header = BinaryHeader {
            shape: self.grid.shape(),
            axes: self.grid.axes.clone(),
            dtype: "c128".into(),
            endian: "LE".into(),
        };
        let line = serde_json::to_string(&header).map_err(|e| QuadError::Format(e.to_string()))?;
        w.write_all(line.as_bytes())?;
        w.write_all(b"\n")?;
        let mut buf = Vec::with_capacity(16 * self.values.len());
        for v in &self.values {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: BufRead>(mut r: R) -> Result<Self, QuadError> {
        let mut line = String::new();
        r.read_line(&mut line)?;
        let header: BinaryHeader =
            serde_json::from_str(line.trim_end()).map_err(|e| QuadError::Format(e.to_string()))?;
        if header.dtype != "c128" || header.endian != "LE" {
            return Err(QuadError::Format(format!(
                "unsupported dtype/endian {}/{}",
                header.dtype, header.endian
            )));
        }
        if header.shape != header.axes.iter().map(|a| a.count).collect::<Vec<_>>() {
            return Err(QuadError::Format("shape disagrees with axes".into()));
        }
        let grid = GridSpec::new(header.axes, usize::MAX)?;
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != 16 * grid.len() {
            return Err(QuadError::ShapeMismatch {
                expected: 16 * grid.len(),
                found: bytes.len(),
            });
        }
        let values = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        Self::new(grid, values)
    }
}
