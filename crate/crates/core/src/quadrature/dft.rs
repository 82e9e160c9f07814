use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::field::SampledField;
use super::grid::{Axis, AxisKind, GridSpec};
use super::sum::indexed_sum;
use super::QuadError;

/// A field whose listed axes have been replaced by their dual frequency axes.
///
/// Frequency axes are stored centred: node `k` is `(k − ⌊n/2⌋)·2π/L`, so they
/// are ordinary uniform axes and can be integrated with [`SampledField::integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub field: SampledField,
    /// Indices of the transformed axes.
    pub transformed: Vec<usize>,
    /// The spatial axes they came from, in the same order.
    pub spatial: Vec<Axis>,
}

/// The dual axis of a uniform axis of length `L` with `n` nodes.
pub fn frequency_axis(axis: &Axis) -> Axis {
    let n = axis.count;
    let dxi = 2.0 * PI / axis.length();
    let lo = -((n / 2) as f64) * dxi;
    Axis {
        name: format!("xi_{}", axis.name),
        kind: AxisKind::UniformPeriodic,
        lo,
        hi: lo + n as f64 * dxi,
        count: n,
    }
}

fn check_axes(grid: &GridSpec, axes: &[usize]) -> Result<(), QuadError> {
    for &a in axes {
        let axis = grid
            .axes
            .get(a)
            .ok_or_else(|| QuadError::InvalidAxis(format!("axis index {a} out of range")))?;
        if !axis.is_uniform() {
            return Err(QuadError::AxisKindMismatch {
                axis: axis.name.clone(),
                kind: axis.kind,
            });
        }
    }
    Ok(())
}

/// Applies `line_op` to every 1-D line along `axis` of a row-major array.
fn for_each_line<F>(values: &mut [Complex64], shape: &[usize], axis: usize, mut line_op: F)
where
    F: FnMut(&mut [Complex64]),
{
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        let base = o * n * stride;
        for s in 0..stride {
            for (j, v) in line.iter_mut().enumerate() {
                *v = values[base + j * stride + s];
            }
            line_op(&mut line);
            for (j, v) in line.iter().enumerate() {
                values[base + j * stride + s] = *v;
            }
        }
    }
}

/// Discrete approximation of `∫ f(X) e^{−i⟨ξ,X⟩} dX` along the given axes.
pub fn dft_forward(f: &SampledField, axes: &[usize]) -> Result<Spectrum, QuadError> {
    let grid = f.grid();
    check_axes(grid, axes)?;
    let shape = grid.shape();
    let mut values = f.values().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let mut new_axes = grid.axes.clone();
    for &a in axes {
        let axis = &grid.axes[a];
        let n = axis.count;
        let h = axis.spacing();
        let freq = frequency_axis(axis);
        let xi = freq.nodes();
        let c = n / 2;
        // phase[k] = h·e^{−iξ_k·lo}, source index (k − c) mod n.
        let phase: Vec<Complex64> = xi
            .iter()
            .map(|&x| Complex64::from_polar(h, -x * axis.lo))
            .collect();
        let fft = planner.plan_fft_forward(n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        for_each_line(&mut values, &shape, a, |line| {
            fft.process_with_scratch(line, &mut scratch);
            for k in 0..n {
                tmp[k] = line[(k + n - c) % n] * phase[k];
            }
            line.copy_from_slice(&tmp);
        });
        new_axes[a] = freq;
    }
    let field = SampledField::new(GridSpec::new(new_axes, usize::MAX)?, values)?;
    Ok(Spectrum {
        field,
        transformed: axes.to_vec(),
        spatial: axes.iter().map(|&a| grid.axes[a].clone()).collect(),
    })
}

/// Inverse of [`dft_forward`]; carries the `(2π)^{−d}` factor.
pub fn dft_inverse(s: &Spectrum) -> Result<SampledField, QuadError> {
    let grid = s.field.grid();
    check_axes(grid, &s.transformed)?;
    let shape = grid.shape();
    let mut values = s.field.values().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let mut new_axes = grid.axes.clone();
    for (&a, spatial) in s.transformed.iter().zip(&s.spatial) {
        let n = spatial.count;
        if shape[a] != n {
            return Err(QuadError::ShapeMismatch {
                expected: n,
                found: shape[a],
            });
        }
        let h = spatial.spacing();
        let xi = grid.axes[a].nodes();
        let c = n / 2;
        let scale = 1.0 / (n as f64 * h);
        let phase: Vec<Complex64> = xi
            .iter()
            .map(|&x| Complex64::from_polar(scale, x * spatial.lo))
            .collect();
        let fft = planner.plan_fft_inverse(n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        for_each_line(&mut values, &shape, a, |line| {
            for k in 0..n {
                tmp[(k + n - c) % n] = line[k] * phase[k];
            }
            line.copy_from_slice(&tmp);
            fft.process_with_scratch(line, &mut scratch);
        });
        new_axes[a] = spatial.clone();
    }
    SampledField::new(GridSpec::new(new_axes, usize::MAX)?, values)
}

/// `Σ w(X)·f(X)·e^{−i⟨ξ,X⟩}` over the whole grid at an arbitrary frequency.
/// Works for any axis kinds; used for off-grid spectral values.
pub fn transform_at(f: &SampledField, xi: &[f64]) -> Result<Complex64, QuadError> {
    let grid = f.grid();
    if xi.len() != grid.dim() {
        return Err(QuadError::ShapeMismatch {
            expected: grid.dim(),
            found: xi.len(),
        });
    }
    let tables = grid.node_tables();
    // Separable phase tables per axis.
    let phases: Vec<Vec<Complex64>> = tables
        .nodes
        .iter()
        .zip(&tables.weights)
        .zip(xi)
        .map(|((nodes, weights), &x)| {
            nodes
                .iter()
                .zip(weights)
                .map(|(&t, &w)| Complex64::from_polar(w, -x * t))
                .collect()
        })
        .collect();
    let shape = tables.shape.clone();
    let values = f.values();
    Ok(indexed_sum(values.len(), |flat| {
        let mut i = flat;
        let mut p = Complex64::new(1.0, 0.0);
        for k in (0..shape.len()).rev() {
            let j = i % shape[k];
            i /= shape[k];
            p *= phases[k][j];
        }
        values[flat] * p
    }))
}
