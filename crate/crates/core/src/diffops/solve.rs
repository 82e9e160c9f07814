//! Spectral solvers for constant-coefficient operators on a periodic box,
//! and the conjugated solvers built from them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::coordmap::CoordMap;
use super::corpus::JetFunction;
use super::expr::OpExpr;
use super::jet::{Jet, JET_DEGREE};
use super::op::PolyDiffOp;
use super::poly::{Exp, X, Y, Z};
use super::DiffOpError;
use crate::quadrature::{
    dft_forward, dft_inverse, frequency_axis, Axis, GridSpec, SampledField, Spectrum,
};

/// Modes whose symbol is smaller than this are treated as kernel modes.
pub const SYMBOL_FLOOR: f64 = 1e-10;

/// Largest relative mass a right-hand side may carry on kernel modes.
pub const COMPATIBILITY_TOL: f64 = 1e-6;

/// Jet variables of the axes of a 2-D `(y, x)` or 3-D `(z, y, x)` field.
fn axis_vars(grid: &GridSpec) -> Result<Vec<usize>, DiffOpError> {
    if grid.axes.iter().any(|a| !a.is_uniform()) {
        return Err(DiffOpError::Grid(
            "spectral solves need uniform axes".into(),
        ));
    }
    match grid.dim() {
        2 => Ok(vec![Y, X]),
        3 => Ok(vec![Z, Y, X]),
        d => Err(DiffOpError::Grid(format!(
            "dimension {d}; expected 2 (y, x) or 3 (z, y, x)"
        ))),
    }
}

/// Symbol of `op` at every mode of `spectrum`, in storage order.
fn symbols(
    op: &PolyDiffOp,
    spectrum: &Spectrum,
    vars: &[usize],
) -> Result<Vec<Complex64>, DiffOpError> {
    if !op.is_constant_coefficient() {
        return Err(DiffOpError::NotConstantCoefficient);
    }
    if vars.len() == 2 && op.terms().any(|(alpha, _)| alpha[Z] > 0) {
        return Err(DiffOpError::Grid(
            "operator differentiates in z but the field is (y, x)".into(),
        ));
    }
    let grid = spectrum.field.grid();
    let tables = grid.node_tables();
    let mut local = vec![0.0; vars.len()];
    (0..grid.len())
        .map(|i| {
            tables.point(i, &mut local);
            let mut xi = [0.0; 3];
            for (a, &v) in vars.iter().enumerate() {
                xi[v] = local[a];
            }
            op.symbol(&xi)
        })
        .collect()
}

/// Output of [`cr_solve`].
#[derive(Debug, Clone)]
pub struct CrSolution {
    pub f: SampledField,
    /// Number of modes with `|symbol| < SYMBOL_FLOOR`.
    pub projected_modes: usize,
    /// L² norm of the right-hand side on those modes (discrete Parseval).
    pub projected_norm: f64,
    pub relative_projected: f64,
}

/// Solves `op f = g` for a constant-coefficient `op` by division in
/// frequency. Kernel modes are set to zero; the call fails with
/// [`DiffOpError::IncompatibleRHS`] if `g` carries relative mass above
/// [`COMPATIBILITY_TOL`] on them.
pub fn cr_solve(g: &SampledField, op: &PolyDiffOp) -> Result<CrSolution, DiffOpError> {
    let vars = axis_vars(g.grid())?;
    let axes: Vec<usize> = (0..vars.len()).collect();
    let mut spectrum = dft_forward(g, &axes)?;
    let sym = symbols(op, &spectrum, &vars)?;
    let mut projected_sqr = 0.0;
    let mut projected_modes = 0;
    for (v, s) in spectrum.field.values_mut().iter_mut().zip(&sym) {
        if s.norm() < SYMBOL_FLOOR {
            projected_sqr += v.norm_sqr();
            projected_modes += 1;
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v /= s;
        }
    }
    let cell: f64 = spectrum
        .field
        .grid()
        .axes
        .iter()
        .map(|a| a.spacing() / (2.0 * PI))
        .product();
    let projected_norm = (projected_sqr * cell).sqrt();
    let norm = g.norm_sqr().sqrt();
    let relative_projected = if norm > 0.0 {
        projected_norm / norm
    } else {
        0.0
    };
    if relative_projected > COMPATIBILITY_TOL {
        return Err(DiffOpError::IncompatibleRHS {
            projected: projected_norm,
            norm,
            relative: relative_projected,
        });
    }
    Ok(CrSolution {
        f: dft_inverse(&spectrum)?,
        projected_modes,
        projected_norm,
        relative_projected,
    })
}

/// `op f` for constant-coefficient `op` by multiplication in frequency.
pub fn spectral_apply(op: &PolyDiffOp, f: &SampledField) -> Result<SampledField, DiffOpError> {
    let vars = axis_vars(f.grid())?;
    let axes: Vec<usize> = (0..vars.len()).collect();
    let mut spectrum = dft_forward(f, &axes)?;
    let sym = symbols(op, &spectrum, &vars)?;
    for (v, s) in spectrum.field.values_mut().iter_mut().zip(&sym) {
        *v *= s;
    }
    Ok(dft_inverse(&spectrum)?)
}

/// The trigonometric interpolant of a sampled periodic field, evaluable
/// with jets at any point.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    coeffs: Vec<Complex64>,
    shape: Vec<usize>,
    freqs: Vec<Vec<f64>>,
    vars: Vec<usize>,
    scale: f64,
}

impl TrigInterpolant {
    pub fn new(f: &SampledField) -> Result<Self, DiffOpError> {
        let vars = axis_vars(f.grid())?;
        let axes: Vec<usize> = (0..vars.len()).collect();
        let spectrum = dft_forward(f, &axes)?;
        let spatial: &[Axis] = &f.grid().axes;
        Ok(Self {
            coeffs: spectrum.field.values().to_vec(),
            shape: f.grid().shape(),
            freqs: spatial.iter().map(|a| frequency_axis(a).nodes()).collect(),
            vars,
            scale: spatial.iter().map(|a| 1.0 / a.length()).product(),
        })
    }

    /// Taylor jet at `p` through `degree`. Variables the field does not
    /// depend on get zero derivatives.
    pub fn jet(&self, p: &[f64; 3], degree: u8) -> Jet {
        let m = degree as usize + 1;
        let i = Complex64::new(0.0, 1.0);
        // factor[a][k·m + j] = (iξ_k)^j / j! · e^{iξ_k p}; the spectrum
        // already carries the phase of the axis origin.
        let factors: Vec<Vec<Complex64>> = (0..self.vars.len())
            .map(|a| {
                let t = p[self.vars[a]];
                let mut out = Vec::with_capacity(self.freqs[a].len() * m);
                for &xi in &self.freqs[a] {
                    let mut c = Complex64::from_polar(1.0, xi * t);
                    for j in 0..m {
                        out.push(c);
                        c *= i * xi / (j + 1) as f64;
                    }
                }
                out
            })
            .collect();
        // Contract the last remaining spatial axis each pass; the derivative
        // index of each contracted axis is appended to the tail.
        let mut state = self.coeffs.clone();
        let mut tail = 1;
        for a in (0..self.vars.len()).rev() {
            let n = self.shape[a];
            let outer: usize = self.shape[..a].iter().product();
            let mut next = vec![Complex64::new(0.0, 0.0); outer * m * tail];
            for o in 0..outer {
                let src = &state[o * n * tail..(o + 1) * n * tail];
                let dst = &mut next[o * m * tail..(o + 1) * m * tail];
                for k in 0..n {
                    let row = &src[k * tail..(k + 1) * tail];
                    let fk = &factors[a][k * m..(k + 1) * m];
                    for j in 0..m {
                        let f = fk[j];
                        let out = &mut dst[j * tail..(j + 1) * tail];
                        for (d, s) in out.iter_mut().zip(row) {
                            *d += f * s;
                        }
                    }
                }
            }
            state = next;
            tail *= m;
        }
        let d = self.vars.len();
        let mut coeffs = Vec::new();
        let mut idx = vec![0usize; d];
        for flat in 0..state.len() {
            let mut r = flat;
            for a in (0..d).rev() {
                idx[a] = r % m;
                r /= m;
            }
            if idx.iter().sum::<usize>() > degree as usize {
                continue;
            }
            let mut e: Exp = [0; 3];
            for a in 0..d {
                e[self.vars[a]] = idx[a] as u8;
            }
            coeffs.push((e, state[flat] * self.scale));
        }
        Jet::from_coeffs(*p, degree, coeffs)
    }

    pub fn value(&self, p: &[f64; 3]) -> Complex64 {
        self.jet(p, 0).value()
    }
}

/// How a conjugated solve treats the kernel of the first stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compatibility {
    /// Fail with [`DiffOpError::IncompatibleRHS`] on kernel mass.
    Strict,
    /// Remove the `(y, x)`-mean of each `z`-slice by subtracting a multiple
    /// of a narrow bump placed away from the image of the window.
    Compensate,
}

/// Geometry of a conjugated solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatedSetup {
    /// The box `B` as `(lo, hi)` for `(z, y, x)`.
    pub bounds: [(f64, f64); 3],
    /// Grid counts of the enlarged periodic box.
    pub counts: [usize; 3],
    /// Enlargement factor of the bounding box of `B ∪ ħ(B)`.
    pub margin: f64,
    /// Residual points per axis on the inner half of `B`.
    pub window_count: usize,
    pub compatibility: Compatibility,
}

impl Default for ConjugatedSetup {
    fn default() -> Self {
        Self {
            bounds: [(-5.0, 5.0), (-2.5, 2.5), (-2.5, 2.5)],
            counts: [192, 64, 64],
            margin: 2.0,
            window_count: 6,
            compatibility: Compatibility::Compensate,
        }
    }
}

impl ConjugatedSetup {
    /// The enlarged periodic box: the bounding box of `B ∪ m(B)`, scaled by
    /// `margin` about its centre. Corners suffice for maps that are affine
    /// in each variable separately, such as `ħ`.
    pub fn periodic_grid(&self, m: &CoordMap) -> Result<GridSpec, DiffOpError> {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for corner in 0..8 {
            let p: [f64; 3] = std::array::from_fn(|v| {
                if corner >> v & 1 == 0 {
                    self.bounds[v].0
                } else {
                    self.bounds[v].1
                }
            });
            for q in [p, m.apply(&p)] {
                for v in 0..3 {
                    lo[v] = lo[v].min(q[v]);
                    hi[v] = hi[v].max(q[v]);
                }
            }
        }
        let names = ["z", "y", "x"];
        let axes = (0..3)
            .map(|v| {
                let c = 0.5 * (lo[v] + hi[v]);
                let h = 0.5 * (hi[v] - lo[v]) * self.margin;
                Axis::uniform_box(names[v], c - h, c + h, self.counts[v])
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GridSpec::new(axes, usize::MAX)?)
    }

    /// Residual grid on the inner 50% of `B` per axis.
    pub fn window_grid(&self) -> Result<GridSpec, DiffOpError> {
        let names = ["z", "y", "x"];
        let axes = (0..3)
            .map(|v| {
                let (a, b) = self.bounds[v];
                let (c, h) = (0.5 * (a + b), 0.25 * (b - a));
                Axis::uniform_box(names[v], c - h, c + h, self.window_count)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GridSpec::new(axes, usize::MAX)?)
    }
}

/// Output of a conjugated solve: `f = u ∘ m` with `u` the periodic
/// spectral solution.
#[derive(Debug, Clone)]
pub struct ConjugatedSolution {
    pub map: CoordMap,
    pub interpolant: TrigInterpolant,
    /// `f` sampled on the window grid.
    pub f: SampledField,
    /// Relative window residual against the target expression.
    pub residual: f64,
    /// Relative mass removed by [`Compatibility::Compensate`].
    pub compensated: f64,
}

impl JetFunction for ConjugatedSolution {
    fn name(&self) -> String {
        format!("spectral solution pulled back by {}", self.map.name)
    }

    fn value(&self, p: &[f64; 3]) -> Complex64 {
        self.interpolant.value(&self.map.apply(p))
    }

    fn jet(&self, p: &[f64; 3], degree: u8) -> Jet {
        let inner = self.interpolant.jet(&self.map.apply(p), degree);
        self.map.pull_jet(&inner, p)
    }
}

fn window_points(grid: &GridSpec) -> Vec<[f64; 3]> {
    let tables = grid.node_tables();
    (0..grid.len())
        .map(|i| {
            let mut p = [0.0; 3];
            tables.point(i, &mut p);
            p
        })
        .collect()
}

impl ConjugatedSolution {
    /// `‖expr f − g‖ / ‖g‖` over the window points, with `expr f` computed
    /// from jets of the interpolant.
    pub fn residual_against(
        &self,
        expr: &OpExpr,
        g: &dyn JetFunction,
        window: &GridSpec,
    ) -> Result<f64, DiffOpError> {
        let points = window_points(window);
        let pairs = points
            .par_iter()
            .map(|p| Ok((expr.value(self, p)?, g.value(p))))
            .collect::<Result<Vec<_>, DiffOpError>>()?;
        let num: f64 = pairs.iter().map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = pairs.iter().map(|(_, b)| b.norm_sqr()).sum();
        Ok((num / den).sqrt())
    }

    /// `‖f − h‖ / ‖h‖` over the window points.
    pub fn error_against(&self, h: &dyn JetFunction, window: &GridSpec) -> f64 {
        let points = window_points(window);
        let pairs: Vec<_> = points
            .par_iter()
            .map(|p| (JetFunction::value(self, p), h.value(p)))
            .collect();
        let num: f64 = pairs.iter().map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = pairs.iter().map(|(_, b)| b.norm_sqr()).sum();
        (num / den).sqrt()
    }
}

/// Subtracts `m(z)·φ(y, x)` from a `(z, y, x)` field, where `m(z)` is the
/// `(y, x)`-integral of the slice and `φ` a narrow bump of unit discrete
/// mass near the corner of the box. Returns the relative mass removed.
fn compensate(g: &mut SampledField) -> f64 {
    let grid = g.grid().clone();
    let [az, ay, ax] = [&grid.axes[0], &grid.axes[1], &grid.axes[2]];
    let (ny, nx) = (ay.count, ax.count);
    let cy = 0.5 * (ay.lo + ay.hi) + 0.375 * ay.length();
    let cx = 0.5 * (ax.lo + ax.hi) + 0.375 * ax.length();
    let w = 0.025 * ay.length().min(ax.length());
    let (ys, xs) = (ay.nodes(), ax.nodes());
    let cell = ay.spacing() * ax.spacing();
    let mut phi: Vec<f64> = ys
        .iter()
        .flat_map(|&y| {
            xs.iter()
                .map(move |&x| (-((y - cy).powi(2) + (x - cx).powi(2)) / (2.0 * w * w)).exp())
        })
        .collect();
    let mass: f64 = phi.iter().sum::<f64>() * cell;
    phi.iter_mut().for_each(|v| *v /= mass);
    let norm = g.norm_sqr().sqrt();
    let mut removed_sqr = 0.0;
    for slice in g.values_mut().chunks_mut(ny * nx) {
        let m: Complex64 = slice.iter().sum::<Complex64>() * cell;
        for (v, b) in slice.iter_mut().zip(&phi) {
            *v -= m * b;
            removed_sqr += (m * b).norm_sqr();
        }
    }
    let removed = (removed_sqr * cell * az.spacing()).sqrt();
    if norm > 0.0 {
        removed / norm
    } else {
        0.0
    }
}

/// Solves `m̂ ∘ S₁∘…∘S_k ∘ m̂ f = g` for an involution `m` and constant
/// coefficient stages `S_i` (word order), via `S₁…S_k u = g∘m` on the
/// periodic box and `f = u∘m`. The residual is measured against `target`,
/// which is not assumed to equal the conjugated product.
pub fn conjugated_solve(
    g: &dyn JetFunction,
    m: &CoordMap,
    stages: &[PolyDiffOp],
    target: &OpExpr,
    setup: &ConjugatedSetup,
) -> Result<ConjugatedSolution, DiffOpError> {
    let grid = setup.periodic_grid(m)?;
    let window = setup.window_grid()?;
    let mut rhs = SampledField::from_fn(grid, |q| g.value(&m.apply(&[q[0], q[1], q[2]])));
    let compensated = match setup.compatibility {
        Compatibility::Strict => 0.0,
        Compatibility::Compensate => compensate(&mut rhs),
    };
    for s in stages {
        rhs = cr_solve(&rhs, s)?.f;
    }
    let degree = target.order();
    if degree > JET_DEGREE {
        return Err(DiffOpError::DegreeOverflow {
            required: degree,
            available: JET_DEGREE,
        });
    }
    let interpolant = TrigInterpolant::new(&rhs)?;
    let mut sol = ConjugatedSolution {
        map: m.clone(),
        interpolant,
        f: SampledField::zeros(window.clone()),
        residual: f64::NAN,
        compensated,
    };
    let points = window_points(&window);
    let values: Vec<Complex64> = points
        .par_iter()
        .map(|p| JetFunction::value(&sol, p))
        .collect();
    sol.f = SampledField::new(window.clone(), values)?;
    sol.residual = sol.residual_against(target, g, &window)?;
    Ok(sol)
}

/// `L f = g` through `L = ħQħ`: one Cauchy-Riemann stage, residual against
/// the Lewy operator as written.
pub fn lewy_solve(
    g: &dyn JetFunction,
    setup: &ConjugatedSetup,
) -> Result<ConjugatedSolution, DiffOpError> {
    let target = OpExpr::new().op("L", PolyDiffOp::lewy());
    conjugated_solve(
        g,
        &CoordMap::hbar(),
        &[PolyDiffOp::cauchy_riemann()],
        &target,
        setup,
    )
}

/// `Q(x, D) f = g` through `Q(x, D) = ħRR⋆R⋆Rħ`: four spectral stages,
/// residual against the fourth-order operator as written.
pub fn hormander_solve(
    g: &dyn JetFunction,
    setup: &ConjugatedSetup,
) -> Result<ConjugatedSolution, DiffOpError> {
    let ops = hormander_example_ops();
    let target = OpExpr::new().op("Q(x,D)", ops.q4);
    let (r, rs) = (PolyDiffOp::cr_rotated(), PolyDiffOp::cr_rotated_star());
    conjugated_solve(
        g,
        &CoordMap::hbar(),
        &[r.clone(), rs.clone(), rs, r],
        &target,
        setup,
    )
}

/// The operators of the non-solvable fourth-order example.
#[derive(Debug, Clone, PartialEq)]
pub struct HormanderOps {
    pub p: PolyDiffOp,
    pub p_bar: PolyDiffOp,
    pub q4: PolyDiffOp,
}

pub fn hormander_example_ops() -> HormanderOps {
    HormanderOps {
        p: PolyDiffOp::hormander_p(),
        p_bar: PolyDiffOp::hormander_p_bar(),
        q4: PolyDiffOp::hormander_q4(),
    }
}
