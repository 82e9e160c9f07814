//! Tensor grids and quadrature rules, discrete Fourier transforms with the
//! `e^{−i⟨ξ,X⟩}` convention, Monte Carlo integration, and Haar-measure rules
//! on SU(2)×SU(2) and U(2).
//!
//! Every reduction is pairwise over fixed index blocks, so results do not
//! depend on the number of worker threads.

mod dft;
mod euler;
mod field;
mod grid;
mod legendre;
mod mc;
mod sum;

pub use dft::{dft_forward, dft_inverse, frequency_axis, transform_at, Spectrum};
pub use euler::{
    so4_quadrature, u2_quadrature, EulerAngles, EulerQuadSO4, HalfInt, Su2Quad, U2Quad,
    DEFAULT_SO4_BUDGET,
};
pub use field::SampledField;
pub use grid::{Axis, AxisKind, GridSpec, GridTables, DEFAULT_GRID_BUDGET};
pub use legendre::{gauss_hermite, gauss_legendre};
pub use mc::{monte_carlo, monte_carlo_multi, GaussianSampler, McEstimate, MC_BLOCK, MIN_SAMPLES};
pub use sum::{indexed_sum, indexed_sum_f64, pairwise_sum, pairwise_sum_f64, BLOCK};

#[derive(Debug, thiserror::Error)]
pub enum QuadError {
    #[error("invalid axis: {0}")]
    InvalidAxis(String),
    #[error("axis {axis} has kind {kind:?}; a uniform axis is required")]
    AxisKindMismatch { axis: String, kind: AxisKind },
    #[error("{requested} points requested, budget is {budget}")]
    BudgetExceeded { requested: usize, budget: usize },
    #[error("expected {expected} values, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("field contains non-finite values")]
    NonFinite,
    #[error("Monte Carlo needs at least 1000 samples, got {n}")]
    TooFewSamples { n: usize },
    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),
    #[error("malformed field file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
