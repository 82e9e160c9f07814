//! Analysis on the 6-dimensional unipotent group N: lifts of functions to
//! the auxiliary group L and their invariance, group convolution, the
//! coordinate Fourier transform, the bilinear identity relating them, and
//! the Plancherel formula.
//!
//! The transform here is the Euclidean one in the coordinates of N. It does
//! not diagonalize the (noncommutative) convolution, so only integrated
//! identities are checked, never a pointwise convolution theorem.

mod convolve;
mod fourier;
mod lift;
mod testfn;

pub use convolve::{
    associativity_check, box_grid, convolution_equality_check, convolve_n, envelope_grid,
    envelope_sampler, AssociativityCheck, ConvEqualityPoint, ConvMethod, ConvValue, Substitution,
};
pub use fourier::{
    bilinear_identity_check, fourier_n, fourier_separable, plancherel_n_check, plancherel_n_grid,
    plancherel_n_separable, sample_n, separable_axes, separable_inner_space, BilinearCheck,
    BilinearMethod, NilPlancherel, PlancherelConfig, PlancherelMethod, SeparableSpectrum,
    SpectrumN, SPECTRAL_CONSTANT_N,
};
pub use lift::{invariance_shift, lift_args, lift_to_l, rho1, rho2, LiftedFunction};
pub use testfn::{GaussPoly, TestFn};

#[derive(Debug, thiserror::Error)]
pub enum NilFourierError {
    #[error(transparent)]
    Quad(#[from] crate::quadrature::QuadError),
    #[error("expected a 6-dimensional grid or sampler, got dimension {0}")]
    Dimension(usize),
    #[error("spectra live on different frequency grids")]
    GridMismatch,
}
