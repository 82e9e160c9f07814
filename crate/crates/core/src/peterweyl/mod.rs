//! Irreducible representations of SO(4) and U(2), the compact-group Fourier
//! transform `Tf(γ) = ∫ f(k) γ(k⁻¹) dk`, its inversion and the Plancherel
//! formula on band-limited functions.
//!
//! SO(4) is handled through its double cover SU(2)×SU(2); a label `(j1, j2)`
//! is admissible when `j1 + j2` is an integer, which makes `D^{j1} ⊗ D^{j2}`
//! trivial on `(−1, −1)`.

mod elements;
mod labels;
mod transform;
mod wigner;

pub use crate::quadrature::HalfInt;
pub use elements::{So4Element, Su2, U2Element, RECOVERY_TOL};
pub use labels::{so4_labels, u2_labels, IrrepLabel, So4Label, U2Label};
pub use transform::{
    compact_inverse, convolve_at, so4_nodes, so4_plancherel_check, so4_transform,
    so4_transform_sampled, transform_direct, u2_nodes, u2_plancherel_check, u2_transform,
    BandLimited, CompactGroup, CompactSpectrum, PlancherelCheck, RepSample, So4, U2,
};
pub use wigner::{su2_rep, su2_reps_upto, wigner_d_matrix, wigner_small_d, wigner_small_d_upto};

#[derive(Debug, thiserror::Error)]
pub enum PeterWeylError {
    #[error("label ({j1},{j2}) does not descend to SO(4): j1 + j2 must be an integer")]
    ParityViolation { j1: HalfInt, j2: HalfInt },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("matrix is not a rotation (defect {defect:e})")]
    NotSo4 { defect: f64 },
    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("{got} samples for a rule with {want} nodes")]
    SampleCount { got: usize, want: usize },
    #[error(transparent)]
    Quad(#[from] crate::quadrature::QuadError),
}
