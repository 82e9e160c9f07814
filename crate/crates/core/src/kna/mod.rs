//! Combined transforms on groups with an Iwasawa decomposition `G = KNA`:
//! SL(4,ℝ) with K = SO(4), SP(4,ℝ) with K = U(2), and the semidirect
//! product ℝ⁴ ⋊ SL(4,ℝ). The transform is the compact Peter–Weyl transform
//! on K combined with the Euclidean transform in the coordinates of N and
//! the log chart of A.
//!
//! L² norms use the product coordinate measure `dk·dn·dt`. The main path is
//! separable functions `u(k)·v(n)·w(t)`, for which the transform factorizes;
//! a nested-quadrature oracle checks that factorization at sample points.

mod audit;
mod factor;
mod family;
mod lifts;
mod nested;
mod transform;

pub use audit::{sl4_dimension_audit, sp4_dimension_audit, DimensionAudit};
pub use factor::{EuclidFactor, FactorSpectrum, SampledFactor};
pub use family::{KElement, KLabel, KnaGroup, Sl4Kna, Sp4Kna};
pub use lifts::{
    conjugation_jacobian_check, h_lift_reduction_check, lift_h, lift_q, lift_upsilon,
    q_lift_invariance_check, semidirect_law_check, upsilon_invariance_check,
    upsilon_restriction_check, AffinePoint, InvarianceReport,
};
pub use nested::{nested_spot_check, random_spectral_points, SpectralPoint, SpotCheck};
pub use transform::{
    kna_coords, kna_matrix, kna_transform, plancherel_kna_check, plancherel_p_check,
    plancherel_sl4_check, semidirect_transform, sp4_restrict_check, spectral_constant, KnaGrid,
    KnaSpectrum, SeparableKna,
};

#[derive(Debug, thiserror::Error)]
pub enum KnaError {
    #[error(transparent)]
    Quad(#[from] crate::quadrature::QuadError),
    #[error(transparent)]
    Group(#[from] crate::groups::GroupError),
    #[error(transparent)]
    PeterWeyl(#[from] crate::peterweyl::PeterWeylError),
    #[error("expected a factor of dimension {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("label {0} is not in the spectrum")]
    UnknownLabel(String),
    #[error("the function has no translation factor")]
    MissingTranslation,
    #[error("a translation factor was given where none is expected")]
    UnexpectedTranslation,
    #[error("matrix is singular")]
    Singular,
}
