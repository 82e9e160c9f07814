//! Coordinate and matrix charts of the groups: the 6-dimensional unipotent
//! group N, the auxiliary group L, the 3- and 4-dimensional nilpotent
//! symplectic groups, and the Iwasawa decomposition of SL(4,ℝ) and SP(4,ℝ).
//!
//! Coordinate laws are the primary implementation; the matrix embeddings are
//! kept alongside as oracles.

mod heis;
mod iwasawa;
mod lgroup;
mod matrix;
mod nil;

pub use heis::{has_spn_pattern, heis_inv, heis_mul, spn_embed, spn_mul, HeisPoint3, SpNPoint4};
pub use iwasawa::{
    conjugate_by_a, diag_from_log, iwasawa_decompose, mgs_qr, modulus_factor, random_sl4,
    random_so4, random_sp4, IwasawaFactors, PIVOT_FLOOR,
};
pub use lgroup::{l_inv, l_inv_with, l_mul, l_mul_with, LLaw, LPoint9};
pub use matrix::{
    orthogonality_defect, symplectic_defect, symplectic_form, GroupTag, Mat4, MatrixElement,
    CONSTRUCTION_TOL,
};
pub use nil::{nil_inv, nil_mul, nil_quotient_reference, NilPoint6};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("matrix violates the {tag:?} invariants (defect {defect:e})")]
    InvariantViolation { tag: GroupTag, defect: f64 },
    #[error("matrix is not symplectic: ‖gJgᵀ − J‖ = {defect:e}")]
    SymplecticViolation { defect: f64 },
    #[error("Gram–Schmidt pivot {pivot:e} below threshold")]
    NearSingular { pivot: f64 },
    #[error("operation not defined for {0:?} elements")]
    UnsupportedTag(GroupTag),
    #[error("could not parse matrix: {0}")]
    Parse(String),
}
