//! Polynomial differential operators on ℝ³ with variables `(z, y, x)`.
//!
//! Coefficients are exact Gaussian rationals, so compositions, commutators
//! and pushforwards under polynomial coordinate maps are computed exactly.
//! Numerical checks go through degree-4 Taylor jets of test functions with
//! closed-form jets: no finite differences anywhere. Constant-coefficient
//! equations are solved spectrally on a periodic box, and the conjugated
//! solvers combine those with the reflection `ħ`.

mod coordmap;
mod corpus;
mod dsl;
mod expr;
mod identities;
mod jet;
mod op;
mod poly;
mod solve;
mod vecfield;

pub use coordmap::CoordMap;
pub use corpus::{
    random_points, standard_corpus, Applied, GaussPoly, Gaussian, JetFunction, PlaneWave,
};
pub use expr::{
    verify_identity, Discrepancy, IdentityReport, NamedIdentity, OpExpr, Step, IDENTITY_TOL,
};
pub use identities::{
    displayed_identities, hbar_q_hbar_expanded, lewy_readings, mutation_baseline, mutation_control,
    pushforward_companions,
};
pub use jet::{monomial_index, Jet, JET_DEGREE, JET_LEN};
pub use op::{PolyDiffOp, MAX_ORDER};
pub use poly::{gr, gr_ratio, to_c64, Exp, GRat, Poly, VAR_NAMES, X, Y, Z};
pub use solve::{
    conjugated_solve, cr_solve, hormander_example_ops, hormander_solve, lewy_solve, spectral_apply,
    Compatibility, ConjugatedSetup, ConjugatedSolution, CrSolution, HormanderOps, TrigInterpolant,
    COMPATIBILITY_TOL, SYMBOL_FLOOR,
};
pub use vecfield::{hormander_rank, lie_bracket, PolyVectorField};

use crate::quadrature::QuadError;

#[derive(Debug, thiserror::Error)]
pub enum DiffOpError {
    #[error("jet degree {required} needed, only {available} carried")]
    DegreeOverflow { required: u8, available: u8 },
    #[error("operator order {order} exceeds 4")]
    OrderTooHigh { order: u8 },
    #[error("coordinate map {0} is not inverted by the given inverse")]
    NotInverse(String),
    #[error("operator has non-constant coefficients")]
    NotConstantCoefficient,
    #[error("right-hand side has relative mass {relative:.3e} on the kernel of the symbol (tolerance 1e-6)")]
    IncompatibleRHS {
        projected: f64,
        norm: f64,
        relative: f64,
    },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("bad grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
}
