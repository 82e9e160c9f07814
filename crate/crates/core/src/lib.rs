//! Numerical harmonic analysis on matrix Lie groups: group laws and the
//! Iwasawa decomposition, quadrature and Fourier transforms, Peter–Weyl
//! analysis on SO(4) and U(2), combined Plancherel checks, and a polynomial
//! differential-operator calculus with spectral solvers.

pub mod diffops;
pub mod groups;
pub mod kna;
pub mod nilfourier;
pub mod peterweyl;
pub mod quadrature;
