//! Wigner matrices by Clebsch–Gordan coupling with spin ½.
//!
//! Row and column `a` of a spin-`j` matrix carry the magnetic number
//! `m = j − a`, so index 0 is the highest weight.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;

use crate::quadrature::HalfInt;

use super::elements::Su2;

/// `D^j = P (D^{j−½} ⊗ D^{½}) Pᵀ`, where `P` projects onto the stretched
/// spin-`j` subspace:
/// `|j m⟩ = √((j+m)/2j)·|j−½, m−½⟩|↑⟩ + √((j−m)/2j)·|j−½, m+½⟩|↓⟩`.
fn couple<T>(prev: &DMatrix<T>, half: &[[T; 2]; 2], twice_j: usize) -> DMatrix<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n2 = twice_j as f64;
    let dim = twice_j + 1;
    // (coefficient, index in prev, spin-½ index) for each row.
    let terms: Vec<[(f64, usize, usize); 2]> = (0..dim)
        .map(|a| {
            let m2 = n2 - 2.0 * a as f64;
            let up = ((n2 + m2) / (2.0 * n2)).sqrt();
            let down = ((n2 - m2) / (2.0 * n2)).sqrt();
            [(up, a, 0), (down, a.wrapping_sub(1), 1)]
        })
        .collect();
    let valid = |idx: usize| idx < twice_j;
    DMatrix::from_fn(dim, dim, |a, b| {
        let mut acc = T::zero();
        for &(ca, ia, ha) in &terms[a] {
            if ca == 0.0 || !valid(ia) {
                continue;
            }
            for &(cb, ib, hb) in &terms[b] {
                if cb == 0.0 || !valid(ib) {
                    continue;
                }
                acc += prev[(ia, ib)] * half[ha][hb] * T::from_real(ca * cb);
            }
        }
        acc
    })
}

fn chain<T>(half: [[T; 2]; 2], max: HalfInt) -> Vec<DMatrix<T>>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let mut out = Vec::with_capacity(max.dim());
    out.push(DMatrix::from_element(1, 1, T::one()));
    for twice in 1..=max.twice() as usize {
        let next = couple(&out[twice - 1], &half, twice);
        out.push(next);
    }
    out
}

/// Small-d matrices `d^j(β)` for every `j ≤ max`, indexed by `2j`.
pub fn wigner_small_d_upto(max: HalfInt, beta: f64) -> Vec<DMatrix<f64>> {
    let (s, c) = (0.5 * beta).sin_cos();
    chain([[c, -s], [s, c]], max)
}

pub fn wigner_small_d(j: HalfInt, beta: f64) -> DMatrix<f64> {
    wigner_small_d_upto(j, beta).pop().expect("nonempty chain")
}

/// `D^j(α, β, γ)_{mn} = e^{−imα} d^j_{mn}(β) e^{−inγ}`.
pub fn wigner_d_matrix(j: HalfInt, alpha: f64, beta: f64, gamma: f64) -> DMatrix<Complex64> {
    let d = wigner_small_d(j, beta);
    let jv = j.value();
    DMatrix::from_fn(d.nrows(), d.ncols(), |a, b| {
        let m = jv - a as f64;
        let n = jv - b as f64;
        Complex64::from_polar(d[(a, b)], -m * alpha - n * gamma)
    })
}

/// `D^j(u)` for every `j ≤ max`, indexed by `2j`. Built directly from the
/// spin-½ matrix, so it is exactly multiplicative and has no trouble at the
/// Euler-angle poles.
pub fn su2_reps_upto(max: HalfInt, u: &Su2) -> Vec<DMatrix<Complex64>> {
    let m = u.matrix();
    chain([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]], max)
}

pub fn su2_rep(j: HalfInt, u: &Su2) -> DMatrix<Complex64> {
    su2_reps_upto(j, u).pop().expect("nonempty chain")
}
