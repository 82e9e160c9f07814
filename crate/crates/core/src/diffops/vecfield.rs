use nalgebra::DMatrix;
use num_complex::Complex64;

use super::op::PolyDiffOp;
use super::poly::{gr, Poly, X, Y};

/// `p_z ∂_z + p_y ∂_y + p_x ∂_x` with exact polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVectorField {
    pub comps: [Poly; 3],
}

impl PolyVectorField {
    pub fn new(comps: [Poly; 3]) -> Self {
        Self { comps }
    }

    pub fn zero() -> Self {
        Self::new([Poly::zero(), Poly::zero(), Poly::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// `V(p) = Σ_v V_v ∂_v p`.
    pub fn apply(&self, p: &Poly) -> Poly {
        (0..3).fold(Poly::zero(), |acc, v| {
            &acc + &(&self.comps[v] * &p.deriv(v))
        })
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(std::array::from_fn(|v| self.comps[v].scale(&gr(c, 0))))
    }

    pub fn eval(&self, p: &[f64; 3]) -> [Complex64; 3] {
        std::array::from_fn(|v| self.comps[v].eval(p))
    }

    pub fn to_op(&self) -> PolyDiffOp {
        let mut op = PolyDiffOp::zero();
        for v in 0..3 {
            let mut alpha = [0; 3];
            alpha[v] = 1;
            op = &op + &PolyDiffOp::term(self.comps[v].clone(), alpha);
        }
        op
    }

    /// `Z = ∂_z`.
    pub fn heis_z() -> Self {
        Self::new([Poly::one(), Poly::zero(), Poly::zero()])
    }

    /// `Y = x∂_z + ∂_y`.
    pub fn heis_y() -> Self {
        Self::new([Poly::var(X), Poly::one(), Poly::zero()])
    }

    /// `X = −y∂_z + ∂_x`.
    pub fn heis_x() -> Self {
        Self::new([-&Poly::var(Y), Poly::zero(), Poly::one()])
    }

    /// Right-invariant partner of [`Self::heis_y`]: `−x∂_z + ∂_y`.
    pub fn heis_y_right() -> Self {
        Self::new([-&Poly::var(X), Poly::one(), Poly::zero()])
    }

    /// Right-invariant partner of [`Self::heis_x`]: `y∂_z + ∂_x`.
    pub fn heis_x_right() -> Self {
        Self::new([Poly::var(Y), Poly::zero(), Poly::one()])
    }
}

/// `[V, W] = V∘W − W∘V`, computed componentwise as `V(W_v) − W(V_v)`.
pub fn lie_bracket(v: &PolyVectorField, w: &PolyVectorField) -> PolyVectorField {
    PolyVectorField::new(std::array::from_fn(|i| {
        &v.apply(&w.comps[i]) - &w.apply(&v.comps[i])
    }))
}

/// Rank at `point` of the fields together with their iterated brackets of
/// length ≤ `depth` (depth 1 is the fields alone).
pub fn hormander_rank(fields: &[PolyVectorField], point: &[f64; 3], depth: usize) -> usize {
    let mut all: Vec<PolyVectorField> = fields.to_vec();
    let mut level: Vec<PolyVectorField> = fields.to_vec();
    for _ in 1..depth {
        let next: Vec<PolyVectorField> = fields
            .iter()
            .flat_map(|f| level.iter().map(move |g| lie_bracket(f, g)))
            .filter(|b| !b.is_zero())
            .collect();
        all.extend(next.iter().cloned());
        level = next;
    }
    if all.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(all.len(), 3, |i, j| all[i].eval(point)[j]);
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * max).count()
}
