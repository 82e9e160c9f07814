use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use super::coordmap::CoordMap;
use super::corpus::JetFunction;
use super::jet::Jet;
use super::poly::{gr, to_c64, Exp, GRat, Poly};
use super::vecfield::PolyVectorField;
use super::DiffOpError;

/// Highest derivative order an operator may carry.
pub const MAX_ORDER: u8 = 4;

/// `Σ_α p_α(z, y, x) ∂^α` with exact polynomial coefficients, keyed by the
/// multi-index `α = [α_z, α_y, α_x]`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct PolyDiffOp {
    terms: BTreeMap<Exp, Poly>,
}

fn order_of(alpha: &Exp) -> u8 {
    alpha.iter().sum()
}

fn binomial(n: u8, k: u8) -> i64 {
    (0..k as i64).fold(1, |acc, i| acc * (n as i64 - i) / (i + 1))
}

fn named(text: &str) -> PolyDiffOp {
    text.parse().expect("built-in operator text parses")
}

fn composed(ops: &[PolyDiffOp]) -> PolyDiffOp {
    ops.iter()
        .skip(1)
        .try_fold(ops[0].clone(), |acc, o| acc.compose(o))
        .expect("built-in compositions stay within the order bound")
}

fn square(v: &PolyVectorField) -> PolyDiffOp {
    let op = v.to_op();
    op.compose(&op).expect("second order")
}

impl PolyDiffOp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(Poly::one(), [0, 0, 0])
    }

    /// `p·∂^α`.
    pub fn term(p: Poly, alpha: Exp) -> Self {
        let mut op = Self::zero();
        op.add_term(alpha, p);
        op
    }

    /// `∂^α`.
    pub fn derivative(alpha: Exp) -> Self {
        Self::term(Poly::one(), alpha)
    }

    fn add_term(&mut self, alpha: Exp, p: Poly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&alpha) {
            Some(q) => q + &p,
            None => p,
        };
        if sum.is_zero() {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Poly)> {
        self.terms.iter()
    }

    /// Coefficient polynomial of `∂^α`.
    pub fn coeff(&self, alpha: &Exp) -> Poly {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u8 {
        self.terms.keys().map(order_of).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GRat) -> Self {
        let mut op = Self::zero();
        for (a, p) in &self.terms {
            op.add_term(*a, p.scale(c));
        }
        op
    }

    /// `p·self`.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        let mut op = Self::zero();
        for (a, q) in &self.terms {
            op.add_term(*a, p * q);
        }
        op
    }

    pub fn is_constant_coefficient(&self) -> bool {
        self.terms.values().all(|p| p.as_constant().is_some())
    }

    /// `self ∘ other` by the Leibniz rule
    /// `(a∂^α)∘(b∂^β) = Σ_{γ≤α} C(α,γ)·a·(∂^γ b)·∂^{α−γ+β}`.
    pub fn compose(&self, other: &Self) -> Result<Self, DiffOpError> {
        let order = self.order() + other.order();
        if order > MAX_ORDER && !self.is_zero() && !other.is_zero() {
            return Err(DiffOpError::OrderTooHigh { order });
        }
        let mut out = Self::zero();
        for (alpha, a) in &self.terms {
            for (beta, b) in &other.terms {
                for g0 in 0..=alpha[0] {
                    for g1 in 0..=alpha[1] {
                        for g2 in 0..=alpha[2] {
                            let gamma = [g0, g1, g2];
                            let c = (0..3)
                                .map(|v| binomial(alpha[v], gamma[v]))
                                .product::<i64>();
                            let db = b.deriv_multi(&gamma);
                            if db.is_zero() {
                                continue;
                            }
                            let deriv = std::array::from_fn(|v| alpha[v] - gamma[v] + beta[v]);
                            out.add_term(deriv, (a * &db).scale(&gr(c, 0)));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ_α c_α Π_v (iξ_v)^{α_v}`; defined for constant coefficients only.
    pub fn symbol(&self, xi: &[f64; 3]) -> Result<Complex64, DiffOpError> {
        let mut s = Complex64::new(0.0, 0.0);
        for (alpha, p) in &self.terms {
            let c = p.as_constant().ok_or(DiffOpError::NotConstantCoefficient)?;
            s += to_c64(&c) * monomial_symbol(alpha, xi);
        }
        Ok(s)
    }

    /// Top-order part of the symbol at a point: `Σ_{|α|=m} p_α(x)(iξ)^α`.
    pub fn principal_symbol(&self, point: &[f64; 3], xi: &[f64; 3]) -> Complex64 {
        let m = self.order();
        self.terms
            .iter()
            .filter(|(a, _)| order_of(a) == m)
            .map(|(a, p)| p.eval(point) * monomial_symbol(a, xi))
            .sum()
    }

    /// Exact jet of `self·f` from the jet of `f`, lower in degree by the
    /// operator order.
    pub fn apply_jet(&self, jet: &Jet) -> Result<Jet, DiffOpError> {
        let k = self.order();
        if k > jet.degree() {
            return Err(DiffOpError::DegreeOverflow {
                required: k,
                available: jet.degree(),
            });
        }
        let d = jet.degree() - k;
        let p = jet.point();
        let mut out = Jet::zero(p, d);
        for (alpha, poly) in &self.terms {
            let dj = jet.partial(alpha)?.truncate(d);
            out = &out + &(&poly.taylor(&p, d) * &dj);
        }
        Ok(out)
    }

    /// `(self·f)(p)`.
    pub fn apply(&self, f: &dyn JetFunction, p: &[f64; 3]) -> Result<Complex64, DiffOpError> {
        let k = self.order();
        Ok(self.apply_jet(&f.jet(p, k))?.value())
    }

    /// The conjugated operator `m̂ ∘ self ∘ m̂⁻¹`, i.e. `F ↦ (self(F∘m⁻¹))∘m`,
    /// as an exact polynomial operator.
    pub fn pushforward(&self, m: &CoordMap) -> Result<Self, DiffOpError> {
        // m̂ ∂_i m̂⁻¹ = Σ_j ((∂_i m⁻¹_j) ∘ m) ∂_j
        let conj: [Self; 3] = std::array::from_fn(|i| {
            let mut op = Self::zero();
            for j in 0..3 {
                let mut e = [0; 3];
                e[j] = 1;
                let c = m.inverse_polys()[j].deriv(i).substitute(m.forward());
                op.add_term(e, c);
            }
            op
        });
        let mut out = Self::zero();
        for (alpha, p) in &self.terms {
            let mut t = Self::term(p.substitute(m.forward()), [0, 0, 0]);
            for v in 0..3 {
                for _ in 0..alpha[v] {
                    t = t.compose(&conj[v])?;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// `L = −∂x − i∂y − 2y∂z + 2ix∂z`, the Lewy operator.
    pub fn lewy() -> Self {
        named("(-1)*dx + (-1*i)*dy + (-2*y)*dz + (2*i*x)*dz")
    }

    /// `L⋆ = −∂x + i∂y − 2y∂z − 2ix∂z`.
    pub fn lewy_star() -> Self {
        named("(-1)*dx + (1*i)*dy + (-2*y)*dz + (-2*i*x)*dz")
    }

    /// The Lewy operator written as `−∂x − i∂y + 2i(x + iy)∂z`.
    pub fn lewy_complex_form() -> Self {
        named("(-1)*dx + (-1*i)*dy + (2*i*(x + i*y))*dz")
    }

    /// `Q = ∂x − i∂y`.
    pub fn cauchy_riemann() -> Self {
        named("dx + (-1*i)*dy")
    }

    /// `Q⋆ = ∂x + i∂y`.
    pub fn cauchy_riemann_star() -> Self {
        named("dx + (1*i)*dy")
    }

    /// `R = −i∂x + ∂y`.
    pub fn cr_rotated() -> Self {
        named("(-1*i)*dx + dy")
    }

    /// `R⋆ = i∂x + ∂y`.
    pub fn cr_rotated_star() -> Self {
        named("(1*i)*dx + dy")
    }

    /// `P = −i∂x + ∂y − 2x∂z − 2iy∂z`.
    pub fn hormander_p() -> Self {
        named("(-1*i)*dx + dy + (-2*x)*dz + (-2*i*y)*dz")
    }

    /// `P̄ = i∂x + ∂y − 2x∂z + 2iy∂z`.
    pub fn hormander_p_bar() -> Self {
        named("(1*i)*dx + dy + (-2*x)*dz + (2*i*y)*dz")
    }

    /// `Q(x, D) = P∘P̄∘P̄∘P`, fourth order with real-variable coefficients.
    pub fn hormander_q4() -> Self {
        let (p, pb) = (Self::hormander_p(), Self::hormander_p_bar());
        composed(&[p.clone(), pb.clone(), pb, p])
    }

    /// `∂xx + ∂yy`.
    pub fn laplacian_xy() -> Self {
        named("dxx + dyy")
    }

    /// `∂xx + ∂yy + ∂zz`.
    pub fn laplacian() -> Self {
        named("dxx + dyy + dzz")
    }

    /// The displayed Γ-conjugate of `∂x + i∂y`: `y∂z + ∂x + i∂y + ix∂z`.
    pub fn gamma_cr_form() -> Self {
        named("(y)*dz + dx + (i)*dy + (i*x)*dz")
    }

    /// The displayed Γ-conjugate of the Laplacian:
    /// `∂xx − ∂yy − 2x∂z∂y + 2y∂z∂x + (y² − x²)∂zz + ∂zz`.
    pub fn gamma_laplacian_form() -> Self {
        named("dxx + (-1)*dyy + (-2*x)*dzy + (2*y)*dzx + (y^2 - x^2)*dzz + dzz")
    }

    /// The displayed expansion of `ħ(−i∂x)ħ`: `−i∂x − 2iy∂z`.
    pub fn hbar_dx_form() -> Self {
        named("(-1*i)*dx + (-2*i*y)*dz")
    }

    /// The displayed expansion of `ħ∂yħ`: `∂y − 2x∂z`.
    pub fn hbar_dy_form() -> Self {
        named("dy + (-2*x)*dz")
    }

    /// `∂xx + ∂yy + 4x∂z∂y − 4y∂z∂x + 4(y² + x²)∂zz`, the Heisenberg
    /// sub-Laplacian.
    pub fn sublaplacian() -> Self {
        named("dxx + dyy + (4*x)*dzy + (-4*y)*dzx + (4*(y^2 + x^2))*dzz")
    }

    /// The sub-Laplacian shifted by `−4i∂z`.
    pub fn sublaplacian_shifted() -> Self {
        &Self::sublaplacian() + &named("(-4*i)*dz")
    }

    /// `X² + Y²` for the left-invariant fields.
    pub fn sum_of_squares() -> Self {
        &square(&PolyVectorField::heis_x()) + &square(&PolyVectorField::heis_y())
    }

    /// `Δ_{h1} = Z² + Y² + X²` (left-invariant fields).
    pub fn delta_h1() -> Self {
        &square(&PolyVectorField::heis_z()) + &Self::sum_of_squares()
    }

    /// `Δ_{h2} = Z² + Y_r² + X_r²` (right-invariant fields).
    pub fn delta_h2() -> Self {
        &(&square(&PolyVectorField::heis_z()) + &square(&PolyVectorField::heis_y_right()))
            + &square(&PolyVectorField::heis_x_right())
    }

    /// `X + iY − 4iZ = ix∂z + i∂y − y∂z + ∂x − 4i∂z`.
    pub fn x_plus_iy_shifted() -> Self {
        named("(i*x)*dz + (i)*dy + (-1*y)*dz + dx + (-4*i)*dz")
    }
}

fn monomial_symbol(alpha: &Exp, xi: &[f64; 3]) -> Complex64 {
    (0..3)
        .map(|v| Complex64::new(0.0, xi[v]).powu(alpha[v] as u32))
        .product()
}

impl Add<&PolyDiffOp> for &PolyDiffOp {
    type Output = PolyDiffOp;
    fn add(self, o: &PolyDiffOp) -> PolyDiffOp {
        let mut out = self.clone();
        for (a, p) in &o.terms {
            out.add_term(*a, p.clone());
        }
        out
    }
}

impl Sub<&PolyDiffOp> for &PolyDiffOp {
    type Output = PolyDiffOp;
    fn sub(self, o: &PolyDiffOp) -> PolyDiffOp {
        self + &(-o)
    }
}

impl Neg for &PolyDiffOp {
    type Output = PolyDiffOp;
    fn neg(self) -> PolyDiffOp {
        self.scale(&gr(-1, 0))
    }
}
