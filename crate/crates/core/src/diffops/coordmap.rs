use super::jet::Jet;
use super::poly::{gr, Poly, X, Y, Z};
use super::DiffOpError;

/// Polynomial change of coordinates of ℝ³ with a polynomial inverse.
///
/// As an operator on functions it acts by precomposition, `m̂F = F ∘ m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordMap {
    pub name: String,
    forward: [Poly; 3],
    inverse: [Poly; 3],
}

fn vars() -> [Poly; 3] {
    [Poly::var(Z), Poly::var(Y), Poly::var(X)]
}

fn xy(c: i64) -> Poly {
    Poly::monomial(gr(c, 0), [0, 1, 1])
}

impl CoordMap {
    /// Checks `forward ∘ inverse = inverse ∘ forward = id` as polynomials.
    pub fn new(name: &str, forward: [Poly; 3], inverse: [Poly; 3]) -> Result<Self, DiffOpError> {
        let id = vars();
        let fi: Vec<Poly> = forward.iter().map(|p| p.substitute(&inverse)).collect();
        let if_: Vec<Poly> = inverse.iter().map(|p| p.substitute(&forward)).collect();
        if fi != id || if_ != id {
            return Err(DiffOpError::NotInverse(name.to_string()));
        }
        Ok(Self {
            name: name.to_string(),
            forward,
            inverse,
        })
    }

    fn known(name: &str, forward: [Poly; 3], inverse: [Poly; 3]) -> Self {
        Self::new(name, forward, inverse).expect("built-in maps are invertible")
    }

    pub fn forward(&self) -> &[Poly; 3] {
        &self.forward
    }

    pub fn inverse_polys(&self) -> &[Poly; 3] {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        Self {
            name: format!("{}⁻¹", self.name),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `(self ∘ other)(p) = self(other(p))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            name: format!("{}∘{}", self.name, other.name),
            forward: std::array::from_fn(|v| self.forward[v].substitute(&other.forward)),
            inverse: std::array::from_fn(|v| other.inverse[v].substitute(&self.inverse)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.forward == vars()
    }

    pub fn apply(&self, p: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|v| self.forward[v].eval(p).re)
    }

    /// Jet of `F ∘ self` at `p`, from the jet of `F` at `self(p)`.
    pub fn pull_jet(&self, jet_at_image: &Jet, p: &[f64; 3]) -> Jet {
        let d = jet_at_image.degree();
        let maps: [Jet; 3] = std::array::from_fn(|v| self.forward[v].taylor(p, d));
        jet_at_image.compose(&maps)
    }

    pub fn identity() -> Self {
        Self::known("id", vars(), vars())
    }

    /// `ħ: (z, y, x) ↦ (z − 2xy, y, −x)`, an involution.
    pub fn hbar() -> Self {
        let f = [&Poly::var(Z) + &xy(-2), Poly::var(Y), -&Poly::var(X)];
        Self::known("ħ", f.clone(), f)
    }

    /// `(z, y, x) ↦ (z, y, −x)`, the reparametrization `(z, y, −x)`.
    pub fn flip_x() -> Self {
        let f = [Poly::var(Z), Poly::var(Y), -&Poly::var(X)];
        Self::known("σx", f.clone(), f)
    }

    /// `(z, y, x) ↦ (z, −y, x)`.
    pub fn flip_y() -> Self {
        let f = [Poly::var(Z), -&Poly::var(Y), Poly::var(X)];
        Self::known("σy", f.clone(), f)
    }

    /// `Γ: (z, y, x) ↦ (z − xy, y, x)`.
    pub fn gamma() -> Self {
        Self::known(
            "Γ",
            [&Poly::var(Z) + &xy(-1), Poly::var(Y), Poly::var(X)],
            [&Poly::var(Z) + &xy(1), Poly::var(Y), Poly::var(X)],
        )
    }

    /// `Γ⁻¹: (z, y, x) ↦ (z + xy, y, x)`.
    pub fn gamma_inv() -> Self {
        let mut m = Self::gamma().inverse();
        m.name = "Γ⁻¹".into();
        m
    }

    /// `Λ: (z, y, x) ↦ (z + xy, y, x)`.
    pub fn lambda() -> Self {
        let mut m = Self::gamma_inv();
        m.name = "Λ".into();
        m
    }

    /// `τ: (z, y, x) ↦ (z + xy, −y, x)`, an involution.
    pub fn tau() -> Self {
        let f = [&Poly::var(Z) + &xy(1), -&Poly::var(Y), Poly::var(X)];
        Self::known("τ", f.clone(), f)
    }

    /// `π: (z, y, x) ↦ (z + xy, y, −x)`, an involution.
    pub fn pi() -> Self {
        let f = [&Poly::var(Z) + &xy(1), Poly::var(Y), -&Poly::var(X)];
        Self::known("π", f.clone(), f)
    }
}
