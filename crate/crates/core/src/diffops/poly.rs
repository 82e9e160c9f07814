use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use super::jet::Jet;

/// Exact Gaussian-rational scalar `a + ib`, `a, b ∈ ℚ`.
pub type GRat = Complex<Rational64>;

/// Exponents of `z^a y^b x^c`, stored as `[a, b, c]`.
pub type Exp = [u8; 3];

pub const Z: usize = 0;
pub const Y: usize = 1;
pub const X: usize = 2;
pub const VAR_NAMES: [char; 3] = ['z', 'y', 'x'];

pub fn gr(re: i64, im: i64) -> GRat {
    Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
}

pub fn gr_ratio(num: i64, den: i64) -> GRat {
    Complex::new(Rational64::new(num, den), Rational64::zero())
}

pub fn to_c64(c: &GRat) -> Complex64 {
    Complex64::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Polynomial in `(z, y, x)` with exact Gaussian-rational coefficients.
/// Zero coefficients are never stored, so equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Exp, GRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GRat::one())
    }

    pub fn constant(c: GRat) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn var(v: usize) -> Self {
        let mut e = [0; 3];
        e[v] = 1;
        Self::monomial(GRat::one(), e)
    }

    pub fn monomial(c: GRat, e: Exp) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, GRat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exp, c: GRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(GRat::zero);
        *entry = *entry + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &GRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> GRat {
        self.terms.get(e).copied().unwrap_or_else(GRat::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<GRat> {
        match self.terms.len() {
            0 => Some(GRat::zero()),
            1 => self.terms.get(&[0, 0, 0]).copied(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &GRat) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `∂_v` of the polynomial.
    pub fn deriv(&self, v: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[v] > 0).map(|(e, c)| {
            let mut d = *e;
            d[v] -= 1;
            (d, c * gr(e[v] as i64, 0))
        }))
    }

    /// `∂^α` of the polynomial.
    pub fn deriv_multi(&self, alpha: &Exp) -> Self {
        let mut p = self.clone();
        for v in 0..3 {
            for _ in 0..alpha[v] {
                p = p.deriv(v);
            }
        }
        p
    }

    pub fn eval(&self, p: &[f64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                to_c64(c) * p[0].powi(e[0] as i32) * p[1].powi(e[1] as i32) * p[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// Substitutes polynomials for `(z, y, x)`.
    pub fn substitute(&self, subs: &[Poly; 3]) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(*c);
            for v in 0..3 {
                t = &t * &subs[v].pow(e[v] as u32);
            }
            out = &out + &t;
        }
        out
    }

    /// Taylor jet at `p`. Exact up to rounding, since a polynomial of degree
    /// ≤ 4 is its own degree-4 jet.
    pub fn taylor(&self, p: &[f64; 3], degree: u8) -> Jet {
        let vars: [Jet; 3] = std::array::from_fn(|v| Jet::variable(*p, degree, v));
        let mut out = Jet::zero(*p, degree);
        for (e, c) in &self.terms {
            let mut t = Jet::constant(*p, degree, to_c64(c));
            for v in 0..3 {
                for _ in 0..e[v] {
                    t = &t * &vars[v];
                }
            }
            out = &out + &t;
        }
        out
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&gr(-1, 0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
