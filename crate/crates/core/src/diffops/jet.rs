use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::poly::Exp;
use super::DiffOpError;

/// Highest total degree carried by a jet.
pub const JET_DEGREE: u8 = 4;
/// Number of monomials of total degree ≤ 4 in three variables.
pub const JET_LEN: usize = 35;

/// Monomials in graded order: entries `[n_d, n_{d+1})` have total degree `d`,
/// with `n_d = C(d+2, 3)`.
pub const MONOMIALS: [Exp; JET_LEN] = build_monomials();

/// Number of monomials of degree ≤ d.
const PREFIX: [usize; 5] = [1, 4, 10, 20, 35];

/// Index of `[a, b, c]` in [`MONOMIALS`] (255 when the degree exceeds 4).
const INDEX: [[[u8; 5]; 5]; 5] = build_index();

/// Pairs `(i, j, k)` with `MONOMIALS[i] + MONOMIALS[j] = MONOMIALS[k]`,
/// sorted by the degree of `k`; the first `C(d+6, 6)` serve degree `d`.
const PAIRS: [(u8, u8, u8); 210] = build_pairs();
const PAIR_PREFIX: [usize; 5] = [1, 7, 28, 84, 210];

const fn build_monomials() -> [Exp; JET_LEN] {
    let mut out = [[0u8; 3]; JET_LEN];
    let mut n = 0;
    let mut d = 0;
    while d <= 4 {
        let mut a = d;
        loop {
            let mut b = d - a;
            loop {
                out[n] = [a as u8, b as u8, (d - a - b) as u8];
                n += 1;
                if b == 0 {
                    break;
                }
                b -= 1;
            }
            if a == 0 {
                break;
            }
            a -= 1;
        }
        d += 1;
    }
    out
}

const fn build_index() -> [[[u8; 5]; 5]; 5] {
    let mut t = [[[255u8; 5]; 5]; 5];
    let m = build_monomials();
    let mut i = 0;
    while i < JET_LEN {
        t[m[i][0] as usize][m[i][1] as usize][m[i][2] as usize] = i as u8;
        i += 1;
    }
    t
}

const fn build_pairs() -> [(u8, u8, u8); 210] {
    let m = build_monomials();
    let idx = build_index();
    let mut out = [(0u8, 0u8, 0u8); 210];
    let mut n = 0;
    let mut s = 0;
    while s <= 4 {
        let mut i = 0;
        while i < JET_LEN {
            let mut j = 0;
            while j < JET_LEN {
                let a = m[i];
                let b = m[j];
                let deg = (a[0] + a[1] + a[2] + b[0] + b[1] + b[2]) as usize;
                if deg == s {
                    let k =
                        idx[(a[0] + b[0]) as usize][(a[1] + b[1]) as usize][(a[2] + b[2]) as usize];
                    out[n] = (i as u8, j as u8, k);
                    n += 1;
                }
                j += 1;
            }
            i += 1;
        }
        s += 1;
    }
    out
}

pub fn monomial_index(e: &Exp) -> Option<usize> {
    if e.iter().map(|&k| k as usize).sum::<usize>() > JET_DEGREE as usize {
        return None;
    }
    Some(INDEX[e[0] as usize][e[1] as usize][e[2] as usize] as usize)
}

fn factorial(k: u8) -> f64 {
    (1..=k as u32).product::<u32>() as f64
}

/// Truncated Taylor expansion `Σ c_α h^α` of a function at `point`, valid
/// through total degree `degree`. Coefficients above the degree are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    point: [f64; 3],
    degree: u8,
    c: [Complex64; JET_LEN],
}

impl Jet {
    pub fn zero(point: [f64; 3], degree: u8) -> Self {
        assert!(
            degree <= JET_DEGREE,
            "jet degree {degree} above {JET_DEGREE}"
        );
        Self {
            point,
            degree,
            c: [Complex64::new(0.0, 0.0); JET_LEN],
        }
    }

    pub fn constant(point: [f64; 3], degree: u8, v: Complex64) -> Self {
        let mut j = Self::zero(point, degree);
        j.c[0] = v;
        j
    }

    /// The coordinate function `p ↦ p_v`.
    pub fn variable(point: [f64; 3], degree: u8, v: usize) -> Self {
        let mut j = Self::constant(point, degree, Complex64::new(point[v], 0.0));
        if degree > 0 {
            let mut e = [0; 3];
            e[v] = 1;
            j.c[INDEX[e[0] as usize][e[1] as usize][e[2] as usize] as usize] =
                Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Builds a jet from coefficients given by monomial.
    pub fn from_coeffs<I: IntoIterator<Item = (Exp, Complex64)>>(
        point: [f64; 3],
        degree: u8,
        coeffs: I,
    ) -> Self {
        let mut j = Self::zero(point, degree);
        for (e, v) in coeffs {
            if let Some(i) = monomial_index(&e) {
                if i < PREFIX[degree as usize] {
                    j.c[i] += v;
                }
            }
        }
        j
    }

    pub fn point(&self) -> [f64; 3] {
        self.point
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    /// Taylor coefficient of `h^e`.
    pub fn coeff(&self, e: &Exp) -> Complex64 {
        match monomial_index(e) {
            Some(i) if i < PREFIX[self.degree as usize] => self.c[i],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `∂^e f(point) = e!·c_e`, or `None` above the jet degree.
    pub fn derivative(&self, e: &Exp) -> Option<Complex64> {
        let i = monomial_index(e)?;
        if i >= PREFIX[self.degree as usize] {
            return None;
        }
        Some(self.c[i] * factorial(e[0]) * factorial(e[1]) * factorial(e[2]))
    }

    pub fn truncate(&self, degree: u8) -> Self {
        let degree = degree.min(self.degree);
        let mut j = *self;
        j.degree = degree;
        for v in j.c.iter_mut().skip(PREFIX[degree as usize]) {
            *v = Complex64::new(0.0, 0.0);
        }
        j
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut j = *self;
        for v in j.c.iter_mut() {
            *v *= s;
        }
        j
    }

    /// Jet of `∂_v f`, one degree lower.
    pub fn diff(&self, v: usize) -> Result<Self, DiffOpError> {
        if self.degree == 0 {
            return Err(DiffOpError::DegreeOverflow {
                required: 1,
                available: 0,
            });
        }
        let mut j = Self::zero(self.point, self.degree - 1);
        for (i, e) in MONOMIALS
            .iter()
            .enumerate()
            .take(PREFIX[self.degree as usize - 1])
        {
            let mut up = *e;
            up[v] += 1;
            let k = INDEX[up[0] as usize][up[1] as usize][up[2] as usize] as usize;
            j.c[i] = self.c[k] * up[v] as f64;
        }
        Ok(j)
    }

    /// Jet of `∂^α f`.
    pub fn partial(&self, alpha: &Exp) -> Result<Self, DiffOpError> {
        let order: u8 = alpha.iter().sum();
        if order > self.degree {
            return Err(DiffOpError::DegreeOverflow {
                required: order,
                available: self.degree,
            });
        }
        let mut j = *self;
        for v in 0..3 {
            for _ in 0..alpha[v] {
                j = j.diff(v)?;
            }
        }
        Ok(j)
    }

    /// `exp` of the jet.
    pub fn exp(&self) -> Self {
        let c0 = self.c[0];
        let mut u = *self;
        u.c[0] = Complex64::new(0.0, 0.0);
        // Σ_{k ≤ degree} u^k / k!, by Horner.
        let mut acc = Self::constant(self.point, self.degree, Complex64::new(1.0, 0.0));
        for k in (1..=self.degree).rev() {
            acc = (&u * &acc).scale(Complex64::new(1.0 / k as f64, 0.0));
            acc.c[0] += 1.0;
        }
        acc.scale(c0.exp())
    }

    /// Jet of `f ∘ m` at `p`, where `self` is the jet of `f` at `m(p)` and
    /// `maps` are the jets of the three components of `m` at `p`.
    pub fn compose(&self, maps: &[Jet; 3]) -> Self {
        let p = maps[0].point;
        let degree = maps.iter().map(|m| m.degree).fold(self.degree, u8::min);
        let deltas: [Jet; 3] = std::array::from_fn(|v| {
            let mut d = maps[v].truncate(degree);
            d.c[0] = Complex64::new(0.0, 0.0);
            d
        });
        let powers: [Vec<Jet>; 3] = std::array::from_fn(|v| {
            let mut out = vec![Self::constant(p, degree, Complex64::new(1.0, 0.0))];
            for k in 1..=degree as usize {
                out.push(&out[k - 1] * &deltas[v]);
            }
            out
        });
        let mut acc = Self::zero(p, degree);
        for (i, e) in MONOMIALS.iter().enumerate().take(PREFIX[degree as usize]) {
            let c = self.c[i];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let term = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize])
                * &powers[2][e[2] as usize];
            for (a, t) in acc.c.iter_mut().zip(term.c.iter()) {
                *a += c * t;
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        self.c
            .iter()
            .zip(o.c.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        let degree = self.degree.min(o.degree);
        let mut j = Jet::zero(self.point, degree);
        for i in 0..PREFIX[degree as usize] {
            j.c[i] = self.c[i] + o.c[i];
        }
        j
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        self + &(-o)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let degree = self.degree.min(o.degree);
        let mut j = Jet::zero(self.point, degree);
        for &(a, b, k) in &PAIRS[..PAIR_PREFIX[degree as usize]] {
            j.c[k as usize] += self.c[a as usize] * o.c[b as usize];
        }
        j
    }
}
