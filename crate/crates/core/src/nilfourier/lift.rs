use num_complex::Complex64;

use crate::groups::{LPoint9, NilPoint6};

/// `ρ₂(x3, x2)(y6, y5, y4) = (y6 + x3·y4, y5 + x2·y4, y4)`.
pub fn rho2(x3: f64, x2: f64, y: [f64; 3]) -> [f64; 3] {
    [y[0] + x3 * y[2], y[1] + x2 * y[2], y[2]]
}

/// `ρ₁(x1)(y6, y5, y4, y3, y2) = (y6 + x1·y5, y5, y4, y3 + x1·y2, y2)`.
pub fn rho1(x1: f64, y: [f64; 5]) -> [f64; 5] {
    [y[0] + x1 * y[1], y[1], y[2], y[3] + x1 * y[4], y[4]]
}

/// The point of N at which the lift of `f` reads `f`:
/// `(ρ₁(x1)(ρ₂(x3, x2)(x), t3 + x3, t2 + x2), t1 + x1)`.
///
/// The last slot pairs `t1` with `x1` the same way `t3, t2` pair with
/// `x3, x2`; with a bare `t1` the lift would not be invariant.
pub fn lift_args(p: &LPoint9) -> NilPoint6 {
    let v = rho2(p.x3, p.x2, [p.x6, p.x5, p.x4]);
    let w = rho1(p.x1, [v[0], v[1], v[2], p.t3 + p.x3, p.t2 + p.x2]);
    NilPoint6::new(p.t1 + p.x1, w[4], w[3], w[2], w[1], w[0])
}

/// The shift under which lifted functions are invariant: `ρ₂(r, k)` on the
/// vector part, `(x3, x2) ↦ (x3 − r, x2 − k)`, `(t3, t2) ↦ (t3 + r, t2 + k)`,
/// then `ρ₁(h)` on the vector part and on both pairs, `x1 ↦ x1 − h`,
/// `t1 ↦ t1 + h`.
pub fn invariance_shift(p: &LPoint9, h: f64, r: f64, k: f64) -> LPoint9 {
    let v = rho2(r, k, [p.x6, p.x5, p.x4]);
    let w = rho1(h, [v[0], v[1], v[2], p.x3 - r, p.x2 - k]);
    let t = rho1(h, [0.0, 0.0, 0.0, p.t3 + r, p.t2 + k]);
    LPoint9 {
        x6: w[0],
        x5: w[1],
        x4: w[2],
        x3: w[3],
        x2: w[4],
        t3: t[3],
        t2: t[4],
        x1: p.x1 - h,
        t1: p.t1 + h,
    }
}

/// `f̃`: a function on N extended to L.
#[derive(Debug, Clone)]
pub struct LiftedFunction<F> {
    pub base: F,
}

impl<F: Fn(&NilPoint6) -> Complex64> LiftedFunction<F> {
    pub fn eval(&self, p: &LPoint9) -> Complex64 {
        (self.base)(&lift_args(p))
    }
}

pub fn lift_to_l<F: Fn(&NilPoint6) -> Complex64>(f: F) -> LiftedFunction<F> {
    LiftedFunction { base: f }
}
