use serde::{Deserialize, Serialize};

use super::nil::NilPoint6;

/// Point of the 9-dimensional auxiliary group L = ℝ³×ℝ²×ℝ²×ℝ×ℝ.
///
/// `(x6, x5, x4)` is the vector part, `(x3, x2, x1)` the parameters of the
/// commutative factor and `(t3, t2, t1)` the parameters that act on the vector
/// part. The unipotent group sits inside L as the points with `x3 = x2 = x1 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LPoint9 {
    pub x6: f64,
    pub x5: f64,
    pub x4: f64,
    pub x3: f64,
    pub x2: f64,
    pub t3: f64,
    pub t2: f64,
    pub x1: f64,
    pub t1: f64,
}

/// Which multiplication law to use on L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LLaw {
    /// The law as displayed: `(x3, x2, x1)` are purely additive.
    Displayed,
    /// `t1` additionally shears the `(x3, x2)` pair, `x3 ↦ x3 + t1·x2`, the same
    /// way it shears `(t3, t2)`.
    Twisted,
}

impl LPoint9 {
    pub const IDENTITY: Self = Self {
        x6: 0.0,
        x5: 0.0,
        x4: 0.0,
        x3: 0.0,
        x2: 0.0,
        t3: 0.0,
        t2: 0.0,
        x1: 0.0,
        t1: 0.0,
    };

    /// Coordinates in storage order (x6, x5, x4, x3, x2, t3, t2, x1, t1).
    pub fn from_array(a: [f64; 9]) -> Self {
        Self {
            x6: a[0],
            x5: a[1],
            x4: a[2],
            x3: a[3],
            x2: a[4],
            t3: a[5],
            t2: a[6],
            x1: a[7],
            t1: a[8],
        }
    }

    pub fn to_array(&self) -> [f64; 9] {
        [
            self.x6, self.x5, self.x4, self.x3, self.x2, self.t3, self.t2, self.x1, self.t1,
        ]
    }

    /// Embeds the unipotent group: `(x1..x6) ↦ (x6, x5, x4, 0, 0, x3, x2, 0, x1)`.
    pub fn from_nil(n: &NilPoint6) -> Self {
        Self {
            x6: n.x6,
            x5: n.x5,
            x4: n.x4,
            x3: 0.0,
            x2: 0.0,
            t3: n.x3,
            t2: n.x2,
            x1: 0.0,
            t1: n.x1,
        }
    }

    /// The unipotent coordinates `(x, t3, t2, t1)` read as a `NilPoint6`.
    pub fn nil_part(&self) -> NilPoint6 {
        NilPoint6::new(self.t1, self.t2, self.t3, self.x4, self.x5, self.x6)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// The displayed law on L.
pub fn l_mul(p: &LPoint9, q: &LPoint9) -> LPoint9 {
    l_mul_with(LLaw::Displayed, p, q)
}

pub fn l_mul_with(law: LLaw, p: &LPoint9, q: &LPoint9) -> LPoint9 {
    let twist = match law {
        LLaw::Displayed => 0.0,
        LLaw::Twisted => p.t1 * q.x2,
    };
    LPoint9 {
        x6: p.x6 + q.x6 + p.t1 * q.x5 + p.t3 * q.x4,
        x5: p.x5 + q.x5 + p.t2 * q.x4,
        x4: p.x4 + q.x4,
        x3: p.x3 + q.x3 + twist,
        x2: p.x2 + q.x2,
        t3: p.t3 + q.t3 + p.t1 * q.t2,
        t2: p.t2 + q.t2,
        x1: p.x1 + q.x1,
        t1: p.t1 + q.t1,
    }
}

pub fn l_inv(p: &LPoint9) -> LPoint9 {
    l_inv_with(LLaw::Displayed, p)
}

pub fn l_inv_with(law: LLaw, p: &LPoint9) -> LPoint9 {
    let x3 = match law {
        LLaw::Displayed => -p.x3,
        LLaw::Twisted => -p.x3 + p.t1 * p.x2,
    };
    LPoint9 {
        x6: -p.x6 + p.t1 * p.x5 - p.t1 * p.t2 * p.x4 + p.t3 * p.x4,
        x5: -p.x5 + p.t2 * p.x4,
        x4: -p.x4,
        x3,
        x2: -p.x2,
        t3: -p.t3 + p.t1 * p.t2,
        t2: -p.t2,
        x1: -p.x1,
        t1: -p.t1,
    }
}
