use std::fmt;

use serde::{Deserialize, Serialize};

use crate::quadrature::HalfInt;

use super::PeterWeylError;

/// Index of an irreducible unitary representation.
pub trait IrrepLabel: Copy + Ord + fmt::Debug + fmt::Display + Send + Sync {
    fn dim(&self) -> usize;
}

/// `(j1, j2)`: the representation `D^{j1} ⊗ D^{j2}` of SU(2)×SU(2). It
/// descends to SO(4) exactly when `j1 + j2` is an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct So4Label {
    pub j1: HalfInt,
    pub j2: HalfInt,
}

impl So4Label {
    pub const TRIVIAL: So4Label = So4Label {
        j1: HalfInt::ZERO,
        j2: HalfInt::ZERO,
    };

    pub fn new(j1: HalfInt, j2: HalfInt) -> Result<Self, PeterWeylError> {
        if (j1.twice() + j2.twice()) % 2 != 0 {
            return Err(PeterWeylError::ParityViolation { j1, j2 });
        }
        Ok(Self { j1, j2 })
    }
}

impl IrrepLabel for So4Label {
    fn dim(&self) -> usize {
        self.j1.dim() * self.j2.dim()
    }
}

impl fmt::Display for So4Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j1, self.j2)
    }
}

/// All SO(4) labels with `j1, j2 ≤ j`.
pub fn so4_labels(j: HalfInt) -> Vec<So4Label> {
    let n = j.twice();
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            if let Ok(l) = So4Label::new(HalfInt::from_twice(a), HalfInt::from_twice(b)) {
                out.push(l);
            }
        }
    }
    out
}

/// Highest weight `(m1 ≥ m2)` of U(2); the representation is
/// `det^{m2} ⊗ Sym^{m1−m2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct U2Label {
    pub m1: i32,
    pub m2: i32,
}

impl U2Label {
    pub fn new(m1: i32, m2: i32) -> Result<Self, PeterWeylError> {
        if m1 < m2 {
            return Err(PeterWeylError::InvalidLabel(format!(
                "U(2) weight ({m1},{m2}) is not dominant"
            )));
        }
        Ok(Self { m1, m2 })
    }

    /// Spin of the SU(2) part.
    pub fn spin(&self) -> HalfInt {
        HalfInt::from_twice((self.m1 - self.m2) as u32)
    }

    /// Frequency of the central phase `e^{iφ}`.
    pub fn charge(&self) -> i32 {
        self.m1 + self.m2
    }
}

impl IrrepLabel for U2Label {
    fn dim(&self) -> usize {
        (self.m1 - self.m2) as usize + 1
    }
}

impl fmt::Display for U2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m1, self.m2)
    }
}

/// All U(2) labels with `|m1|, |m2| ≤ m_max`.
pub fn u2_labels(m_max: u32) -> Vec<U2Label> {
    let m = m_max as i32;
    let mut out = Vec::new();
    for m1 in -m..=m {
        for m2 in -m..=m1 {
            out.push(U2Label { m1, m2 });
        }
    }
    out
}
