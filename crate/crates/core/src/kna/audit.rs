use nalgebra::DMatrix;
use serde::Serialize;

use crate::groups::{symplectic_form, Mat4};

/// Dimensions of the Iwasawa subalgebras, each computed as the null space of
/// a stack of linear constraints on 4×4 matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionAudit {
    pub group: String,
    pub group_dim: usize,
    pub k: usize,
    pub a: usize,
    pub n: usize,
}

impl DimensionAudit {
    pub fn is_consistent(&self) -> bool {
        self.k + self.a + self.n == self.group_dim
    }
}

type Constraint = Box<dyn Fn(&Mat4) -> Vec<f64>>;

/// `16 − rank` of the stacked constraints, by SVD.
fn null_dim(constraints: &[&Constraint]) -> usize {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for e in 0..16 {
        let mut x = Mat4::zeros();
        x[(e / 4, e % 4)] = 1.0;
        let mut vals = Vec::new();
        for c in constraints {
            vals.extend(c(&x));
        }
        if rows.is_empty() {
            rows = vec![vec![0.0; 16]; vals.len()];
        }
        for (r, v) in rows.iter_mut().zip(vals) {
            r[e] = v;
        }
    }
    let m = DMatrix::from_fn(rows.len(), 16, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.max();
    let rank = sv.iter().filter(|&&s| s > 1e-10 * max.max(1.0)).count();
    16 - rank
}

fn entries(m: Mat4) -> Vec<f64> {
    m.iter().copied().collect()
}

fn traceless() -> Constraint {
    Box::new(|x: &Mat4| vec![x.trace()])
}

fn hamiltonian() -> Constraint {
    let j = symplectic_form();
    Box::new(move |x: &Mat4| entries(x * j + j * x.transpose()))
}

fn skew() -> Constraint {
    Box::new(|x: &Mat4| entries(x + x.transpose()))
}

fn diagonal() -> Constraint {
    Box::new(|x: &Mat4| {
        (0..16)
            .filter(|e| e / 4 != e % 4)
            .map(|e| x[(e / 4, e % 4)])
            .collect()
    })
}

/// Entries outside the `allowed` positions vanish.
fn pattern(allowed: Vec<(usize, usize)>) -> Constraint {
    Box::new(move |x: &Mat4| {
        (0..16)
            .map(|e| (e / 4, e % 4))
            .filter(|p| !allowed.contains(p))
            .map(|p| x[p])
            .collect()
    })
}

fn strictly_upper() -> Vec<(usize, usize)> {
    (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .collect()
}

pub fn sl4_dimension_audit() -> DimensionAudit {
    let (t, s, d) = (traceless(), skew(), diagonal());
    let n = pattern(strictly_upper());
    DimensionAudit {
        group: "SL(4,R)".into(),
        group_dim: null_dim(&[&t]),
        k: null_dim(&[&t, &s]),
        a: null_dim(&[&t, &d]),
        n: null_dim(&[&t, &n]),
    }
}

/// The symplectic subalgebras are the SL(4) ones intersected with the
/// Hamiltonian condition `XJ + JXᵀ = 0`, with N taken triangular in the basis
/// order (e1, e2, e4, e3).
pub fn sp4_dimension_audit() -> DimensionAudit {
    let (h, s, d) = (hamiltonian(), skew(), diagonal());
    let swap = |i: usize| match i {
        2 => 3,
        3 => 2,
        i => i,
    };
    let n = pattern(
        strictly_upper()
            .into_iter()
            .map(|(i, j)| (swap(i), swap(j)))
            .collect(),
    );
    DimensionAudit {
        group: "SP(4,R)".into(),
        group_dim: null_dim(&[&h]),
        k: null_dim(&[&h, &s]),
        a: null_dim(&[&h, &d]),
        n: null_dim(&[&h, &n]),
    }
}
