use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

use super::coordmap::CoordMap;
use super::corpus::JetFunction;
use super::jet::{Jet, JET_DEGREE};
use super::op::PolyDiffOp;
use super::DiffOpError;

/// Pass threshold for operator identities (max absolute discrepancy).
pub const IDENTITY_TOL: f64 = 1e-9;

/// One factor of an operator expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Op {
        name: String,
        op: PolyDiffOp,
    },
    /// Precomposition `F ↦ F ∘ m`.
    Pull(CoordMap),
}

/// A product of operators and precompositions, written and applied as in
/// `ħ∘Q∘ħ`: the rightmost factor acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OpExpr {
    steps: Vec<Step>,
}

impl OpExpr {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an operator on the right.
    pub fn op(mut self, name: &str, op: PolyDiffOp) -> Self {
        self.steps.push(Step::Op {
            name: name.to_string(),
            op,
        });
        self
    }

    /// Appends a precomposition on the right.
    pub fn pull(mut self, m: CoordMap) -> Self {
        self.steps.push(Step::Pull(m));
        self
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn order(&self) -> u8 {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Op { op, .. } => op.order(),
                Step::Pull(_) => 0,
            })
            .sum()
    }

    /// Jet of `(self·f)` at `p` through `degree`, by jet arithmetic only.
    pub fn eval_jet(
        &self,
        f: &dyn JetFunction,
        p: &[f64; 3],
        degree: u8,
    ) -> Result<Jet, DiffOpError> {
        let required = degree + self.order();
        if required > JET_DEGREE {
            return Err(DiffOpError::DegreeOverflow {
                required,
                available: JET_DEGREE,
            });
        }
        self.eval_from(0, f, p, degree)
    }

    fn eval_from(
        &self,
        i: usize,
        f: &dyn JetFunction,
        p: &[f64; 3],
        degree: u8,
    ) -> Result<Jet, DiffOpError> {
        match self.steps.get(i) {
            None => Ok(f.jet(p, degree)),
            Some(Step::Pull(m)) => {
                let q = m.apply(p);
                let inner = self.eval_from(i + 1, f, &q, degree)?;
                Ok(m.pull_jet(&inner, p))
            }
            Some(Step::Op { op, .. }) => {
                let inner = self.eval_from(i + 1, f, p, degree + op.order())?;
                op.apply_jet(&inner)
            }
        }
    }

    pub fn value(&self, f: &dyn JetFunction, p: &[f64; 3]) -> Result<Complex64, DiffOpError> {
        Ok(self.eval_jet(f, p, 0)?.value())
    }

    /// Rewrites the expression as `m̂ ∘ B` with one precomposition and one
    /// exact polynomial operator, using `A ∘ n̂ = n̂ ∘ (n̂⁻¹ A n̂)`.
    pub fn normal_form(&self) -> Result<(CoordMap, PolyDiffOp), DiffOpError> {
        let mut map = CoordMap::identity();
        let mut op = PolyDiffOp::identity();
        for s in &self.steps {
            match s {
                Step::Op { op: a, .. } => op = op.compose(a)?,
                Step::Pull(n) => {
                    // m̂ ∘ B ∘ n̂ = (n∘m)^ ∘ (n̂⁻¹ B n̂)
                    op = op.pushforward(&n.inverse())?;
                    map = n.compose(&map);
                }
            }
        }
        Ok((map, op))
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "id");
        }
        let names: Vec<&str> = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Op { name, .. } => name.as_str(),
                Step::Pull(m) => m.name.as_str(),
            })
            .collect();
        write!(f, "{}", names.join("∘"))
    }
}

/// Largest discrepancy between two expressions over a corpus and points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub samples: usize,
    pub max_abs: f64,
    /// Largest `|lhs|` seen, so a pass is not a comparison of zeros.
    pub max_value: f64,
}

/// `max |lhs·f(p) − rhs·f(p)|` over every function and point, in parallel
/// over the pairs.
pub fn verify_identity(
    lhs: &OpExpr,
    rhs: &OpExpr,
    corpus: &[Arc<dyn JetFunction>],
    points: &[[f64; 3]],
) -> Result<Discrepancy, DiffOpError> {
    let n = corpus.len() * points.len();
    let pairs: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let f = corpus[k / points.len()].as_ref();
            let p = &points[k % points.len()];
            let a = lhs.value(f, p)?;
            let b = rhs.value(f, p)?;
            Ok(((a - b).norm(), a.norm()))
        })
        .collect::<Result<_, DiffOpError>>()?;
    let (max_abs, max_value) = pairs
        .iter()
        .fold((0.0f64, 0.0f64), |(m, v), &(d, a)| (m.max(d), v.max(a)));
    Ok(Discrepancy {
        samples: n,
        max_abs,
        max_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub anchor: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(flatten)]
    pub discrepancy: Discrepancy,
    pub tol: f64,
    pub pass: bool,
}

/// An operator identity `lhs = rhs` with a descriptive anchor.
#[derive(Debug, Clone)]
pub struct NamedIdentity {
    pub name: String,
    pub anchor: String,
    pub lhs: OpExpr,
    pub rhs: OpExpr,
}

impl NamedIdentity {
    pub fn new(name: &str, anchor: &str, lhs: OpExpr, rhs: OpExpr) -> Self {
        Self {
            name: name.to_string(),
            anchor: anchor.to_string(),
            lhs,
            rhs,
        }
    }

    pub fn verify(
        &self,
        corpus: &[Arc<dyn JetFunction>],
        points: &[[f64; 3]],
    ) -> Result<IdentityReport, DiffOpError> {
        let d = verify_identity(&self.lhs, &self.rhs, corpus, points)?;
        Ok(IdentityReport {
            name: self.name.clone(),
            anchor: self.anchor.clone(),
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
            discrepancy: d,
            tol: IDENTITY_TOL,
            pass: d.max_abs < IDENTITY_TOL,
        })
    }
}
