//! Per-check rows, the report envelope, and atomic JSON/CSV output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;
use crate::CliError;

/// How `pass` is decided from the errors and `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compare {
    /// `rel_err ≤ tol`.
    Rel,
    /// `abs_err ≤ tol`.
    Abs,
    /// `abs_err ≤ tol·stderr`, for Monte Carlo sides.
    StdErrs,
    /// `abs_err > tol`: a control that must detect a discrepancy.
    Exceeds,
    /// Exact equality, carried by the flag alone.
    Exact,
}

/// A reported value; complex values serialize as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Complex([f64; 2]),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Real(v)
    }
}

impl From<Complex64> for Quantity {
    fn from(v: Complex64) -> Self {
        Quantity::Complex([v.re, v.im])
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Real(v) => write!(f, "{v:e}"),
            Quantity::Complex([re, im]) => write!(f, "{re:e}{im:+e}i"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Descriptive label of the statement checked, or "plumbing".
    pub anchor: String,
    /// Acceptance criterion this row belongs to, if any.
    pub criterion: Option<u8>,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub compare: Compare,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
    /// Free-form context: method used, sample counts, fallbacks.
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
    pub pass: bool,
}

impl Check {
    fn build(
        name: &str,
        anchor: &str,
        (lhs, rhs): (Quantity, Quantity),
        (abs_err, rel_err): (f64, f64),
        compare: Compare,
        tol: f64,
        stderr: Option<f64>,
        exact: bool,
    ) -> Self {
        let pass = match compare {
            Compare::Rel => rel_err <= tol,
            Compare::Abs => abs_err <= tol,
            Compare::StdErrs => stderr.is_some_and(|s| abs_err <= tol * s),
            Compare::Exceeds => abs_err > tol,
            Compare::Exact => exact,
        };
        Self {
            name: name.into(),
            anchor: anchor.into(),
            criterion: None,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            compare,
            stderr,
            note: String::new(),
            pass,
        }
    }

    /// Two sides compared by relative error.
    pub fn rel(
        name: &str,
        anchor: &str,
        lhs: impl Into<Quantity>,
        rhs: impl Into<Quantity>,
        tol: f64,
    ) -> Self {
        let (l, r) = (lhs.into(), rhs.into());
        let (abs, rel) = errors(l, r);
        Self::build(
            name,
            anchor,
            (l, r),
            (abs, rel),
            Compare::Rel,
            tol,
            None,
            false,
        )
    }

    /// Two sides whose relative error was computed elsewhere (e.g. as a
    /// worst case over several comparisons).
    pub fn rel_given(
        name: &str,
        anchor: &str,
        lhs: impl Into<Quantity>,
        rhs: impl Into<Quantity>,
        rel_err: f64,
        tol: f64,
    ) -> Self {
        let (l, r) = (lhs.into(), rhs.into());
        let (abs, _) = errors(l, r);
        Self::build(
            name,
            anchor,
            (l, r),
            (abs, rel_err),
            Compare::Rel,
            tol,
            None,
            false,
        )
    }

    /// A worst-case discrepancy against zero, with `scale` the size of the
    /// quantities compared (so that `rel_err` is meaningful).
    pub fn max_abs(name: &str, anchor: &str, discrepancy: f64, scale: f64, tol: f64) -> Self {
        let rel = if scale > 0.0 {
            discrepancy / scale
        } else {
            discrepancy
        };
        Self::build(
            name,
            anchor,
            (discrepancy.into(), 0.0.into()),
            (discrepancy, rel),
            Compare::Abs,
            tol,
            None,
            false,
        )
    }

    /// Monte Carlo side `lhs` against `rhs` within `tol` standard errors.
    pub fn stderrs(
        name: &str,
        anchor: &str,
        lhs: impl Into<Quantity>,
        rhs: impl Into<Quantity>,
        stderr: f64,
        tol: f64,
    ) -> Self {
        let (l, r) = (lhs.into(), rhs.into());
        let (abs, rel) = errors(l, r);
        Self::build(
            name,
            anchor,
            (l, r),
            (abs, rel),
            Compare::StdErrs,
            tol,
            Some(stderr),
            false,
        )
    }

    /// A control that passes when `discrepancy` exceeds `tol`.
    pub fn exceeds(name: &str, anchor: &str, discrepancy: f64, scale: f64, tol: f64) -> Self {
        let rel = if scale > 0.0 {
            discrepancy / scale
        } else {
            discrepancy
        };
        Self::build(
            name,
            anchor,
            (discrepancy.into(), 0.0.into()),
            (discrepancy, rel),
            Compare::Exceeds,
            tol,
            None,
            false,
        )
    }

    /// An exact (symbolic) comparison.
    pub fn exact(name: &str, anchor: &str, holds: bool) -> Self {
        let err = if holds { 0.0 } else { 1.0 };
        Self::build(
            name,
            anchor,
            (Quantity::Real(err), Quantity::Real(0.0)),
            (err, err),
            Compare::Exact,
            0.0,
            None,
            holds,
        )
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

fn magnitude(q: Quantity) -> f64 {
    match q {
        Quantity::Real(v) => v.abs(),
        Quantity::Complex([re, im]) => re.hypot(im),
    }
}

fn difference(a: Quantity, b: Quantity) -> f64 {
    let c = |q: Quantity| match q {
        Quantity::Real(v) => Complex64::new(v, 0.0),
        Quantity::Complex([re, im]) => Complex64::new(re, im),
    };
    (c(a) - c(b)).norm()
}

fn errors(lhs: Quantity, rhs: Quantity) -> (f64, f64) {
    let abs = difference(lhs, rhs);
    let scale = magnitude(rhs);
    let rel = if scale > 0.0 {
        abs / scale
    } else if abs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    (abs, rel)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    /// UTC, ISO-8601.
    pub timestamp: String,
    pub seed: u64,
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Seconds spent per acceptance criterion. Kept out of the serialized
    /// report so that reports stay byte-identical across runs.
    #[serde(skip)]
    pub timings: BTreeMap<u8, f64>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
        w.write_record([
            "name",
            "anchor",
            "criterion",
            "lhs",
            "rhs",
            "abs_err",
            "rel_err",
            "tol",
            "compare",
            "stderr",
            "pass",
            "note",
        ])
        .map_err(io)?;
        for c in &self.checks {
            let compare = serde_json::to_value(c.compare).expect("enum serializes");
            w.write_record([
                c.name.clone(),
                c.anchor.clone(),
                c.criterion.map(|n| n.to_string()).unwrap_or_default(),
                c.lhs.to_string(),
                c.rhs.to_string(),
                format!("{:e}", c.abs_err),
                format!("{:e}", c.rel_err),
                format!("{:e}", c.tol),
                compare.as_str().unwrap_or_default().to_string(),
                c.stderr.map(|s| format!("{s:e}")).unwrap_or_default(),
                c.pass.to_string(),
                c.note.clone(),
            ])
            .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
