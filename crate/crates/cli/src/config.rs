//! Suite configuration as read from `--config <json>`.
//!
//! Every field is optional; missing ones take the defaults below. Unknown
//! keys, at any level, are rejected, and so are unknown tolerance names.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Tolerance keys and their default values. A config may override any of
/// them through its `tolerances` map.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("group-law", 1e-12),
    ("quotient-formula", 1e-12),
    ("iwasawa", 1e-10),
    ("modulus", 1e-8),
    ("nil-plancherel-separable", 1e-8),
    ("nil-plancherel-grid", 1e-6),
    ("bilinear-grid", 1e-6),
    ("mc-stderrs", 3.0),
    ("convolution-equality", 2e-2),
    ("schur", 1e-12),
    ("peter-weyl-inversion", 1e-10),
    ("peter-weyl-plancherel", 1e-10),
    ("kna-plancherel", 1e-6),
    ("nested-spot", 1e-6),
    ("lift-invariance", 1e-10),
    ("affine-law", 1e-12),
    ("operator-identity", 1e-9),
    ("principal-symbol", 1e-10),
    ("cr-solve", 1e-6),
    ("lewy-solve", 1e-4),
    ("four-stage-solve", 1e-3),
    ("generic-residual", 1e-3),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Largest tensor grid (total points) any check may allocate.
    pub max_grid_points: usize,
    /// Largest Monte Carlo sample count any check may draw.
    pub max_mc_samples: usize,
    /// Largest SO(4) band-limit, in units of 1/2 allowed (e.g. 2 or 2.5).
    pub max_so4_bandlimit: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            max_grid_points: lgha_core::quadrature::DEFAULT_GRID_BUDGET,
            max_mc_samples: 1_000_000,
            max_so4_bandlimit: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub budgets: Budgets,
    /// Overrides of [`DEFAULT_TOLERANCES`], by key.
    pub tolerances: BTreeMap<String, f64>,
    /// Report path; standard output when absent.
    pub out: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: "all".into(),
            seed: 42,
            budgets: Budgets::default(),
            tolerances: BTreeMap::new(),
            out: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let b = &self.budgets;
        if b.max_grid_points == 0 || b.max_mc_samples == 0 {
            return Err(CliError::Config("budgets must be positive".into()));
        }
        let twice = 2.0 * b.max_so4_bandlimit;
        if !(b.max_so4_bandlimit > 0.0) || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(CliError::Config(format!(
                "max_so4_bandlimit must be a positive multiple of 1/2, got {}",
                b.max_so4_bandlimit
            )));
        }
        for (k, v) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(name, _)| name == k) {
                return Err(CliError::Config(format!("unknown tolerance key {k:?}")));
            }
            if !(*v >= 0.0) || !v.is_finite() {
                return Err(CliError::Config(format!(
                    "tolerance {k:?} must be finite and non-negative"
                )));
            }
        }
        crate::suites::suite_names()
            .contains(&self.suite.as_str())
            .then_some(())
            .ok_or_else(|| CliError::Config(format!("unknown suite {:?}", self.suite)))
    }

    /// The tolerance for `key`, override first.
    ///
    /// # Panics
    /// On a key missing from [`DEFAULT_TOLERANCES`]; suites only use listed keys.
    pub fn tol(&self, key: &str) -> f64 {
        if let Some(v) = self.tolerances.get(key) {
            return *v;
        }
        DEFAULT_TOLERANCES
            .iter()
            .find(|(name, _)| *name == key)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("tolerance key {key} is not registered"))
    }

    /// The SO(4) band-limit budget as twice its value.
    pub fn so4_bandlimit_twice(&self) -> u32 {
        (2.0 * self.budgets.max_so4_bandlimit) as u32
    }
}

/// Parses a count written as an integer or in float notation (`1e6`).
pub fn parse_count(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v.fract() != 0.0 || !(0.0..=usize::MAX as f64).contains(&v) {
        return Err(format!("not a non-negative integer: {s}"));
    }
    Ok(v as usize)
}
