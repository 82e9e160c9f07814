//! Verification suites over `lgha-core`, with JSON/CSV reports.
//!
//! [`suites::run`] executes one named suite under a [`config::SuiteConfig`]
//! and returns a [`report::Report`]; the binary wraps it with argument
//! parsing, file output and exit codes.

pub mod config;
pub mod report;
pub mod suites;

use lgha_core::diffops::DiffOpError;
use lgha_core::kna::KnaError;
use lgha_core::nilfourier::NilFourierError;
use lgha_core::peterweyl::PeterWeylError;
use lgha_core::quadrature::QuadError;

/// Exit code when every check passes.
pub const EXIT_PASS: i32 = 0;
/// Exit code when at least one check fails or a computation errors out.
pub const EXIT_CHECK_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Compute(_) | CliError::Io(_) => EXIT_CHECK_FAILURE,
        }
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::BudgetExceeded { .. } | QuadError::TooFewSamples { .. } => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<NilFourierError> for CliError {
    fn from(e: NilFourierError) -> Self {
        match e {
            NilFourierError::Quad(q) => q.into(),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<KnaError> for CliError {
    fn from(e: KnaError) -> Self {
        match e {
            KnaError::Quad(q) => q.into(),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<DiffOpError> for CliError {
    fn from(e: DiffOpError) -> Self {
        match e {
            DiffOpError::Quad(q) => q.into(),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<PeterWeylError> for CliError {
    fn from(e: PeterWeylError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<lgha_core::groups::GroupError> for CliError {
    fn from(e: lgha_core::groups::GroupError) -> Self {
        CliError::Compute(e.to_string())
    }
}
