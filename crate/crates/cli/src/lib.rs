//! Command-line front end for `toric-wci-core`: file formats, the bundled
//! example corpus and the golden-value scorecard.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource
//! budget exceeded.

pub mod commands;
pub mod corpus;
pub mod format;
pub mod verify;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const BUDGET_ENV: &str = "TORIC_WCI_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] toric_wci_core::Error),
}

impl CliError {
    pub fn parse(origin: &str, e: &serde_json::Error) -> Self {
        CliError::Input(format!("{origin}:{}:{}: {e}", e.line(), e.column()))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(toric_wci_core::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub json: bool,
    pub filter: Option<String>,
    pub budget: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { json: false, filter: None, budget: toric_wci_core::DEFAULT_BUDGET }
    }
}

/// Text to print and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }
}

/// Budget from the command line, else from the environment, else the default.
pub fn resolve_budget(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{BUDGET_ENV}={v:?} is not a nonnegative integer"))),
        None => Ok(toric_wci_core::DEFAULT_BUDGET),
    }
}
