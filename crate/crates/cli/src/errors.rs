use std::fmt;
use std::path::Path;

use opidyn_core::dynamics::SimError;

/// Query answered "no": journey absent and the like.
pub const EXIT_NEGATIVE: i32 = 3;
/// Bad usage or bad input of any kind.
pub const EXIT_INPUT: i32 = 2;

/// A reportable failure. Every reason is printed on its own stderr line as
/// `error: <category>: <reason>` so scripts can pattern-match the first
/// token pair and humans still get the full story.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub category: &'static str,
    pub reasons: Vec<String>,
}

impl CliError {
    pub fn new(category: &'static str, reason: impl Into<String>) -> CliError {
        CliError {
            category,
            reasons: vec![reason.into()],
        }
    }

    pub fn usage(reason: impl Into<String>) -> CliError {
        CliError::new("usage", reason)
    }

    pub fn parse(reason: impl Into<String>) -> CliError {
        CliError::new("parse", reason)
    }

    pub fn io(path: &Path, err: &std::io::Error) -> CliError {
        CliError::new("io", format!("{}: {err}", path.display()))
    }

    pub fn config(reasons: Vec<String>) -> CliError {
        CliError {
            category: "config",
            reasons,
        }
    }

    pub fn from_sim(err: SimError) -> CliError {
        match err {
            SimError::InvalidConfig(violations) => CliError::config(violations),
            other => CliError::new("config", other.to_string()),
        }
    }

    pub fn report(&self) {
        for reason in &self.reasons {
            eprintln!("error: {}: {}", self.category, reason);
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}",
            self.category,
            self.reasons.first().map(String::as_str).unwrap_or("")
        )
    }
}

impl std::error::Error for CliError {}
