use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation (odd `m`, gap index, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Exact data that must agree by construction did not.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("verification failed: {0}")]
    Verification(#[from] VerificationFailure),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// A single failed identity, naming what was checked and on which subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationFailure {
    pub identity: String,
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` failed on {}", self.identity, self.subject)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

impl std::error::Error for VerificationFailure {}

/// Outcome of a batch of exact identity checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<VerificationFailure>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, identity: &str, subject: &str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(VerificationFailure {
                identity: identity.to_string(),
                subject: subject.to_string(),
                detail: detail(),
            });
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Converts into an error carrying the first failure.
    pub fn into_result(self) -> Result<VerificationReport> {
        match self.failures.first() {
            None => Ok(self),
            Some(first) => Err(Error::Verification(first.clone())),
        }
    }
}
