//! Command dispatch and serialization for the `eop-lab` binary.
//!
//! Every command produces an [`Outcome`]: the rendered artifact plus the list
//! of failed checks. Output is deterministic for a given [`RunConfig`].

mod emit;
mod svg;

use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result, VerificationFailure};
use crate::exec::Execution;
use crate::superintegrable::{build_case1, build_case2, SystemSpec};

pub use emit::{emit_table, render_json, Envelope};
pub use svg::render_diagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Eop,
    Potential,
    Ladder,
    PhaCheck,
    Spectrum,
    Unirreps,
    Tables,
    Diagram,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eop => "eop",
            Command::Potential => "potential",
            Command::Ladder => "ladder",
            Command::PhaCheck => "pha-check",
            Command::Spectrum => "spectrum",
            Command::Unirreps => "unirreps",
            Command::Tables => "tables",
            Command::Diagram => "diagram",
        }
    }

    fn supports(self, format: Format) -> bool {
        match format {
            Format::Text | Format::Json => true,
            Format::Csv => matches!(
                self,
                Command::Eop | Command::Ladder | Command::Spectrum | Command::Unirreps | Command::Tables
            ),
            Format::Svg => self == Command::Diagram,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

/// Which 2D system a command works on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum SystemChoice {
    OscillatorPair { m: usize },
    ExtendedPair { m1: usize, m2: usize },
}

impl SystemChoice {
    pub fn build(self) -> Result<SystemSpec> {
        match self {
            SystemChoice::OscillatorPair { m } => build_case1(m),
            SystemChoice::ExtendedPair { m1, m2 } => build_case2(m1, m2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// Parameter of the one-dimensional commands.
    pub m: usize,
    pub system: SystemChoice,
    pub nu_max: Option<i64>,
    pub n_max: i64,
    pub p_max: Option<usize>,
    pub format: Format,
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
    /// Also run the constraint solver and the integral-of-motion check where applicable.
    pub cross_check: bool,
    #[serde(skip)]
    pub execution: Execution,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            m: 2,
            system: SystemChoice::OscillatorPair { m: 2 },
            nu_max: None,
            n_max: 40,
            p_max: None,
            format: Format::Text,
            out_path: None,
            cross_check: false,
            execution: Execution::default(),
        }
    }

    /// `nu_max`, defaulting to `3(m + 1)`.
    pub fn nu_max(&self) -> i64 {
        self.nu_max.unwrap_or(3 * (self.m as i64 + 1))
    }

    pub fn validate(&self) -> Result<()> {
        if !self.command.supports(self.format) {
            return Err(Error::Domain(format!(
                "format {:?} is not available for `{}`",
                self.format,
                self.command.name()
            )));
        }
        Ok(())
    }
}

/// A rendered artifact and any checks that failed while producing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub artifact: Vec<u8>,
    pub failures: Vec<VerificationFailure>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Machine-readable failure summary.
    pub fn failure_report(&self, config: &RunConfig) -> String {
        #[derive(Serialize)]
        struct FailureReport<'a> {
            command: &'a str,
            status: &'static str,
            failures: &'a [VerificationFailure],
        }
        serde_json::to_string_pretty(&FailureReport {
            command: config.command.name(),
            status: "fail",
            failures: &self.failures,
        })
        .expect("serializable")
    }
}

/// Runs one command.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    emit::dispatch(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_matrix() {
        let mut c = RunConfig::new(Command::Diagram);
        c.format = Format::Csv;
        assert!(matches!(run(&c), Err(Error::Domain(_))));
        let mut c = RunConfig::new(Command::Spectrum);
        c.format = Format::Svg;
        assert!(run(&c).is_err());
    }

    #[test]
    fn default_depth() {
        let mut c = RunConfig::new(Command::PhaCheck);
        c.m = 4;
        assert_eq!(c.nu_max(), 15);
    }

    #[test]
    fn failure_report_is_json() {
        let c = RunConfig::new(Command::Spectrum);
        let o = Outcome {
            artifact: vec![],
            failures: vec![VerificationFailure {
                identity: "closed-form degeneracy = direct count".into(),
                subject: "N = 3".into(),
                detail: "3 vs 4".into(),
            }],
        };
        assert!(!o.passed());
        let v: serde_json::Value = serde_json::from_str(&o.failure_report(&c)).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["failures"][0]["subject"], "N = 3");
    }

    #[test]
    fn empty_table_is_header_only() {
        let csv = emit_table(&[], crate::superintegrable::Case::ExtendedPair, Format::Csv, |_| vec![]).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "lambda,rho,sigma,mu,p,N_unirreps,degeneracy\n"
        );
        let csv = emit_table(
            &[],
            crate::superintegrable::Case::OscillatorPair,
            Format::Csv,
            |_| vec![],
        )
        .unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "lambda,mu,p,N_unirreps,degeneracy\n");
    }
}
