//! Verification reports.
//!
//! The JSON report separates a deterministic `payload` from `timings`, so
//! two runs with the same configuration have byte-identical payloads.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const REPORT_SCHEMA: &str = "sdp-report/1";
pub const DEFAULT_THRESHOLD: usize = 512;
pub const DEFAULT_MAX_CHAIN_DEGREE: usize = 65536;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    /// Passed on closed-form predicates only; no chain certificate.
    #[serde(rename = "pass (structural)")]
    PassStructural,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "skipped")]
    Skipped,
}

impl Status {
    pub fn is_pass(self) -> bool {
        matches!(self, Status::Pass | Status::PassStructural)
    }

    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::PassStructural => "pass (structural)",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub id: String,
    pub suite: String,
    pub statement: String,
    pub status: Status,
    /// Orders, classes and witnesses; orders are decimal strings.
    pub payload: Value,
    /// Why a claim failed or was skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Inputs that determine the payload.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suite: String,
    pub seed: u64,
    /// Degree above which chains start with the randomized phase.
    pub threshold: usize,
    pub class_bound: usize,
    /// Largest permutation degree for which SL(2n,4) chains are built;
    /// larger family members are checked structurally.
    pub max_chain_degree: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: "all".into(),
            seed: 0,
            threshold: DEFAULT_THRESHOLD,
            class_bound: sdp_core::series::DEFAULT_CLASS_BOUND,
            max_chain_degree: DEFAULT_MAX_CHAIN_DEGREE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub passed_structural: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Payload {
    pub schema: String,
    pub config: RunConfig,
    pub claims: Vec<ClaimReport>,
    pub summary: Summary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimTiming {
    pub id: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub started_unix: u64,
    pub total_seconds: f64,
    pub claims: Vec<ClaimTiming>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub payload: Payload,
    pub timings: Timings,
}

impl Payload {
    pub fn new(config: RunConfig, claims: Vec<ClaimReport>) -> Payload {
        let count = |s: Status| claims.iter().filter(|c| c.status == s).count();
        let summary = Summary {
            passed: count(Status::Pass),
            passed_structural: count(Status::PassStructural),
            failed: count(Status::Fail),
            skipped: count(Status::Skipped),
        };
        Payload {
            schema: REPORT_SCHEMA.to_string(),
            config,
            claims,
            summary,
        }
    }

    pub fn first_failure(&self) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.status == Status::Fail)
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> CliResult<Report> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Core(sdp_core::Error::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })
        })
    }

    /// Writes the report through a temporary file and a rename.
    pub fn write_atomic(&self, path: &Path) -> CliResult<()> {
        let io = |source| CliError::Io {
            path: path.display().to_string(),
            source,
        };
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        let mut tmp = match dir {
            Some(d) => tempfile::NamedTempFile::new_in(d),
            None => tempfile::NamedTempFile::new_in("."),
        }
        .map_err(io)?;
        tmp.write_all(self.to_json().as_bytes()).map_err(io)?;
        tmp.write_all(b"\n").map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        Ok(())
    }

    /// One line per claim.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (claim, timing) in self.payload.claims.iter().zip(&self.timings.claims) {
            out.push_str(&format!(
                "{:<18} {:<26} {:>8.2}s  {}\n",
                claim.status.to_string(),
                claim.id,
                timing.seconds,
                claim.statement
            ));
            if let Some(reason) = &claim.reason {
                out.push_str(&format!("{:<18} reason: {reason}\n", ""));
            }
        }
        let s = &self.payload.summary;
        out.push_str(&format!(
            "{} passed, {} passed (structural), {} failed, {} skipped in {:.2}s\n",
            s.passed, s.passed_structural, s.failed, s.skipped, self.timings.total_seconds
        ));
        out
    }
}
