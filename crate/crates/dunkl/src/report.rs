use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::RunConfig;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CaseResult {
    pub id: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub case_count: usize,
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<CaseResult>,
    pub wall_time_ms: f64,
    pub config: RunConfig,
}

impl Report {
    pub fn new(suite: &str, cases: Vec<CaseResult>, elapsed: Duration, config: &RunConfig) -> Self {
        let passed = cases.iter().filter(|c| c.pass).count();
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            suite: suite.to_string(),
            case_count: cases.len(),
            passed,
            failed: cases.len() - passed,
            cases,
            wall_time_ms: elapsed.as_secs_f64() * 1e3,
            config: config.clone(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            if c.pass {
                let _ = writeln!(out, "ok   {}", c.id);
            } else {
                let _ = writeln!(out, "FAIL {}\n     expected: {}\n     actual:   {}", c.id, c.expected, c.actual);
            }
        }
        let _ = writeln!(
            out,
            "{}: {} of {} cases pass ({:.1} ms)",
            self.suite, self.passed, self.case_count, self.wall_time_ms
        );
        out
    }
}
