//! Command-line front end for `dunkl-core`: expression evaluation, trace and
//! certificate output, index forms, and the verification suites.

pub mod cli;
pub mod json;
pub mod report;
pub mod suites;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub format: Format,
    pub degree: u32,
    pub order: u32,
    pub seed: u64,
    /// Worker threads for suites; `None` lets rayon decide.
    pub jobs: Option<usize>,
    pub h2_zero: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { format: Format::Text, degree: 8, order: 6, seed: 0, jobs: None, h2_zero: false }
    }
}
