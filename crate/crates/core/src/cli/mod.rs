//! Scenario configuration, presets, runs and sweeps behind the `simulate`
//! binary.
//!
//! Configs are TOML. A file names a preset (or `"custom"`) in `scenario`
//! and may override whole sections of it: a `[bath]` table in the file
//! replaces the preset's bath entirely.

mod config;
mod presets;
mod profile;
mod run;
mod sweep;

pub use config::{
    load_config, parse_config, IntegratorConfig, OutputConfig, ScenarioConfig,
};
pub use presets::{preset, PRESET_NAMES};
pub use profile::{static_profile, write_profile_csv, ProfileRow};
pub use run::{run_scenario, write_csv, ScenarioRun, Summary, CSV_HEADER, UNITS_LINE};
pub use sweep::{run_sweep, write_sweep_csv, SweepParameter, SweepPoint, SweepSpec};

use crate::Error;

/// Failure of a CLI action, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable, unparseable or invalid configuration (exit code 2).
    #[error("config error: {0}")]
    Config(String),
    /// Integration or linear-algebra failure (exit code 3).
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::SingularConfiguration { .. } => CliError::Config(e.to_string()),
            Error::DimensionMismatch { .. } | Error::Numerical(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

/// Formats a float in shortest round-trip form; exponent notation for very
/// small or large magnitudes.
pub(crate) fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}
