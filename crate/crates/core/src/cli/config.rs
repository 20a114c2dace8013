use std::path::Path;

use serde::{Deserialize, Serialize};

use super::presets::preset;
use super::CliError;
use crate::environment::BathSpec;
use crate::molecule::{FieldProfile, MoleculeModel, Trajectory};
use crate::Real;

pub const DEFAULT_STEPS_PER_PERIOD: usize = 20_000;
pub const DEFAULT_CYCLE_TOL: Real = 1e-6;
pub const DEFAULT_MAX_CYCLES: usize = 500;
pub const DEFAULT_STRIDE: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub steps_per_period: usize,
    pub cycle_tol: Real,
    pub max_cycles: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            cycle_tol: DEFAULT_CYCLE_TOL,
            max_cycles: DEFAULT_MAX_CYCLES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// CSV destination; standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Emit one CSV row every `stride` integration steps.
    pub stride: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: None,
            stride: DEFAULT_STRIDE,
        }
    }
}

/// Fully resolved scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    pub trajectory: Trajectory,
    pub fields: FieldProfile,
    pub bath: BathSpec,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// File contents before preset resolution.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    trajectory: Option<Trajectory>,
    fields: Option<FieldProfile>,
    bath: Option<BathSpec>,
    integrator: Option<IntegratorConfig>,
    output: Option<OutputConfig>,
}

impl ScenarioConfig {
    pub fn model(&self) -> crate::Result<MoleculeModel> {
        MoleculeModel::new(self.trajectory.clone(), self.fields)
    }

    pub fn period(&self) -> Real {
        self.trajectory.period()
    }

    /// Checks every section; errors name the offending field.
    pub fn validate(&self) -> Result<(), CliError> {
        let section = |name: &str, r: crate::Result<()>| {
            r.map_err(|e| CliError::Config(format!("{name}: {e}")))
        };
        section("trajectory", self.trajectory.validate())?;
        section("fields", self.fields.validate())?;
        section("bath", self.bath.validate())?;
        let ig = &self.integrator;
        if ig.steps_per_period < 100 {
            return Err(CliError::Config(format!(
                "integrator.steps_per_period must be >= 100, got {}",
                ig.steps_per_period
            )));
        }
        if !(ig.cycle_tol > 0.0 && ig.cycle_tol < 1.0) {
            return Err(CliError::Config(format!(
                "integrator.cycle_tol must lie in (0, 1), got {}",
                ig.cycle_tol
            )));
        }
        if ig.max_cycles == 0 {
            return Err(CliError::Config("integrator.max_cycles must be >= 1".into()));
        }
        if self.output.stride == 0 {
            return Err(CliError::Config("output.stride must be >= 1".into()));
        }
        Ok(())
    }

    /// Resolved config as TOML; reloading it yields an identical config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }
}

/// Parses TOML text, resolving `scenario` (or `preset_override`) against
/// the preset table. A `"custom"` scenario must supply every section except
/// `integrator` and `output`.
pub fn parse_config(text: &str, preset_override: Option<&str>) -> Result<ScenarioConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let name = preset_override
        .map(str::to_owned)
        .or(raw.scenario)
        .unwrap_or_else(|| "custom".into());
    let cfg = if name == "custom" {
        let missing = |field: &str| CliError::Config(format!("custom scenario requires [{field}]"));
        ScenarioConfig {
            scenario: name,
            trajectory: raw.trajectory.ok_or_else(|| missing("trajectory"))?,
            fields: raw.fields.ok_or_else(|| missing("fields"))?,
            bath: raw.bath.ok_or_else(|| missing("bath"))?,
            integrator: raw.integrator.unwrap_or_default(),
            output: raw.output.unwrap_or_default(),
        }
    } else {
        let base = preset(&name).ok_or_else(|| {
            CliError::Config(format!("scenario: unknown preset {name:?}"))
        })?;
        ScenarioConfig {
            scenario: name,
            trajectory: raw.trajectory.unwrap_or(base.trajectory),
            fields: raw.fields.unwrap_or(base.fields),
            bath: raw.bath.unwrap_or(base.bath),
            integrator: raw.integrator.unwrap_or(base.integrator),
            output: raw.output.unwrap_or(base.output),
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Reads and resolves a config file.
pub fn load_config(path: &Path, preset_override: Option<&str>) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, preset_override)
        .map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
}
