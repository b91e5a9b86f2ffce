use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::action::ActionConfig;
use crate::error::{Error, Result};
use crate::omega::{ChainMode, FolnerFamily};
use crate::schedule::ScheduleConfig;
use crate::set::DEFAULT_CAP;

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level run configuration. Only the sections a subcommand reads need
/// to be present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub folner: FolnerFamily,
    /// Set listings used as `F_{n_1}, F_{n_2}, …` in place of the family.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub folner_files: Vec<String>,
    #[serde(default = "default_chain")]
    pub chain: ChainMode,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub census: CensusConfig,
    #[serde(default)]
    pub dominate: DominateConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

fn default_chain() -> ChainMode {
    ChainMode::Explicit { indices: vec![1, 2, 3] }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    /// Largest set materialized by products and enumerations.
    #[serde(default = "default_set_cap")]
    pub set: usize,
    /// Support cap for convolution powers; absent means exact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<usize>,
}

fn default_set_cap() -> usize {
    DEFAULT_CAP
}

impl Default for Caps {
    fn default() -> Self {
        Caps { set: DEFAULT_CAP, support: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusConfig {
    #[serde(default = "default_census_max")]
    pub max_n: u64,
}

fn default_census_max() -> u64 {
    6
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig { max_n: default_census_max() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominateConfig {
    /// Levels to report; all built levels when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<usize>>,
    /// Truncation depth of `ω`; the chain depth when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Replaces `N(n)` for every level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cesaro_length: Option<u64>,
    #[serde(default)]
    pub lower_estimate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub action: ActionConfig,
    /// Chain level whose report supplies `C_emp` for the dominance checks.
    #[serde(default = "default_level")]
    pub level: usize,
    /// Family and indices of the convergence table; the chain family when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_family: Option<FolnerFamily>,
    pub convergence_indices: Vec<u64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: String,
    #[serde(default = "default_eps")]
    pub weak11_eps: Vec<String>,
    /// Random positive functions added to the configured observables.
    #[serde(default)]
    pub battery: usize,
    /// Random PSD matrices for the dominance check.
    #[serde(default)]
    pub matrix_battery: usize,
    /// Random symmetric matrices for the Kadison check.
    #[serde(default)]
    pub kadison_battery: usize,
}

fn default_level() -> usize {
    2
}

fn default_tolerance() -> String {
    "1/1000".into()
}

fn default_eps() -> Vec<String> {
    vec!["1/64".into(), "1/8".into(), "1/2".into(), "2".into()]
}

/// Dominance runs across schedule variants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub schedules: Vec<ScheduleConfig>,
    /// Levels of the limit-diagnostics table.
    #[serde(default = "default_limit_levels")]
    pub limit_levels: Vec<usize>,
}

fn default_limit_levels() -> Vec<usize> {
    (1..=12).collect()
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::invalid(format!("unsupported config schema {} (expected {SCHEMA_VERSION})", self.schema)));
        }
        if self.caps.set == 0 || self.caps.support == Some(0) {
            return Err(Error::invalid("caps must be positive"));
        }
        if self.schedule.depth == 0 {
            return Err(Error::invalid("depth must be at least 1"));
        }
        crate::schedule::Schedule::from_config(&self.schedule)?;
        if let Some(sim) = &self.simulate {
            if sim.convergence_indices.is_empty() {
                return Err(Error::invalid("simulate needs at least one convergence index"));
            }
        }
        Ok(())
    }
}
