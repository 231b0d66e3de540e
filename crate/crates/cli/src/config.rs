//! Campaign files.
//!
//! A campaign is a TOML document:
//!
//! ```toml
//! schema_version = 1
//! name = "demo"
//! output_dir = "results/demo"
//!
//! [emit]
//! trace = true
//! summary = true
//! plotdata = true
//!
//! [[presets]]
//! name = "lqr-50"
//! seed = 0
//!
//! [[runs]]
//! name = "small"
//! # any simulation config
//! ```
//!
//! Each preset entry expands into its fixed and self-tuning runs, named
//! `<preset>-s<seed>-fixed` and `<preset>-s<seed>-self-tuning`. Explicit
//! runs follow the presets in file order.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use selftune::simulation::{preset, SimulationConfig, PRESET_NAMES};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub name: String,
    /// Relative paths are resolved against the working directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub emit: Emit,
    #[serde(default)]
    pub presets: Vec<PresetRef>,
    #[serde(default)]
    pub runs: Vec<SimulationConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Emit {
    pub trace: bool,
    pub summary: bool,
    pub plotdata: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Self {
            trace: true,
            summary: true,
            plotdata: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetRef {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the preset's simulation length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

/// One run of an expanded campaign and the comparison group it belongs to.
#[derive(Debug, Clone)]
pub struct PlannedRun {
    pub group: String,
    pub config: SimulationConfig,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text)?;
        if config.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                config.schema_version
            );
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid campaign file {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Presets first, then explicit runs. `seed` replaces every seed.
    pub fn expand(&self, seed: Option<u64>) -> Result<Vec<PlannedRun>> {
        let mut out = Vec::new();
        for p in &self.presets {
            let s = seed.unwrap_or(p.seed);
            let Some(pair) = preset(&p.name, s) else {
                bail!("unknown preset {:?}; available: {}", p.name, PRESET_NAMES.join(", "));
            };
            let group = format!("{}-s{s}", p.name);
            for mut config in pair {
                config.name = config.name.replacen(&p.name, &group, 1);
                if let Some(steps) = p.steps {
                    config.steps = steps;
                }
                out.push(PlannedRun {
                    group: group.clone(),
                    config,
                });
            }
        }
        for run in &self.runs {
            let mut config = run.clone();
            if let Some(s) = seed {
                config.seed = s;
            }
            out.push(PlannedRun {
                group: self.name.clone(),
                config,
            });
        }
        Ok(out)
    }
}

/// Every problem with the expanded campaign, one line each.
pub fn diagnostics(runs: &[PlannedRun]) -> Vec<String> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for run in runs {
        let name = &run.config.name;
        if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
            out.push(format!("run {name:?}: names must be non-empty plain file names"));
        }
        if !seen.insert(name.as_str()) {
            out.push(format!("run {name:?}: duplicate name"));
        }
        if let Err(e) = run.config.validate() {
            out.push(format!("run {name:?}: {e}"));
        }
    }
    out
}
