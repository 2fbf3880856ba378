use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ArenaError;
use crate::metabolic::{MetabolicModel, ModelFile, UptakeKinetics};

/// Simulation configuration file (JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub width: usize,
    pub height: usize,
    /// Step length in hours.
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_substeps")]
    pub diffusion_substeps: usize,
    #[serde(default)]
    pub units: UnitParams,
    #[serde(default)]
    pub lifecycle: LifecycleParams,
    pub substances: Vec<SubstanceConfig>,
    pub species: Vec<SpeciesConfig>,
}

fn default_dt() -> f64 {
    1.0
}

fn default_steps() -> usize {
    8
}

fn default_substeps() -> usize {
    10
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitParams {
    /// Volume of one grid cell in litres.
    pub cell_volume_l: f64,
    /// Grams dry weight per femtogram of agent biomass.
    pub gdw_per_fg: f64,
}

impl Default for UnitParams {
    fn default() -> Self {
        Self {
            cell_volume_l: 1e-9,
            gdw_per_fg: 1e-15,
        }
    }
}

/// Division and death thresholds are multiples of each species' initial
/// biomass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LifecycleParams {
    pub division_factor: f64,
    pub death_factor: f64,
    pub p_move: f64,
    /// Consecutive zero-growth steps after which an agent dies.
    pub starvation_limit: u32,
}

impl Default for LifecycleParams {
    fn default() -> Self {
        Self {
            division_factor: 2.0,
            death_factor: 0.25,
            p_move: 0.3,
            starvation_limit: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstanceConfig {
    pub name: String,
    /// cell²/h
    pub diffusivity: f64,
    pub initial: InitialConcentration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialConcentration {
    Uniform(f64),
    /// Linear ramp from `from` at the first column (or row) to `to` at the last.
    Gradient {
        from: f64,
        to: f64,
        axis: Axis,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl InitialConcentration {
    pub fn value_at(&self, col: usize, row: usize, width: usize, height: usize) -> f64 {
        match *self {
            InitialConcentration::Uniform(c) => c,
            InitialConcentration::Gradient { from, to, axis } => {
                let (pos, len) = match axis {
                    Axis::X => (col, width),
                    Axis::Y => (row, height),
                };
                if len <= 1 {
                    from
                } else {
                    from + (to - from) * pos as f64 / (len - 1) as f64
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    /// `genus_species_strain`
    pub name: String,
    pub model: ModelSource,
    /// Exchange reaction id → Monod parameters.
    #[serde(default)]
    pub kinetics: BTreeMap<String, UptakeKinetics<f64>>,
    /// `#RRGGBB`
    pub color: String,
    pub count: usize,
    /// fg
    pub initial_biomass: f64,
}

/// A model given inline or as a path to a model file. Relative paths are
/// resolved against the configuration file's directory by [`SimConfig::load`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSource {
    Path(PathBuf),
    Inline(ModelFile<f64>),
}

impl ModelSource {
    pub fn resolve(&self) -> Result<MetabolicModel<f64>, ArenaError> {
        match self {
            ModelSource::Inline(file) => Ok(MetabolicModel::try_from(file.clone())?),
            ModelSource::Path(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    ArenaError::Config(format!("cannot read model {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text).map_err(|e| {
                    ArenaError::Config(format!("invalid model {}: {e}", path.display()))
                })
            }
        }
    }
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self, ArenaError> {
        serde_json::from_str(text).map_err(|e| ArenaError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ArenaError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ArenaError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for species in &mut config.species {
            if let ModelSource::Path(p) = &mut species.model {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }
}
