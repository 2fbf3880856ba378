use std::sync::Arc;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::phenotype::{flux_signs, PhenotypeRegistry};
use super::species::SpeciesSpec;
use super::{ArenaError, LifecycleParams, SubstanceField, UnitParams};
use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    /// 1-based column.
    pub x: u32,
    /// 1-based row.
    pub y: u32,
    pub genotype: u32,
    /// fg
    pub biomass: f64,
    pub phenotype: u32,
    /// Exchange flux per arena substance (field order), mmol/(gDW·h);
    /// positive = secretion, negative = uptake.
    pub fluxes: Vec<f64>,
    /// Consecutive zero-growth steps.
    #[serde(default)]
    pub starvation: u32,
}

impl Agent {
    pub(crate) fn scan_key(&self) -> (u32, u32) {
        (self.y, self.x)
    }
}

/// Complete simulation state.
#[derive(Debug, Clone)]
pub struct Arena {
    pub width: usize,
    pub height: usize,
    pub agents: Vec<Agent>,
    pub fields: Vec<SubstanceField<f64>>,
    /// Hours since start.
    pub time: f64,
    pub step_index: u32,
    pub rng_seed: u64,
    pub species: Arc<Vec<SpeciesSpec>>,
    pub lifecycle: LifecycleParams,
    pub units: UnitParams,
    pub diffusion_substeps: usize,
    pub(crate) rng: ChaCha8Rng,
    pub(crate) phenotypes: PhenotypeRegistry,
}

impl Arena {
    pub fn substance_names(&self) -> Vec<String> {
        self.fields.iter().map(|f| f.name.clone()).collect()
    }

    pub fn species_of(&self, genotype: u32) -> &SpeciesSpec {
        &self.species[genotype as usize - 1]
    }

    /// Occupancy map indexed row-major by zero-based cell.
    pub fn occupancy(&self) -> Vec<bool> {
        let mut occ = vec![false; self.width * self.height];
        for a in &self.agents {
            occ[(a.y as usize - 1) * self.width + a.x as usize - 1] = true;
        }
        occ
    }

    pub(crate) fn sort_agents(&mut self) {
        self.agents.sort_by_key(Agent::scan_key);
    }

    pub(crate) fn assign_phenotype(&mut self, idx: usize) {
        let signs = flux_signs(&self.agents[idx].fluxes);
        self.agents[idx].phenotype = self.phenotypes.phenotype_of(&signs);
    }

    /// Lifecycle RNG, exposed for callers that drive phases by hand.
    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Builds the initial arena. Agents of all species are placed on distinct
/// cells drawn uniformly from the grid with the given seed.
pub fn init_arena(config: &SimConfig, seed: u64) -> Result<Arena, ArenaError> {
    let (width, height) = (config.width, config.height);
    if width < 1 || height < 1 {
        return Err(ArenaError::BadDimensions { width, height });
    }
    if !(config.dt > 0.0 && config.dt.is_finite()) {
        return Err(ArenaError::InvalidTimeStep(config.dt));
    }
    if config.diffusion_substeps == 0 {
        return Err(ArenaError::Config(
            "diffusion_substeps must be at least 1".into(),
        ));
    }
    let cells = width * height;
    let total: usize = config.species.iter().map(|s| s.count).sum();
    if total > cells {
        return Err(ArenaError::Overfull {
            agents: total,
            cells,
        });
    }
    let lc = &config.lifecycle;
    if !(0.0..=1.0).contains(&lc.p_move) || !(0.0..lc.division_factor).contains(&lc.death_factor) {
        return Err(ArenaError::Config(
            "lifecycle parameters out of range".into(),
        ));
    }

    let mut names: Vec<String> = Vec::with_capacity(config.substances.len());
    let mut fields = Vec::with_capacity(config.substances.len());
    for s in &config.substances {
        if s.name.is_empty() || s.name.contains(',') || names.contains(&s.name) {
            return Err(ArenaError::Config(format!(
                "invalid or duplicate substance name `{}`",
                s.name
            )));
        }
        if !(s.diffusivity >= 0.0 && s.diffusivity.is_finite()) {
            return Err(ArenaError::Config(format!(
                "substance `{}` has invalid diffusivity",
                s.name
            )));
        }
        let grid = Grid::from_fn(width, height, |c, r| {
            s.initial.value_at(c, r, width, height)
        });
        if grid
            .as_slice()
            .iter()
            .any(|v| !(*v >= 0.0 && v.is_finite()))
        {
            return Err(ArenaError::Config(format!(
                "substance `{}` has negative initial values",
                s.name
            )));
        }
        names.push(s.name.clone());
        fields.push(SubstanceField {
            name: s.name.clone(),
            concentrations: grid,
            diffusivity: s.diffusivity,
        });
    }

    let mut species = Vec::with_capacity(config.species.len());
    for (k, sc) in config.species.iter().enumerate() {
        let model = sc.model.resolve()?;
        species.push(SpeciesSpec::new(
            k as u32 + 1,
            sc.name.clone(),
            model,
            sc.kinetics.clone(),
            sc.color.clone(),
            sc.initial_biomass,
            &names,
        )?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = index::sample(&mut rng, cells, total).into_vec();
    let mut agents = Vec::with_capacity(total);
    let mut cursor = picks.into_iter();
    for (k, sc) in config.species.iter().enumerate() {
        for cell in cursor.by_ref().take(sc.count) {
            agents.push(Agent {
                x: (cell % width) as u32 + 1,
                y: (cell / width) as u32 + 1,
                genotype: k as u32 + 1,
                biomass: sc.initial_biomass,
                phenotype: 0,
                fluxes: vec![0.0; names.len()],
                starvation: 0,
            });
        }
    }

    let mut arena = Arena {
        width,
        height,
        agents,
        fields,
        time: 0.0,
        step_index: 0,
        rng_seed: seed,
        species: Arc::new(species),
        lifecycle: config.lifecycle,
        units: config.units,
        diffusion_substeps: config.diffusion_substeps,
        rng,
        phenotypes: PhenotypeRegistry::new(),
    };
    arena.sort_agents();
    for i in 0..arena.agents.len() {
        arena.assign_phenotype(i);
    }
    Ok(arena)
}
