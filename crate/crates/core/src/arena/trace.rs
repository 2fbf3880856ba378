use serde::{Deserialize, Serialize};

use super::lifecycle::apply_agent_lifecycle;
use super::metabolism::agent_metabolism;
use super::{diffuse, init_arena, Agent, Arena, ArenaError, SimConfig, SpeciesInfo};
use crate::grid::Grid;
use crate::metabolic::SolveStatus;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub step: u32,
    pub time: f64,
    pub births: usize,
    pub deaths: usize,
    pub moves: usize,
    pub infeasible: usize,
    pub total_biomass: f64,
}

/// Arena state at one point in time. `step` 0 is the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: u32,
    pub time: f64,
    pub agents: Vec<Agent>,
    /// Aligned with [`SimulationTrace::substances`].
    pub fields: Vec<Grid<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub width: usize,
    pub height: usize,
    pub dt: f64,
    pub substances: Vec<String>,
    pub species: Vec<SpeciesInfo>,
    pub snapshots: Vec<Snapshot>,
    /// Configuration the trace was produced from, when available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SimConfig>,
}

impl SimulationTrace {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

fn snapshot(arena: &Arena) -> Snapshot {
    Snapshot {
        step: arena.step_index,
        time: arena.time,
        agents: arena.agents.clone(),
        fields: arena
            .fields
            .iter()
            .map(|f| f.concentrations.clone())
            .collect(),
    }
}

/// Advances the arena by `dt` hours: metabolism, lifecycle, diffusion.
pub fn step(arena: &mut Arena, dt: f64) -> Result<StepReport, ArenaError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ArenaError::InvalidTimeStep(dt));
    }
    let mut report = StepReport::default();

    // metabolism, row-major, deltas applied immediately
    arena.sort_agents();
    let mut local = vec![0.0; arena.fields.len()];
    let species = arena.species.clone();
    for idx in 0..arena.agents.len() {
        let (x, y) = (arena.agents[idx].x, arena.agents[idx].y);
        for (slot, field) in local.iter_mut().zip(&arena.fields) {
            *slot = field.concentrations.at(x, y);
        }
        let spec = &species[arena.agents[idx].genotype as usize - 1];
        let out = agent_metabolism(&arena.agents[idx], spec, &local, dt, &arena.units)?;
        if out.status == SolveStatus::Infeasible {
            report.infeasible += 1;
        }
        for (field, d) in arena.fields.iter_mut().zip(&out.deltas) {
            let c = field.concentrations.at(x, y);
            field
                .concentrations
                .set(x as usize - 1, y as usize - 1, (c + d).max(0.0));
        }
        let agent = &mut arena.agents[idx];
        agent.biomass = out.new_biomass;
        agent.fluxes = out.fluxes;
        if out.growth_rate > 1e-12 {
            agent.starvation = 0;
        } else {
            agent.starvation += 1;
        }
        arena.assign_phenotype(idx);
    }

    let mut rng = arena.rng.clone();
    let lc = apply_agent_lifecycle(arena, &mut rng);
    arena.rng = rng;
    report.births = lc.births;
    report.deaths = lc.deaths;
    report.moves = lc.moves;

    let sub_dt = dt / arena.diffusion_substeps as f64;
    for field in &mut arena.fields {
        for _ in 0..arena.diffusion_substeps {
            *field = diffuse(field, sub_dt)?;
        }
    }

    arena.step_index += 1;
    arena.time = arena.step_index as f64 * dt;
    report.step = arena.step_index;
    report.time = arena.time;
    report.total_biomass = arena.agents.iter().map(|a| a.biomass).sum();
    Ok(report)
}

/// Runs `n_steps` steps of `config.dt` and records a snapshot after
/// initialization and after every step.
pub fn run_simulation(config: &SimConfig, n_steps: usize) -> Result<SimulationTrace, ArenaError> {
    if n_steps == 0 {
        return Err(ArenaError::NoSteps);
    }
    let mut arena = init_arena(config, config.seed)?;
    // reject unstable diffusion before spending time on metabolism
    let sub_dt = config.dt / config.diffusion_substeps as f64;
    for f in &arena.fields {
        if f.diffusivity * sub_dt > 0.25 {
            return Err(ArenaError::UnstableParameters {
                diffusivity: f.diffusivity,
                dt: sub_dt,
            });
        }
    }
    let mut snapshots = Vec::with_capacity(n_steps + 1);
    snapshots.push(snapshot(&arena));
    for _ in 0..n_steps {
        step(&mut arena, config.dt)?;
        snapshots.push(snapshot(&arena));
    }
    Ok(SimulationTrace {
        width: arena.width,
        height: arena.height,
        dt: config.dt,
        substances: arena.substance_names(),
        species: arena.species.iter().map(|s| s.info()).collect(),
        snapshots,
        config: Some(config.clone()),
    })
}
