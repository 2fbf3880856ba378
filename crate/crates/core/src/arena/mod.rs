//! Spatial dynamic FBA on a 2D grid.
//!
//! Each step runs, in order: per-agent metabolism against the agent's own
//! cell (deltas applied immediately, row-major scan), the lifecycle pass
//! (divide, die, move), and diffusion of every substance field.

mod config;
mod diffusion;
mod lifecycle;
mod metabolism;
mod phenotype;
mod species;
mod trace;
mod world;

use thiserror::Error;

use crate::metabolic::MetabolicError;

pub use config::{
    Axis, InitialConcentration, LifecycleParams, ModelSource, SimConfig, SpeciesConfig,
    SubstanceConfig, UnitParams,
};
pub use diffusion::{diffuse, SubstanceField};
pub use lifecycle::{apply_agent_lifecycle, LifecycleReport};
pub use metabolism::{agent_metabolism, MetabolismOutcome};
pub use phenotype::{flux_signs, PhenotypeRegistry, SIGN_EPS};
pub use species::{is_hex_color, ExchangeLink, SpeciesInfo, SpeciesSpec};
pub use trace::{run_simulation, step, SimulationTrace, Snapshot, StepReport};
pub use world::{init_arena, Agent, Arena};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArenaError {
    #[error("arena dimensions must be at least 1x1, got {width}x{height}")]
    BadDimensions { width: usize, height: usize },
    #[error("{agents} agents do not fit on {cells} cells")]
    Overfull { agents: usize, cells: usize },
    #[error("time step must be positive and finite, got {0}")]
    InvalidTimeStep(f64),
    #[error("diffusion with D={diffusivity} and dt={dt} violates D*dt <= 0.25")]
    UnstableParameters { diffusivity: f64, dt: f64 },
    #[error("simulation needs at least one step")]
    NoSteps,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Metabolic(#[from] MetabolicError),
}
