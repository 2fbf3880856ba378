use crate::metabolic::{monod_bound, solve_fba, BoundOverrides, SolveStatus};

use super::species::SpeciesSpec;
use super::{Agent, ArenaError, UnitParams};

/// Result of one quasi-steady-state FBA step for a single agent.
#[derive(Debug, Clone, PartialEq)]
pub struct MetabolismOutcome {
    pub status: SolveStatus,
    /// 1/h, after any uptake rescaling.
    pub growth_rate: f64,
    /// Exchange flux per arena substance, mmol/(gDW·h).
    pub fluxes: Vec<f64>,
    /// fg
    pub new_biomass: f64,
    /// Concentration change per arena substance in the agent's cell, mM.
    pub deltas: Vec<f64>,
    /// Factor (≤ 1) applied to the whole flux vector so that no local
    /// concentration is driven below zero.
    pub uptake_scale: f64,
}

/// Bounds uptake by Monod kinetics on the local concentrations, solves FBA
/// and converts exchange fluxes into concentration changes for the cell.
///
/// `local` is aligned with the arena's substance fields. Infeasible
/// problems count as a zero-growth step.
pub fn agent_metabolism(
    agent: &Agent,
    species: &SpeciesSpec,
    local: &[f64],
    dt: f64,
    units: &UnitParams,
) -> Result<MetabolismOutcome, ArenaError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ArenaError::InvalidTimeStep(dt));
    }
    let n_fields = local.len();

    let mut overrides = BoundOverrides::new();
    for link in species.exchanges() {
        let Some(f) = link.field else { continue };
        let c = local[f];
        let lower = match link.kinetics {
            Some(kin) => -monod_bound(&kin, c)?,
            None if c <= 0.0 => link.model_lower.max(0.0),
            None => link.model_lower,
        };
        let lower = lower.max(link.model_lower);
        overrides.insert(
            link.reaction_id.clone(),
            (lower, link.model_upper.max(lower)),
        );
    }

    let solution = solve_fba(&species.model, &overrides)?;
    if solution.status == SolveStatus::Unbounded {
        return Err(crate::metabolic::MetabolicError::Unbounded.into());
    }

    let mut fluxes = vec![0.0; n_fields];
    let mut growth = 0.0;
    if solution.is_optimal() {
        growth = solution.objective;
        for link in species.exchanges() {
            if let Some(f) = link.field {
                let j = species
                    .model
                    .reaction_position(&link.reaction_id)
                    .expect("linked reaction");
                fluxes[f] += solution.fluxes[j];
            }
        }
    }

    let gdw = agent.biomass * units.gdw_per_fg;
    let mut deltas: Vec<f64> = fluxes
        .iter()
        .map(|v| v * gdw * dt / units.cell_volume_l)
        .collect();

    let mut scale: f64 = 1.0;
    for (d, &c) in deltas.iter().zip(local) {
        if *d < 0.0 && c + d < 0.0 {
            scale = scale.min(c / -d);
        }
    }
    if scale < 1.0 {
        for v in fluxes.iter_mut().chain(deltas.iter_mut()) {
            *v *= scale;
        }
        growth *= scale;
    }

    Ok(MetabolismOutcome {
        status: solution.status,
        growth_rate: growth,
        fluxes,
        new_biomass: agent.biomass * (growth * dt).exp(),
        deltas,
        uptake_scale: scale,
    })
}
