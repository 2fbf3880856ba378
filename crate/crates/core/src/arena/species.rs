use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ArenaError;
use crate::metabolic::{is_valid_organism_name, MetabolicModel, UptakeKinetics};

/// Link between one exchange reaction of a species model and the arena.
#[derive(Debug, Clone, PartialEq)]
pub struct ExchangeLink {
    pub reaction_id: String,
    /// Index into the arena's substance fields, when the exchanged
    /// metabolite's name matches a tracked substance.
    pub field: Option<usize>,
    pub kinetics: Option<UptakeKinetics<f64>>,
    pub model_lower: f64,
    pub model_upper: f64,
}

#[derive(Debug, Clone)]
pub struct SpeciesSpec {
    pub genotype: u32,
    pub name: String,
    pub model: MetabolicModel<f64>,
    pub kinetics: BTreeMap<String, UptakeKinetics<f64>>,
    pub color: String,
    /// fg; the lifecycle thresholds scale with it.
    pub initial_biomass: f64,
    exchanges: Vec<ExchangeLink>,
}

/// Public description of a species as carried in traces and metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpeciesInfo {
    pub genotype: u32,
    pub name: String,
    pub color: String,
}

pub fn is_hex_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

impl SpeciesSpec {
    pub fn new(
        genotype: u32,
        name: impl Into<String>,
        model: MetabolicModel<f64>,
        kinetics: BTreeMap<String, UptakeKinetics<f64>>,
        color: impl Into<String>,
        initial_biomass: f64,
        substances: &[String],
    ) -> Result<Self, ArenaError> {
        let name = name.into();
        let color = color.into();
        if genotype == 0 {
            return Err(ArenaError::Config("genotype ids start at 1".into()));
        }
        if !is_valid_organism_name(&name) {
            return Err(ArenaError::Config(format!(
                "species name `{name}` is not genus_species_strain"
            )));
        }
        if !is_hex_color(&color) {
            return Err(ArenaError::Config(format!(
                "species `{name}` has invalid color `{color}`"
            )));
        }
        if !(initial_biomass > 0.0 && initial_biomass.is_finite()) {
            return Err(ArenaError::Config(format!(
                "species `{name}` needs positive initial biomass"
            )));
        }
        for id in kinetics.keys() {
            if !model.is_exchange(id) {
                return Err(ArenaError::Config(format!(
                    "kinetics for `{id}` in species `{name}` do not name an exchange reaction"
                )));
            }
        }
        let exchanges = model
            .exchange_reactions()
            .into_iter()
            .map(|(j, i)| {
                let r = &model.reactions()[j];
                let met = &model.metabolites()[i];
                ExchangeLink {
                    reaction_id: r.id.clone(),
                    field: substances.iter().position(|s| *s == met.name),
                    kinetics: kinetics.get(&r.id).copied(),
                    model_lower: r.lower_bound,
                    model_upper: r.upper_bound,
                }
            })
            .collect();
        Ok(Self {
            genotype,
            name,
            model,
            kinetics,
            color,
            initial_biomass,
            exchanges,
        })
    }

    pub fn exchanges(&self) -> &[ExchangeLink] {
        &self.exchanges
    }

    pub fn info(&self) -> SpeciesInfo {
        SpeciesInfo {
            genotype: self.genotype,
            name: self.name.clone(),
            color: self.color.clone(),
        }
    }
}
