use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::MetabolicError;
use crate::grid::Grid;
use crate::num::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metabolite {
    pub id: String,
    pub name: String,
    /// Exchangeable with the environment.
    #[serde(default)]
    pub external: bool,
}

impl Metabolite {
    pub fn new(id: impl Into<String>, name: impl Into<String>, external: bool) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            external,
        }
    }
}

/// A reaction with signed stoichiometric coefficients and flux bounds in
/// mmol/(gDW·h). Reversible reactions carry a negative lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + Default"))]
pub struct Reaction<T> {
    pub id: String,
    pub stoichiometry: BTreeMap<String, T>,
    pub lower_bound: T,
    pub upper_bound: T,
    #[serde(default)]
    pub objective_coefficient: T,
}

impl<T: Scalar> Reaction<T> {
    pub fn new<'a>(
        id: impl Into<String>,
        stoichiometry: impl IntoIterator<Item = (&'a str, T)>,
        lower_bound: T,
        upper_bound: T,
    ) -> Self {
        Self {
            id: id.into(),
            stoichiometry: stoichiometry
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            lower_bound,
            upper_bound,
            objective_coefficient: T::zero(),
        }
    }

    pub fn with_objective(mut self, coefficient: T) -> Self {
        self.objective_coefficient = coefficient;
        self
    }
}

/// Serialized form of a model definition file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + Default"))]
pub struct ModelFile<T> {
    pub name: String,
    pub metabolites: Vec<Metabolite>,
    pub reactions: Vec<Reaction<T>>,
}

/// A validated metabolic network. Metabolite and reaction order is the
/// order given at construction and defines the rows and columns of the
/// stoichiometric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "ModelFile<T>",
    into = "ModelFile<T>",
    bound(
        serialize = "T: Scalar + Serialize",
        deserialize = "T: Scalar + Deserialize<'de>"
    )
)]
pub struct MetabolicModel<T> {
    name: String,
    metabolites: Vec<Metabolite>,
    reactions: Vec<Reaction<T>>,
    metabolite_index: HashMap<String, usize>,
    reaction_index: HashMap<String, usize>,
}

impl<T: Scalar> TryFrom<ModelFile<T>> for MetabolicModel<T> {
    type Error = MetabolicError;

    fn try_from(file: ModelFile<T>) -> Result<Self, Self::Error> {
        build_model(file.metabolites, file.reactions, file.name)
    }
}

impl<T: Scalar> From<MetabolicModel<T>> for ModelFile<T> {
    fn from(model: MetabolicModel<T>) -> Self {
        ModelFile {
            name: model.name,
            metabolites: model.metabolites,
            reactions: model.reactions,
        }
    }
}

/// Checks the `genus_species_strain` naming rule: exactly three nonempty
/// underscore-separated fragments.
pub fn is_valid_organism_name(name: &str) -> bool {
    let fragments: Vec<&str> = name.split('_').collect();
    fragments.len() == 3
        && fragments
            .iter()
            .all(|f| !f.is_empty() && !f.contains(char::is_whitespace))
}

pub fn build_model<T: Scalar>(
    metabolites: Vec<Metabolite>,
    reactions: Vec<Reaction<T>>,
    name: impl Into<String>,
) -> Result<MetabolicModel<T>, MetabolicError> {
    let name = name.into();
    if metabolites.is_empty() || reactions.is_empty() {
        return Err(MetabolicError::EmptyModel);
    }
    if !is_valid_organism_name(&name) {
        return Err(MetabolicError::BadName(name));
    }

    let mut metabolite_index = HashMap::with_capacity(metabolites.len());
    for (i, m) in metabolites.iter().enumerate() {
        if m.id.is_empty() {
            return Err(MetabolicError::EmptyId);
        }
        if metabolite_index.insert(m.id.clone(), i).is_some() {
            return Err(MetabolicError::DuplicateId(m.id.clone()));
        }
    }

    let mut reaction_index = HashMap::with_capacity(reactions.len());
    for (j, r) in reactions.iter().enumerate() {
        if r.id.is_empty() {
            return Err(MetabolicError::EmptyId);
        }
        if reaction_index.insert(r.id.clone(), j).is_some() {
            return Err(MetabolicError::DuplicateId(r.id.clone()));
        }
        if r.stoichiometry.is_empty() {
            return Err(MetabolicError::EmptyStoichiometry(r.id.clone()));
        }
        for (met, coef) in &r.stoichiometry {
            if !metabolite_index.contains_key(met) {
                return Err(MetabolicError::UnknownMetaboliteInStoichiometry {
                    reaction: r.id.clone(),
                    metabolite: met.clone(),
                });
            }
            if !coef.is_finite() {
                return Err(MetabolicError::NonFiniteCoefficient(r.id.clone()));
            }
        }
        if r.lower_bound.is_nan() || r.upper_bound.is_nan() || r.lower_bound > r.upper_bound {
            return Err(MetabolicError::BadBounds(r.id.clone()));
        }
        if !r.objective_coefficient.is_finite() {
            return Err(MetabolicError::NonFiniteCoefficient(r.id.clone()));
        }
    }
    if reactions
        .iter()
        .all(|r| r.objective_coefficient == T::zero())
    {
        return Err(MetabolicError::NoObjective);
    }

    Ok(MetabolicModel {
        name,
        metabolites,
        reactions,
        metabolite_index,
        reaction_index,
    })
}

impl<T: Scalar> MetabolicModel<T> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn metabolites(&self) -> &[Metabolite] {
        &self.metabolites
    }

    pub fn reactions(&self) -> &[Reaction<T>] {
        &self.reactions
    }

    pub fn metabolite_position(&self, id: &str) -> Option<usize> {
        self.metabolite_index.get(id).copied()
    }

    pub fn reaction_position(&self, id: &str) -> Option<usize> {
        self.reaction_index.get(id).copied()
    }

    /// Dense `metabolites × reactions` matrix; absent entries are zero.
    pub fn stoichiometric_matrix(&self) -> Grid<T> {
        let mut s = Grid::filled(self.reactions.len(), self.metabolites.len(), T::zero());
        for (j, r) in self.reactions.iter().enumerate() {
            for (met, &coef) in &r.stoichiometry {
                s.set(j, self.metabolite_index[met], coef);
            }
        }
        s
    }

    /// Exchange reactions: a single `-1` entry on an external metabolite, so
    /// positive flux secretes into the environment and negative flux takes
    /// up from it. Returned as `(reaction index, metabolite index)`.
    pub fn exchange_reactions(&self) -> Vec<(usize, usize)> {
        self.reactions
            .iter()
            .enumerate()
            .filter_map(|(j, r)| {
                let mut entries = r.stoichiometry.iter();
                let (met, &coef) = entries.next()?;
                if entries.next().is_some() || coef != -T::one() {
                    return None;
                }
                let i = self.metabolite_index[met];
                self.metabolites[i].external.then_some((j, i))
            })
            .collect()
    }

    pub fn is_exchange(&self, reaction_id: &str) -> bool {
        self.reaction_position(reaction_id)
            .is_some_and(|j| self.exchange_reactions().iter().any(|&(k, _)| k == j))
    }
}

/// Builds a model without the three-fragment name rule; used by tests that
/// only care about network structure.
#[cfg(test)]
pub(crate) fn test_model<T: Scalar>(
    metabolites: &[&str],
    reactions: Vec<Reaction<T>>,
) -> MetabolicModel<T> {
    let mets = metabolites
        .iter()
        .map(|id| Metabolite::new(*id, *id, false))
        .collect();
    build_model(mets, reactions, "Test_model_A").unwrap()
}
