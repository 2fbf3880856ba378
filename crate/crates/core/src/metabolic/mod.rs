//! Metabolic networks, the stoichiometric matrix and flux balance analysis.

mod fba;
mod model;
mod monod;
pub mod simplex;

use thiserror::Error;

pub use fba::{solve_fba, BoundOverrides, FluxSolution, SolveStatus};
pub use model::{
    build_model, is_valid_organism_name, MetabolicModel, Metabolite, ModelFile, Reaction,
};
pub use monod::{monod_bound, UptakeKinetics};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetabolicError {
    #[error("model needs at least one metabolite and one reaction")]
    EmptyModel,
    #[error("identifiers must be nonempty")]
    EmptyId,
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("reaction `{reaction}` references unknown metabolite `{metabolite}`")]
    UnknownMetaboliteInStoichiometry {
        reaction: String,
        metabolite: String,
    },
    #[error("name `{0}` is not of the form genus_species_strain")]
    BadName(String),
    #[error("reaction `{0}` has an empty stoichiometry")]
    EmptyStoichiometry(String),
    #[error("reaction `{0}` has a non-finite coefficient")]
    NonFiniteCoefficient(String),
    #[error("reaction `{0}` has lower bound above upper bound")]
    BadBounds(String),
    #[error("no reaction carries a nonzero objective coefficient")]
    NoObjective,
    #[error("bound override for unknown reaction `{0}`")]
    UnknownReaction(String),
    #[error("negative concentration {0}")]
    NegativeConcentration(f64),
    #[error("uptake kinetics need vmax >= 0 and km > 0")]
    InvalidKinetics,
    #[error("solver stopped after {limit} iterations without converging")]
    NumericalFailure { limit: usize },
    #[error("flux balance problem is infeasible")]
    Infeasible,
    #[error("flux balance objective is unbounded")]
    Unbounded,
}
