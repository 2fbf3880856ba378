use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::simplex::{self, LinearProgram, LpError, LpOutcome};
use super::{MetabolicError, MetabolicModel};
use crate::num::Scalar;

/// Per-reaction `(lower, upper)` bounds replacing the model's own.
pub type BoundOverrides<T> = BTreeMap<String, (T, T)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of one FBA solve. For non-optimal statuses `objective` is zero and
/// `fluxes` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxSolution<T> {
    pub status: SolveStatus,
    pub objective: T,
    /// Aligned with the model's reaction order, mmol/(gDW·h).
    pub fluxes: Vec<T>,
}

impl<T: Scalar> FluxSolution<T> {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Turns Infeasible/Unbounded into errors.
    pub fn require_optimal(self) -> Result<Self, MetabolicError> {
        match self.status {
            SolveStatus::Optimal => Ok(self),
            SolveStatus::Infeasible => Err(MetabolicError::Infeasible),
            SolveStatus::Unbounded => Err(MetabolicError::Unbounded),
        }
    }

    fn empty(status: SolveStatus) -> Self {
        Self {
            status,
            objective: T::zero(),
            fluxes: Vec::new(),
        }
    }
}

/// Maximizes the model objective subject to `S·v = 0` and flux bounds.
pub fn solve_fba<T: Scalar>(
    model: &MetabolicModel<T>,
    overrides: &BoundOverrides<T>,
) -> Result<FluxSolution<T>, MetabolicError> {
    let reactions = model.reactions();
    let mut lower: Vec<T> = reactions.iter().map(|r| r.lower_bound).collect();
    let mut upper: Vec<T> = reactions.iter().map(|r| r.upper_bound).collect();
    for (id, &(lb, ub)) in overrides {
        let j = model
            .reaction_position(id)
            .ok_or_else(|| MetabolicError::UnknownReaction(id.clone()))?;
        if lb.is_nan() || ub.is_nan() || lb > ub {
            return Err(MetabolicError::BadBounds(id.clone()));
        }
        lower[j] = lb;
        upper[j] = ub;
    }

    let lp = LinearProgram {
        a: model.stoichiometric_matrix(),
        b: vec![T::zero(); model.metabolites().len()],
        c: reactions.iter().map(|r| r.objective_coefficient).collect(),
        lower,
        upper,
    };
    match simplex::solve(&lp) {
        Ok(LpOutcome::Optimal { x, objective }) => Ok(FluxSolution {
            status: SolveStatus::Optimal,
            objective,
            fluxes: x,
        }),
        Ok(LpOutcome::Infeasible) => Ok(FluxSolution::empty(SolveStatus::Infeasible)),
        Ok(LpOutcome::Unbounded) => Ok(FluxSolution::empty(SolveStatus::Unbounded)),
        Err(LpError::NumericalFailure { limit }) => Err(MetabolicError::NumericalFailure { limit }),
        // bounds were checked above and dimensions come from the model
        Err(e) => unreachable!("malformed LP from a validated model: {e}"),
    }
}
