use std::collections::HashMap;

/// Dead band used when reducing exchange fluxes to signs.
pub const SIGN_EPS: f64 = 1e-9;

pub fn flux_signs(fluxes: &[f64]) -> Vec<i8> {
    fluxes
        .iter()
        .map(|&v| {
            if v > SIGN_EPS {
                1
            } else if v < -SIGN_EPS {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Assigns metabolic phenotype ids to exchange sign patterns in first-seen
/// order, starting at 1.
#[derive(Debug, Clone, Default)]
pub struct PhenotypeRegistry {
    ids: HashMap<Vec<i8>, u32>,
}

impl PhenotypeRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn phenotype_of(&mut self, signs: &[i8]) -> u32 {
        let next = self.ids.len() as u32 + 1;
        *self.ids.entry(signs.to_vec()).or_insert(next)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}
