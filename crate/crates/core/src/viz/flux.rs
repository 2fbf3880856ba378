use serde::{Deserialize, Serialize};

use super::color::Rgb;

/// Fluxes within this magnitude of zero draw no outline.
pub const FLUX_EPS: f64 = 1e-9;

/// Outline drawn around an organism for the selected exchange flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outline {
    #[default]
    None,
    Production,
    Uptake,
}

impl Outline {
    pub fn color(self) -> Option<Rgb> {
        match self {
            Outline::None => None,
            Outline::Production => Some(Rgb::new(0x00, 0xC8, 0x00)),
            Outline::Uptake => Some(Rgb::new(0xE0, 0x00, 0x00)),
        }
    }
}

pub fn classify_flux(flux: f64) -> Outline {
    classify_flux_with(flux, FLUX_EPS)
}

pub fn classify_flux_with(flux: f64, eps: f64) -> Outline {
    if flux > eps {
        Outline::Production
    } else if flux < -eps {
        Outline::Uptake
    } else {
        Outline::None
    }
}
