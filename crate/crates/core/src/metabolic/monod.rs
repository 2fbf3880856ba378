use serde::{Deserialize, Serialize};

use super::MetabolicError;
use crate::num::Scalar;

/// Saturating uptake parameters: `vmax` in mmol/(gDW·h), `km` in mM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawKinetics<T>",
    bound(deserialize = "T: Scalar + Deserialize<'de>")
)]
pub struct UptakeKinetics<T> {
    pub vmax: T,
    pub km: T,
}

#[derive(Deserialize)]
struct RawKinetics<T> {
    vmax: T,
    km: T,
}

impl<T: Scalar> TryFrom<RawKinetics<T>> for UptakeKinetics<T> {
    type Error = MetabolicError;

    fn try_from(raw: RawKinetics<T>) -> Result<Self, Self::Error> {
        Self::new(raw.vmax, raw.km)
    }
}

impl<T: Scalar> UptakeKinetics<T> {
    pub fn new(vmax: T, km: T) -> Result<Self, MetabolicError> {
        if !(vmax >= T::zero() && vmax.is_finite() && km > T::zero() && km.is_finite()) {
            return Err(MetabolicError::InvalidKinetics);
        }
        Ok(Self { vmax, km })
    }
}

/// Monod uptake limit `vmax · c / (km + c)`.
///
/// Evaluated as `vmax · (c / (km + c))` so that `c = km` gives exactly
/// `vmax / 2` and the result never exceeds `vmax`.
pub fn monod_bound<T: Scalar>(
    kin: &UptakeKinetics<T>,
    concentration: T,
) -> Result<T, MetabolicError> {
    if concentration < T::zero() || concentration.is_nan() {
        return Err(MetabolicError::NegativeConcentration(
            concentration.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if concentration.is_infinite() {
        return Ok(kin.vmax);
    }
    Ok(kin.vmax * (concentration / (kin.km + concentration)))
}
