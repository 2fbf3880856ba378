use serde::{Deserialize, Serialize};

use super::ArenaError;
use crate::grid::Grid;
use crate::num::Scalar;

/// Concentration matrix (mM) of one substance over the arena.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstanceField<T> {
    pub name: String,
    pub concentrations: Grid<T>,
    /// Diffusion constant in cell²/h.
    pub diffusivity: T,
}

impl<T: Scalar> SubstanceField<T> {
    pub fn uniform(
        name: impl Into<String>,
        width: usize,
        height: usize,
        value: T,
        diffusivity: T,
    ) -> Self {
        Self {
            name: name.into(),
            concentrations: Grid::filled(width, height, value),
            diffusivity,
        }
    }

    pub fn total(&self) -> T {
        self.concentrations.sum()
    }
}

/// One explicit 5-point diffusion step with reflecting (no-flux) edges.
///
/// Fluxes are exchanged pairwise across each cell edge so the total is
/// conserved up to round-off. Each new value is then kept inside the
/// range of its stencil neighbourhood, which holds exactly for the
/// scheme whenever `D·dt ≤ 1/4`.
pub fn diffuse<T: Scalar>(
    field: &SubstanceField<T>,
    dt: T,
) -> Result<SubstanceField<T>, ArenaError> {
    let rate = field.diffusivity * dt;
    let quarter = T::lit(0.25);
    if !(rate >= T::zero() && rate <= quarter) || !dt.is_finite() {
        return Err(ArenaError::UnstableParameters {
            diffusivity: field.diffusivity.to_f64().unwrap_or(f64::NAN),
            dt: dt.to_f64().unwrap_or(f64::NAN),
        });
    }
    let old = &field.concentrations;
    let (w, h) = (old.width(), old.height());
    let mut next = old.clone();
    if rate == T::zero() {
        return Ok(SubstanceField {
            concentrations: next,
            ..field.clone()
        });
    }

    let src = old.as_slice();
    let dst = next.as_mut_slice();
    for row in 0..h {
        for col in 0..w {
            let i = row * w + col;
            if col + 1 < w {
                let f = rate * (src[i] - src[i + 1]);
                dst[i] = dst[i] - f;
                dst[i + 1] = dst[i + 1] + f;
            }
            if row + 1 < h {
                let f = rate * (src[i] - src[i + w]);
                dst[i] = dst[i] - f;
                dst[i + w] = dst[i + w] + f;
            }
        }
    }

    for row in 0..h {
        for col in 0..w {
            let i = row * w + col;
            let mut lo = src[i];
            let mut hi = src[i];
            let mut visit = |j: usize| {
                lo = lo.min(src[j]);
                hi = hi.max(src[j]);
            };
            if col > 0 {
                visit(i - 1);
            }
            if col + 1 < w {
                visit(i + 1);
            }
            if row > 0 {
                visit(i - w);
            }
            if row + 1 < h {
                visit(i + w);
            }
            dst[i] = dst[i].max(lo).min(hi);
        }
    }

    Ok(SubstanceField {
        name: field.name.clone(),
        concentrations: next,
        diffusivity: field.diffusivity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spike(d: f64) -> SubstanceField<f64> {
        let mut f = SubstanceField::uniform("S", 5, 5, 0.0, d);
        f.concentrations.set(2, 2, 1.0);
        f
    }

    #[test]
    fn uniform_field_is_unchanged() {
        let f = SubstanceField::uniform("S", 6, 4, 3.25, 0.2);
        assert_eq!(diffuse(&f, 1.0).unwrap(), f);
    }

    #[test]
    fn spike_mass_is_conserved() {
        for d in [0.01, 0.1, 0.25] {
            let out = diffuse(&spike(d), 1.0).unwrap();
            assert!((out.total() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn spike_center_follows_stencil() {
        let out = diffuse(&spike(0.2), 0.5).unwrap();
        let r = 0.2 * 0.5;
        assert!((out.concentrations.get(2, 2) - (1.0 - 4.0 * r)).abs() <= 1e-12);
        assert!((out.concentrations.get(1, 2) - r).abs() <= 1e-12);
        assert_eq!(out.concentrations.get(1, 1), 0.0);
    }

    #[test]
    fn corner_reflects() {
        let mut f = SubstanceField::uniform("S", 3, 3, 0.0f64, 0.25);
        f.concentrations.set(0, 0, 1.0);
        let out = diffuse(&f, 1.0).unwrap();
        // two open edges at a corner
        assert!((out.concentrations.get(0, 0) - 0.5).abs() <= 1e-15);
        assert!((out.total() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn unstable_step_is_rejected() {
        let f = spike(0.3);
        assert!(matches!(
            diffuse(&f, 1.0),
            Err(ArenaError::UnstableParameters { .. })
        ));
        assert!(diffuse(&f, 0.5).is_ok());
    }

    #[test]
    fn single_precision_conserves() {
        let mut f = SubstanceField::uniform("S", 4, 4, 0.0f32, 0.25);
        f.concentrations.set(1, 1, 2.0);
        let out = diffuse(&f, 1.0).unwrap();
        assert!((out.total() - 2.0f32).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn maximum_principle_and_conservation(
            values in proptest::collection::vec(0.0f64..10.0, 1..64),
            w in 1usize..8,
            rate in 0.0f64..=0.25,
        ) {
            let h = values.len().div_ceil(w);
            let mut data = values.clone();
            data.resize(w * h, 0.5);
            let f = SubstanceField { name: "S".into(), concentrations: Grid::from_rows(w, h, data).unwrap(), diffusivity: rate };
            let (lo, hi) = f.concentrations.extremes().unwrap();
            let out = diffuse(&f, 1.0).unwrap();
            let (lo2, hi2) = out.concentrations.extremes().unwrap();
            prop_assert!(lo2 >= lo && hi2 <= hi);
            prop_assert!((out.total() - f.total()).abs() <= 1e-12 * f.total().max(1.0));
        }
    }
}
