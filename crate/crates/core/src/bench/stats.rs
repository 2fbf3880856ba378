use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::num::Scalar;

/// Frame durations (seconds) with their mean and the resulting rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameStats<T> {
    pub durations: Vec<T>,
    pub mean: T,
    pub fps: T,
}

/// `FPS = 1 / mean(durations)`.
pub fn fps_from_durations<T: Scalar>(durations: &[T]) -> Result<FrameStats<T>, BenchError> {
    if durations.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    if let Some(&bad) = durations
        .iter()
        .find(|d| !(**d > T::zero() && d.is_finite()))
    {
        return Err(BenchError::NonPositiveDuration(
            bad.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let n = T::from_usize(durations.len()).expect("count fits");
    let mean = durations.iter().copied().sum::<T>() / n;
    Ok(FrameStats {
        durations: durations.to_vec(),
        mean,
        fps: T::one() / mean,
    })
}
