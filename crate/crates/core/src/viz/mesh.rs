use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::VizError;
use crate::grid::Grid;
use crate::num::Scalar;

/// Height of the tallest 3D vertex, in dish units.
pub const DEFAULT_HEIGHT_SCALE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum MeshMode {
    #[default]
    #[serde(rename = "2d")]
    Flat2D,
    #[serde(rename = "3d")]
    Height3D,
}

impl FromStr for MeshMode {
    type Err = VizError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "2d" | "flat2d" | "flat" => Ok(MeshMode::Flat2D),
            "3d" | "height3d" | "height" => Ok(MeshMode::Height3D),
            _ => Err(VizError::UnknownMode(s.to_string())),
        }
    }
}

/// Grid-aligned triangle mesh with one vertex per grid node.
///
/// Vertices sit at cell centres of the unit dish, `x = (col + ½) / width`,
/// `y = (row + ½) / height`, listed row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapMesh<T> {
    pub width: usize,
    pub height: usize,
    pub mode: MeshMode,
    pub vertices: Vec<[T; 3]>,
    pub triangles: Vec<[u32; 3]>,
    /// Source concentration per vertex, mM.
    pub scalar: Vec<T>,
}

/// Builds a flat or height-displaced mesh for `matrix`. In 3D mode
/// `z = height_scale · (c − min) / (max − min)` over `range` (the matrix's
/// own extremes when `None`), or 0 when `max = min`.
pub fn build_heatmap_mesh<T: Scalar>(
    matrix: &Grid<T>,
    mode: MeshMode,
    height_scale: T,
    range: Option<(T, T)>,
) -> Result<HeatmapMesh<T>, VizError> {
    let (lo, hi) = matrix.extremes().ok_or(VizError::EmptyMatrix)?;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(VizError::NonFinite);
    }
    let (min, max) = range.unwrap_or((lo, hi));
    let (w, h) = (matrix.width(), matrix.height());
    let half = T::lit(0.5);
    let wt = T::from_usize(w).expect("width fits");
    let ht = T::from_usize(h).expect("height fits");

    let mut vertices = Vec::with_capacity(w * h);
    for row in 0..h {
        for col in 0..w {
            let c = matrix.get(col, row);
            let z = match mode {
                MeshMode::Height3D if max > min => {
                    let t = ((c - min) / (max - min)).max(T::zero()).min(T::one());
                    height_scale * t
                }
                _ => T::zero(),
            };
            vertices.push([
                (T::from_usize(col).expect("fits") + half) / wt,
                (T::from_usize(row).expect("fits") + half) / ht,
                z,
            ]);
        }
    }

    let mut triangles = Vec::with_capacity(2 * w.saturating_sub(1) * h.saturating_sub(1));
    for row in 0..h.saturating_sub(1) {
        for col in 0..w.saturating_sub(1) {
            let i00 = (row * w + col) as u32;
            let i10 = i00 + 1;
            let i01 = i00 + w as u32;
            let i11 = i01 + 1;
            triangles.push([i00, i10, i11]);
            triangles.push([i00, i11, i01]);
        }
    }

    Ok(HeatmapMesh {
        width: w,
        height: h,
        mode,
        vertices,
        triangles,
        scalar: matrix.as_slice().to_vec(),
    })
}
