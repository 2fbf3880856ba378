//! Rendering-agnostic view data: heatmap meshes, color gradients, contrast
//! checks and per-time-point frames.

mod color;
mod flux;
mod frame;
mod mesh;

use thiserror::Error;

pub use color::{
    contrast_ratio, map_color, relative_luminance, scheme, ColorScheme, Rgb, BUILTIN_SCHEMES,
    DEFAULT_SCHEME,
};
pub use flux::{classify_flux, classify_flux_with, Outline, FLUX_EPS};
pub use frame::{
    assemble_frame, global_extremes, species_color, Frame, FrameAssembler, Legend, OrganismGlyph,
    Selection, SPECIES_PALETTE,
};
pub use mesh::{build_heatmap_mesh, HeatmapMesh, MeshMode, DEFAULT_HEIGHT_SCALE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VizError {
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix contains non-finite values")]
    NonFinite,
    #[error("not a #RRGGBB color: {0}")]
    BadHex(String),
    #[error("no color scheme with index {0}")]
    UnknownScheme(usize),
    #[error("unknown display mode {0}")]
    UnknownMode(String),
    #[error("no data for time {0}")]
    UnknownTime(u32),
    #[error("unknown substance {0}")]
    UnknownSubstance(String),
}
