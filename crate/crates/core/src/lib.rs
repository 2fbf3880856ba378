//! Spatial dynamic flux balance simulation of microbial communities, with
//! the dataset formats, validation and view-data preparation used by the
//! explorer.
//!
//! Numeric kernels (simplex, FBA, Monod bounds, diffusion, meshes, frame
//! statistics) are generic over [`Scalar`]; the aliases below fix them to
//! `f64`, which is what the simulation and dataset pipeline use.

pub mod arena;
pub mod bench;
pub mod dataset;
pub mod demo;
pub mod grid;
pub mod metabolic;
pub mod num;
pub mod viz;

pub use grid::Grid;
pub use num::Scalar;

pub type MetabolicModel = metabolic::MetabolicModel<f64>;
pub type Reaction = metabolic::Reaction<f64>;
pub type FluxSolution = metabolic::FluxSolution<f64>;
pub type UptakeKinetics = metabolic::UptakeKinetics<f64>;
pub type LinearProgram = metabolic::simplex::LinearProgram<f64>;
pub type SubstanceField = arena::SubstanceField<f64>;
pub type HeatmapMesh = viz::HeatmapMesh<f64>;
pub type FrameStats = bench::FrameStats<f64>;

pub type MetabolicModelF32 = metabolic::MetabolicModel<f32>;
pub type SubstanceFieldF32 = arena::SubstanceField<f32>;
pub type HeatmapMeshF32 = viz::HeatmapMesh<f32>;
