use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::color::{scheme, ColorScheme, Rgb, DEFAULT_SCHEME};
use super::flux::{classify_flux, Outline};
use super::mesh::{build_heatmap_mesh, HeatmapMesh, MeshMode, DEFAULT_HEIGHT_SCALE};
use super::VizError;
use crate::dataset::{DatasetPair, SubstanceBlock, FLUX_COLUMNS};
use crate::grid::Grid;

/// Species colors assigned by genotype (1-based, wrapping).
pub const SPECIES_PALETTE: [Rgb; 9] = [
    Rgb::new(0xE4, 0x1A, 0x1C),
    Rgb::new(0x37, 0x7E, 0xB8),
    Rgb::new(0x4D, 0xAF, 0x4A),
    Rgb::new(0x98, 0x4E, 0xA3),
    Rgb::new(0xFF, 0x7F, 0x00),
    Rgb::new(0xFF, 0xFF, 0x33),
    Rgb::new(0xA6, 0x56, 0x28),
    Rgb::new(0xF7, 0x81, 0xBF),
    Rgb::new(0x99, 0x99, 0x99),
];

pub fn species_color(genotype: u32) -> Rgb {
    let i = (genotype.max(1) - 1) as usize % SPECIES_PALETTE.len();
    SPECIES_PALETTE[i]
}

/// Smallest and largest value of `substance` over every time point.
pub fn global_extremes(blocks: &[SubstanceBlock], substance: &str) -> Option<(f64, f64)> {
    blocks
        .iter()
        .filter(|b| b.substance == substance)
        .flat_map(|b| b.values.iter().copied())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

/// What the viewer is currently showing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    pub substance: Option<String>,
    #[serde(default)]
    pub mode: MeshMode,
    #[serde(default = "default_scheme")]
    pub scheme: usize,
    /// Substance whose exchange flux drives the organism outlines.
    pub flux_substance: Option<String>,
}

fn default_scheme() -> usize {
    DEFAULT_SCHEME
}

impl Default for Selection {
    fn default() -> Self {
        Self {
            substance: None,
            mode: MeshMode::Flat2D,
            scheme: DEFAULT_SCHEME,
            flux_substance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrganismGlyph {
    pub x: u32,
    pub y: u32,
    pub genotype: u32,
    pub phenotype: u32,
    pub biomass: f64,
    pub name: String,
    pub color: Rgb,
    pub outline: Outline,
    pub fluxes: [f64; FLUX_COLUMNS],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Legend {
    pub min: f64,
    pub max: f64,
    pub scheme_index: usize,
    pub scheme: ColorScheme,
}

/// Everything needed to draw one time point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub time: u32,
    pub width: usize,
    pub height: usize,
    pub glyphs: Vec<OrganismGlyph>,
    pub substance: Option<String>,
    pub flux_substance: Option<String>,
    pub mesh: Option<HeatmapMesh<f64>>,
    pub legend: Option<Legend>,
}

/// Per-dataset lookup tables built once after import.
#[derive(Debug, Clone)]
struct DatasetIndex {
    rows_by_time: BTreeMap<u32, Vec<usize>>,
    matrices: HashMap<(usize, u32), Grid<f64>>,
    extremes: Vec<Option<(f64, f64)>>,
    palette: BTreeMap<u32, Rgb>,
}

impl DatasetIndex {
    fn build(pair: &DatasetPair) -> Self {
        let mut rows_by_time: BTreeMap<u32, Vec<usize>> =
            pair.times.iter().map(|&t| (t, Vec::new())).collect();
        for (i, r) in pair.population.iter().enumerate() {
            rows_by_time.entry(r.time).or_default().push(i);
        }

        let (w, h) = pair.dims;
        let position: HashMap<&str, usize> = pair
            .substances
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut matrices: HashMap<(usize, u32), Grid<f64>> = HashMap::new();
        let mut extremes: Vec<Option<(f64, f64)>> = vec![None; pair.substances.len()];
        for b in &pair.substance {
            let s = position[b.substance.as_str()];
            let grid = matrices
                .entry((s, b.time))
                .or_insert_with(|| Grid::filled(w, h, 0.0));
            let row = b.row as usize - 1;
            if row >= h {
                continue;
            }
            for (col, &v) in b.values.iter().enumerate().take(w) {
                grid.set(col, row, v);
                extremes[s] = Some(match extremes[s] {
                    None => (v, v),
                    Some((lo, hi)) => (lo.min(v), hi.max(v)),
                });
            }
        }

        let palette = pair
            .species()
            .keys()
            .map(|&g| (g, species_color(g)))
            .collect();
        Self {
            rows_by_time,
            matrices,
            extremes,
            palette,
        }
    }
}

/// Assembles frames for one dataset, reusing glyph buffers between calls.
#[derive(Debug, Clone)]
pub struct FrameAssembler {
    pair: Arc<DatasetPair>,
    index: DatasetIndex,
    height_scale: f64,
}

impl FrameAssembler {
    pub fn new(pair: Arc<DatasetPair>) -> Self {
        let index = DatasetIndex::build(&pair);
        Self {
            pair,
            index,
            height_scale: DEFAULT_HEIGHT_SCALE,
        }
    }

    pub fn with_height_scale(mut self, scale: f64) -> Self {
        self.height_scale = scale;
        self
    }

    pub fn pair(&self) -> &DatasetPair {
        &self.pair
    }

    pub fn times(&self) -> &[u32] {
        &self.pair.times
    }

    pub fn palette(&self) -> &BTreeMap<u32, Rgb> {
        &self.index.palette
    }

    /// Concentration matrix of `substance` at time `t`.
    pub fn matrix(&self, substance: &str, t: u32) -> Result<&Grid<f64>, VizError> {
        let s = self.substance_index(substance)?;
        if !self.index.rows_by_time.contains_key(&t) {
            return Err(VizError::UnknownTime(t));
        }
        self.index
            .matrices
            .get(&(s, t))
            .ok_or(VizError::UnknownTime(t))
    }

    /// Range of `substance` over all time points.
    pub fn extremes(&self, substance: &str) -> Result<Option<(f64, f64)>, VizError> {
        Ok(self.index.extremes[self.substance_index(substance)?])
    }

    pub fn mesh(
        &self,
        substance: &str,
        t: u32,
        mode: MeshMode,
    ) -> Result<HeatmapMesh<f64>, VizError> {
        let matrix = self.matrix(substance, t)?;
        let range = self.extremes(substance)?;
        build_heatmap_mesh(matrix, mode, self.height_scale, range)
    }

    pub fn assemble(&self, t: u32, selection: &Selection) -> Result<Frame, VizError> {
        let mut frame = Frame::default();
        self.assemble_into(t, selection, &mut frame)?;
        Ok(frame)
    }

    /// Fills `frame` in place. Glyph storage, including name buffers, is
    /// reused. On error `frame` is left unchanged.
    pub fn assemble_into(
        &self,
        t: u32,
        selection: &Selection,
        frame: &mut Frame,
    ) -> Result<(), VizError> {
        let rows = self
            .index
            .rows_by_time
            .get(&t)
            .ok_or(VizError::UnknownTime(t))?;
        let chosen = scheme(selection.scheme)?;
        let flux_col = match &selection.flux_substance {
            Some(s) => Some(
                self.pair
                    .flux_column(s)
                    .ok_or_else(|| VizError::UnknownSubstance(s.clone()))?,
            ),
            None => None,
        };
        let (mesh, legend) = match &selection.substance {
            Some(s) => {
                let mesh = self.mesh(s, t, selection.mode)?;
                let (min, max) = self.extremes(s)?.unwrap_or((0.0, 0.0));
                let legend = Legend {
                    min,
                    max,
                    scheme_index: selection.scheme,
                    scheme: chosen,
                };
                (Some(mesh), Some(legend))
            }
            None => (None, None),
        };

        frame.time = t;
        frame.width = self.pair.dims.0;
        frame.height = self.pair.dims.1;
        frame.substance.clone_from(&selection.substance);
        frame.flux_substance.clone_from(&selection.flux_substance);
        frame.mesh = mesh;
        frame.legend = legend;

        frame.glyphs.truncate(rows.len());
        for (k, &i) in rows.iter().enumerate() {
            let r = &self.pair.population[i];
            let color = self
                .index
                .palette
                .get(&r.genotype)
                .copied()
                .unwrap_or_else(|| species_color(r.genotype));
            let outline = flux_col.map_or(Outline::None, |c| classify_flux(r.fluxes[c]));
            if let Some(g) = frame.glyphs.get_mut(k) {
                g.x = r.x;
                g.y = r.y;
                g.genotype = r.genotype;
                g.phenotype = r.phenotype;
                g.biomass = r.biomass;
                g.name.clone_from(&r.name);
                g.color = color;
                g.outline = outline;
                g.fluxes = r.fluxes;
            } else {
                frame.glyphs.push(OrganismGlyph {
                    x: r.x,
                    y: r.y,
                    genotype: r.genotype,
                    phenotype: r.phenotype,
                    biomass: r.biomass,
                    name: r.name.clone(),
                    color,
                    outline,
                    fluxes: r.fluxes,
                });
            }
        }
        Ok(())
    }

    fn substance_index(&self, substance: &str) -> Result<usize, VizError> {
        self.pair
            .substances
            .iter()
            .position(|s| s == substance)
            .ok_or_else(|| VizError::UnknownSubstance(substance.to_string()))
    }
}

/// One-shot convenience around [`FrameAssembler`].
pub fn assemble_frame(
    pair: &DatasetPair,
    t: u32,
    selection: &Selection,
) -> Result<Frame, VizError> {
    FrameAssembler::new(Arc::new(pair.clone())).assemble(t, selection)
}
