//! Import time and frame-assembly throughput on synthetic datasets of a
//! given size.
//!
//! FPS here is the rate at which complete frames (glyphs, 3D mesh, legend)
//! are assembled and serialized to JSON. It is not a display refresh rate.

mod stats;
mod synthetic;

use std::io::Cursor;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{import_pair, POPULATION_FILE, SUBSTANCE_FILE};
use crate::viz::{Frame, FrameAssembler, MeshMode, Selection};

pub use stats::{fps_from_durations, FrameStats};
pub use synthetic::{
    generate_dataset, SizeSpec, SyntheticDataset, SYNTHETIC_SUBSTANCES, TABLE_SIZES,
};

/// Frame rate a dataset must sustain to count as suitable.
pub const TARGET_FPS: f64 = 70.0;
pub const WARMUP_FRAMES: usize = 50;
pub const MIN_MEASURED_FRAMES: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("no frame durations given")]
    EmptyInput,
    #[error("frame duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("invalid size spec: {0}")]
    BadSpec(String),
    #[error("generated dataset failed to import: {0}")]
    Import(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchOptions {
    pub seed: u64,
    pub measured_frames: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            measured_frames: MIN_MEASURED_FRAMES,
        }
    }
}

/// One row of the performance table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub width: usize,
    pub height: usize,
    /// Population line count.
    pub rows: usize,
    /// Agents at the densest time point.
    pub agents: usize,
    /// Import, validation and indexing, seconds.
    pub t1: f64,
    /// Assembling every frame once, seconds.
    pub t2: f64,
    pub fps: f64,
    pub frames_measured: usize,
    pub suitable: bool,
}

pub fn bench_import_and_frames(
    sizes: &[SizeSpec],
    options: &BenchOptions,
) -> Result<Vec<BenchRecord>, BenchError> {
    sizes.iter().map(|s| bench_one(s, options)).collect()
}

fn bench_one(spec: &SizeSpec, options: &BenchOptions) -> Result<BenchRecord, BenchError> {
    let data = generate_dataset(spec, options.seed)?;

    let start = Instant::now();
    let outcome = import_pair(
        Cursor::new(data.population.as_bytes()),
        Cursor::new(data.substance.as_bytes()),
        POPULATION_FILE,
        SUBSTANCE_FILE,
        |_| {},
    );
    let pair = outcome
        .pair
        .ok_or_else(|| BenchError::Import(outcome.report.errors.join("; ")))?;
    let assembler = FrameAssembler::new(Arc::new(pair));
    let t1 = start.elapsed().as_secs_f64();

    let selection = Selection {
        substance: Some(SYNTHETIC_SUBSTANCES[0].to_string()),
        mode: MeshMode::Height3D,
        scheme: 1,
        flux_substance: Some(SYNTHETIC_SUBSTANCES[1].to_string()),
    };
    let times = assembler.times().to_vec();
    let mut frame = Frame::default();
    let mut buf = Vec::new();
    let render = |t: u32, frame: &mut Frame, buf: &mut Vec<u8>| {
        assembler
            .assemble_into(t, &selection, frame)
            .expect("indexed time");
        buf.clear();
        serde_json::to_writer(&mut *buf, frame).expect("serializable frame");
    };

    let start = Instant::now();
    for &t in &times {
        render(t, &mut frame, &mut buf);
    }
    let t2 = start.elapsed().as_secs_f64();

    let measured = options.measured_frames.max(MIN_MEASURED_FRAMES);
    let mut durations = Vec::with_capacity(measured);
    for i in 0..WARMUP_FRAMES + measured {
        let t = times[i % times.len()];
        let start = Instant::now();
        render(t, &mut frame, &mut buf);
        if i >= WARMUP_FRAMES {
            durations.push(start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE));
        }
    }
    let stats = fps_from_durations(&durations)?;

    Ok(BenchRecord {
        width: spec.width,
        height: spec.height,
        rows: spec.rows,
        agents: spec.agents,
        t1,
        t2,
        fps: stats.fps,
        frames_measured: measured,
        suitable: stats.fps >= TARGET_FPS,
    })
}

/// Aligned plain-text table of `records`.
pub fn render_table(records: &[BenchRecord]) -> String {
    let header = ["Dim", "Rows", "n", "t1 (s)", "t2 (s)", "FPS", "Suitable"];
    let rows: Vec<[String; 7]> = records
        .iter()
        .map(|r| {
            [
                format!("{}x{}", r.width, r.height),
                r.rows.to_string(),
                r.agents.to_string(),
                format!("{:.3}", r.t1),
                format!("{:.3}", r.t2),
                format!("{:.2}", r.fps),
                if r.suitable { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[&str]| {
        cells
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| {
                if i == 0 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(&header);
    out.push('\n');
    for row in &rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        out.push_str(&line(&cells));
        out.push('\n');
    }
    out.push_str(&format!(
        "FPS = frame assembly + JSON serialization throughput (not display refresh); suitable at >= {TARGET_FPS} FPS\n"
    ));
    out
}
