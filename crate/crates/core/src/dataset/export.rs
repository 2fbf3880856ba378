use std::io::{self, Write};

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PopulationRecord, SubstanceBlock, FLUX_COLUMNS};
use crate::arena::SimulationTrace;

/// Inclusive range of randomized flux values, mmol/(gDW·h).
pub const FLUX_RANGE: (f64, f64) = (-50.0, 50.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxMode {
    /// The agents' own exchange fluxes from the simulation.
    Computed,
    /// Uniform draws from [`FLUX_RANGE`], reproducible per seed.
    Randomized(u64),
}

/// Seeded stream of uniform flux values in [`FLUX_RANGE`].
pub struct RandomFluxes {
    rng: ChaCha8Rng,
    dist: Uniform<f64>,
}

impl RandomFluxes {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dist: Uniform::new_inclusive(FLUX_RANGE.0, FLUX_RANGE.1),
        }
    }
}

impl Iterator for RandomFluxes {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.dist.sample(&mut self.rng))
    }
}

/// The `k` substances whose grid total varies most over time (population
/// variance across snapshots). Ties go to the alphabetically first name.
pub fn select_fluctuating_substances(trace: &SimulationTrace, k: usize) -> Vec<String> {
    let n = trace.snapshots.len() as f64;
    let mut scored: Vec<(f64, &String)> = trace
        .substances
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let totals: Vec<f64> = trace.snapshots.iter().map(|s| s.fields[i].sum()).collect();
            let mean = totals.iter().sum::<f64>() / n;
            let var = totals.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / n;
            (var, name)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored
        .into_iter()
        .take(k)
        .map(|(_, name)| name.clone())
        .collect()
}

fn substance_indices(trace: &SimulationTrace, substances: &[String]) -> Vec<usize> {
    substances
        .iter()
        .map(|s| {
            trace
                .substances
                .iter()
                .position(|t| t == s)
                .unwrap_or_else(|| panic!("substance `{s}` is not part of the trace"))
        })
        .collect()
}

/// Writes one population row per agent per snapshot. The initial snapshot
/// (step 0) is not exported; the time column is the step index.
///
/// Flux columns follow `substances` (at most six); missing columns are
/// padded with zero.
///
/// # Panics
/// If a name in `substances` is not tracked by the trace or more than six
/// are given.
pub fn write_population<W: Write>(
    out: &mut W,
    trace: &SimulationTrace,
    substances: &[String],
    mode: FluxMode,
) -> io::Result<()> {
    assert!(
        substances.len() <= FLUX_COLUMNS,
        "at most {FLUX_COLUMNS} flux substances"
    );
    let idx = substance_indices(trace, substances);
    let mut random = match mode {
        FluxMode::Randomized(seed) => Some(RandomFluxes::new(seed)),
        FluxMode::Computed => None,
    };
    for snap in trace.snapshots.iter().filter(|s| s.step > 0) {
        for agent in &snap.agents {
            let mut fluxes = [0.0; FLUX_COLUMNS];
            for (k, &i) in idx.iter().enumerate() {
                fluxes[k] = match random.as_mut() {
                    Some(r) => r.next().expect("infinite stream"),
                    None => agent.fluxes[i],
                };
            }
            let record = PopulationRecord {
                time: snap.step,
                x: agent.x,
                y: agent.y,
                biomass: agent.biomass,
                genotype: agent.genotype,
                phenotype: agent.phenotype,
                name: trace.species[agent.genotype as usize - 1].name.clone(),
                fluxes,
            };
            writeln!(out, "{}", record.to_line())?;
        }
    }
    Ok(())
}

pub fn export_population(trace: &SimulationTrace, substances: &[String], mode: FluxMode) -> String {
    let mut buf = Vec::new();
    write_population(&mut buf, trace, substances, mode).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Writes `height` lines per substance per exported snapshot.
pub fn write_substance<W: Write>(
    out: &mut W,
    trace: &SimulationTrace,
    substances: &[String],
) -> io::Result<()> {
    let idx = substance_indices(trace, substances);
    for (name, &i) in substances.iter().zip(&idx) {
        for snap in trace.snapshots.iter().filter(|s| s.step > 0) {
            let grid = &snap.fields[i];
            for row in 0..grid.height() {
                let block = SubstanceBlock {
                    substance: name.clone(),
                    time: snap.step,
                    row: row as u32 + 1,
                    values: grid.row(row).to_vec(),
                };
                writeln!(out, "{}", block.to_line())?;
            }
        }
    }
    Ok(())
}

pub fn export_substance(trace: &SimulationTrace, substances: &[String]) -> String {
    let mut buf = Vec::new();
    write_substance(&mut buf, trace, substances).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
