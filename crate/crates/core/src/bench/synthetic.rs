use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::dataset::{PopulationRecord, RandomFluxes, SubstanceBlock, FLUX_COLUMNS};
use crate::demo::species_names;

pub const SYNTHETIC_SUBSTANCES: [&str; FLUX_COLUMNS] = [
    "Glucose",
    "Acetate",
    "Formate",
    "Lactate",
    "Ethanol",
    "Succinate",
];

/// Target scale of a synthetic dataset: grid dims, population line count
/// and agents at the densest time point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeSpec {
    pub width: usize,
    pub height: usize,
    pub rows: usize,
    pub agents: usize,
}

/// Default benchmark scales.
pub const TABLE_SIZES: [SizeSpec; 3] = [
    SizeSpec {
        width: 20,
        height: 20,
        rows: 1389,
        agents: 392,
    },
    SizeSpec {
        width: 50,
        height: 50,
        rows: 10600,
        agents: 2500,
    },
    SizeSpec {
        width: 100,
        height: 100,
        rows: 48000,
        agents: 10000,
    },
];

impl SizeSpec {
    pub fn check(&self) -> Result<(), BenchError> {
        let bad = |why: &str| Err(BenchError::BadSpec(format!("{self}: {why}")));
        if self.width == 0 || self.height == 0 {
            return bad("empty grid");
        }
        if self.agents == 0 || self.agents > self.width * self.height {
            return bad("agent count must be between 1 and the number of cells");
        }
        if self.rows < self.agents {
            return bad("rows must be at least the agent count");
        }
        Ok(())
    }

    /// Agents present at each time point: full snapshots of `agents`
    /// preceded by one partial snapshot holding the remainder.
    pub fn time_counts(&self) -> Vec<usize> {
        let full = self.rows / self.agents;
        let rest = self.rows % self.agents;
        let mut counts = Vec::with_capacity(full + 1);
        if rest > 0 {
            counts.push(rest);
        }
        counts.extend(std::iter::repeat_n(self.agents, full));
        counts
    }
}

impl fmt::Display for SizeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}:{}:{}",
            self.width, self.height, self.rows, self.agents
        )
    }
}

impl FromStr for SizeSpec {
    type Err = BenchError;

    /// `WxH:rows:n`, e.g. `20x20:1389:392`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BenchError::BadSpec(format!("expected WxH:rows:n, got `{s}`"));
        let mut parts = s.trim().split(':');
        let dims = parts.next().ok_or_else(bad)?;
        let (w, h) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
        let num = |t: Option<&str>| {
            t.and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(bad)
        };
        let spec = SizeSpec {
            width: num(Some(w))?,
            height: num(Some(h))?,
            rows: num(parts.next())?,
            agents: num(parts.next())?,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        spec.check()?;
        Ok(spec)
    }
}

/// A generated dataset pair as file contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticDataset {
    pub spec: SizeSpec,
    pub population: String,
    pub substance: String,
}

/// Deterministic dataset with exactly `spec.rows` population lines and
/// `spec.agents` agents at the densest time point. Agents keep their cell
/// across time points; later time points add agents.
pub fn generate_dataset(spec: &SizeSpec, seed: u64) -> Result<SyntheticDataset, BenchError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = species_names();
    let cells = sample(&mut rng, spec.width * spec.height, spec.agents).into_vec();
    let genotypes: Vec<u32> = (0..spec.agents)
        .map(|_| rng.gen_range(1..=names.len() as u32))
        .collect();
    let mut fluxes = RandomFluxes::new(seed ^ 0x5EED);

    let counts = spec.time_counts();
    let mut population = String::with_capacity(spec.rows * 120);
    for (t, &count) in counts.iter().enumerate() {
        let mut present: Vec<usize> = (0..count).collect();
        present.sort_by_key(|&k| (cells[k] / spec.width, cells[k] % spec.width));
        for k in present {
            let genotype = genotypes[k];
            let mut f = [0.0; FLUX_COLUMNS];
            for v in f.iter_mut() {
                *v = (fluxes.next().expect("infinite stream") * 1000.0).round() / 1000.0;
            }
            let record = PopulationRecord {
                time: t as u32 + 1,
                x: (cells[k] % spec.width) as u32 + 1,
                y: (cells[k] / spec.width) as u32 + 1,
                biomass: (rng.gen_range(500.0..2500.0_f64) * 100.0).round() / 100.0,
                genotype,
                phenotype: rng.gen_range(1..=4),
                name: names[genotype as usize - 1].to_string(),
                fluxes: f,
            };
            population.push_str(&record.to_line());
            population.push('\n');
        }
    }

    let mut substance =
        String::with_capacity(counts.len() * FLUX_COLUMNS * spec.height * spec.width * 8);
    for (s, name) in SYNTHETIC_SUBSTANCES.iter().enumerate() {
        let phase = s as f64 * 0.7;
        for t in 1..=counts.len() {
            for row in 1..=spec.height {
                let values = (1..=spec.width)
                    .map(|col| {
                        let wave = ((col as f64 * 0.3 + phase + t as f64 * 0.2).sin()
                            * (row as f64 * 0.25 - phase).cos()
                            + 1.0)
                            * 5.0;
                        (wave * 10_000.0).round() / 10_000.0
                    })
                    .collect();
                let block = SubstanceBlock {
                    substance: name.to_string(),
                    time: t as u32,
                    row: row as u32,
                    values,
                };
                substance.push_str(&block.to_line());
                substance.push('\n');
            }
        }
    }

    Ok(SyntheticDataset {
        spec: *spec,
        population,
        substance,
    })
}
