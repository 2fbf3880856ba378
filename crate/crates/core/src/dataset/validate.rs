use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{
    dimensions_mismatch_message, genotype_message, times_mismatch_message, PopulationReader,
    PopulationRecord, SubstanceBlock, SubstanceReader, FLUX_COLUMNS, POPULATION_FILE,
    SUBSTANCE_FILE,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileStatus {
    pub name: String,
    pub ok: bool,
}

/// Per-file import status plus every validation message in check order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub statuses: Vec<FileStatus>,
    pub errors: Vec<String>,
}

impl ValidationReport {
    fn new(population: &str, substance: &str) -> Self {
        Self {
            statuses: vec![
                FileStatus {
                    name: population.to_string(),
                    ok: true,
                },
                FileStatus {
                    name: substance.to_string(),
                    ok: true,
                },
            ],
            errors: Vec::new(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.errors.is_empty() && self.statuses.iter().all(|s| s.ok)
    }

    fn fail(&mut self, population: bool, substance: bool, message: String) {
        self.statuses[0].ok &= !population;
        self.statuses[1].ok &= !substance;
        self.errors.push(message);
    }
}

/// A validated population/substance pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetPair {
    pub population: Vec<PopulationRecord>,
    pub substance: Vec<SubstanceBlock>,
    /// `(x, y)` extent of the simulation area.
    pub dims: (usize, usize),
    pub times: Vec<u32>,
    /// Substance names in order of first appearance; flux column `k` of the
    /// population file belongs to `substances[k]`.
    pub substances: Vec<String>,
}

impl DatasetPair {
    /// Concentration at 1-based grid point `(x, y)`.
    pub fn concentration(&self, substance: &str, time: u32, x: u32, y: u32) -> Option<f64> {
        self.substance
            .iter()
            .find(|b| b.substance == substance && b.time == time && b.row == y)
            .and_then(|b| b.values.get(x as usize - 1).copied())
    }

    /// Genotype → name, in genotype order.
    pub fn species(&self) -> BTreeMap<u32, String> {
        let mut out = BTreeMap::new();
        for r in &self.population {
            out.entry(r.genotype).or_insert_with(|| r.name.clone());
        }
        out
    }

    pub fn flux_column(&self, substance: &str) -> Option<usize> {
        self.substances
            .iter()
            .position(|s| s == substance)
            .filter(|&k| k < FLUX_COLUMNS)
    }
}

fn substance_order(blocks: &[SubstanceBlock]) -> Vec<String> {
    let mut seen = Vec::new();
    for b in blocks {
        if !seen.contains(&b.substance) {
            seen.push(b.substance.clone());
        }
    }
    seen
}

/// Cross-file checks: time sets, area dimensions (including agent
/// coordinates), and the genotype/name bijection. All violations are
/// reported.
pub fn validate_pair(
    population: &[PopulationRecord],
    substance: &[SubstanceBlock],
) -> ValidationReport {
    validate_named(population, substance, POPULATION_FILE, SUBSTANCE_FILE)
}

pub(crate) fn validate_named(
    population: &[PopulationRecord],
    substance: &[SubstanceBlock],
    population_name: &str,
    substance_name: &str,
) -> ValidationReport {
    let mut report = ValidationReport::new(population_name, substance_name);

    let pop_times: BTreeSet<u32> = population.iter().map(|r| r.time).collect();
    let mut per_substance: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
    for b in substance {
        per_substance
            .entry(&b.substance)
            .or_default()
            .insert(b.time);
    }
    let all_sub_times: BTreeSet<u32> = substance.iter().map(|b| b.time).collect();
    let offending = per_substance.values().find(|t| **t != pop_times);
    if pop_times != all_sub_times || offending.is_some() {
        let sub_times = if pop_times != all_sub_times {
            &all_sub_times
        } else {
            offending.expect("checked above")
        };
        let a: Vec<u32> = pop_times.iter().copied().collect();
        let b: Vec<u32> = sub_times.iter().copied().collect();
        report.fail(true, true, times_mismatch_message(&a, &b));
    }

    let mut xs: BTreeSet<usize> = substance.iter().map(|b| b.values.len()).collect();
    let mut blocks: HashMap<(&str, u32), BTreeSet<u32>> = HashMap::new();
    for b in substance {
        blocks
            .entry((&b.substance, b.time))
            .or_default()
            .insert(b.row);
    }
    let mut ys: BTreeSet<usize> = BTreeSet::new();
    for rows in blocks.values() {
        ys.insert(*rows.iter().next_back().expect("nonempty block") as usize);
        ys.insert(rows.len());
    }
    let max_x = population.iter().map(|r| r.x as usize).max();
    let max_y = population.iter().map(|r| r.y as usize).max();
    if let Some(mx) = max_x {
        if xs.last().is_none_or(|&sx| mx > sx) {
            xs.insert(mx);
        }
    }
    if let Some(my) = max_y {
        if ys.last().is_none_or(|&sy| my > sy) {
            ys.insert(my);
        }
    }
    if xs.len() > 1 || ys.len() > 1 {
        let xs: Vec<usize> = xs.into_iter().collect();
        let ys: Vec<usize> = ys.into_iter().collect();
        report.fail(true, true, dimensions_mismatch_message(&xs, &ys));
    }

    let mut by_genotype: HashMap<u32, &str> = HashMap::new();
    let mut by_name: HashMap<&str, u32> = HashMap::new();
    for (i, r) in population.iter().enumerate() {
        let g = *by_genotype.entry(r.genotype).or_insert(&r.name);
        let n = *by_name.entry(&r.name).or_insert(r.genotype);
        if g != r.name || n != r.genotype {
            report.fail(true, false, genotype_message(i + 1));
        }
    }

    report
}

/// Outcome of parsing and validating a pair of dataset streams.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportOutcome {
    pub pair: Option<DatasetPair>,
    pub report: ValidationReport,
}

/// Parses both streams and validates them together. `progress` receives the
/// cumulative number of bytes consumed across both inputs.
pub fn import_pair<P: BufRead, S: BufRead>(
    population: P,
    substance: S,
    population_name: &str,
    substance_name: &str,
    mut progress: impl FnMut(u64),
) -> ImportOutcome {
    let mut report = ValidationReport::new(population_name, substance_name);

    let mut records = Vec::new();
    let mut pop_reader = PopulationReader::new(population, population_name);
    let mut pop_ok = true;
    while let Some(item) = pop_reader.next() {
        match item {
            Ok(r) => records.push(r),
            Err(e) => {
                report.fail(true, false, e.to_string());
                pop_ok = false;
            }
        }
        if records.len() % 256 == 0 {
            progress(pop_reader.bytes_read());
        }
    }
    let pop_bytes = pop_reader.bytes_read();
    progress(pop_bytes);

    let mut blocks = Vec::new();
    let mut sub_reader = SubstanceReader::new(substance, substance_name);
    let mut sub_ok = true;
    while let Some(item) = sub_reader.next() {
        match item {
            Ok(b) => blocks.push(b),
            Err(e) => {
                report.fail(false, true, e.to_string());
                sub_ok = false;
            }
        }
        if blocks.len() % 256 == 0 {
            progress(pop_bytes + sub_reader.bytes_read());
        }
    }
    progress(pop_bytes + sub_reader.bytes_read());

    if !(pop_ok && sub_ok) {
        return ImportOutcome { pair: None, report };
    }

    let report = validate_named(&records, &blocks, population_name, substance_name);
    if !report.is_ok() {
        return ImportOutcome { pair: None, report };
    }
    let dims = (
        blocks.iter().map(|b| b.values.len()).max().unwrap_or(0),
        blocks.iter().map(|b| b.row as usize).max().unwrap_or(0),
    );
    let times: Vec<u32> = records
        .iter()
        .map(|r| r.time)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let substances = substance_order(&blocks);
    ImportOutcome {
        pair: Some(DatasetPair {
            population: records,
            substance: blocks,
            dims,
            times,
            substances,
        }),
        report,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(time: u32, x: u32, y: u32, genotype: u32, name: &str) -> PopulationRecord {
        PopulationRecord {
            time,
            x,
            y,
            biomass: 1.0,
            genotype,
            phenotype: 1,
            name: name.into(),
            fluxes: [0.0; 6],
        }
    }

    fn blocks(times: &[u32], w: usize, h: u32) -> Vec<SubstanceBlock> {
        let mut out = Vec::new();
        for &t in times {
            for row in 1..=h {
                out.push(SubstanceBlock {
                    substance: "Glucose".into(),
                    time: t,
                    row,
                    values: vec![1.0; w],
                });
            }
        }
        out
    }

    #[test]
    fn consistent_pair_passes() {
        let pop = vec![rec(1, 1, 1, 1, "A_b_c"), rec(2, 3, 2, 2, "D_e_f")];
        let report = validate_pair(&pop, &blocks(&[1, 2], 3, 2));
        assert!(report.is_ok(), "{report:?}");
    }

    #[test]
    fn time_mismatch() {
        let pop: Vec<_> = (1..=8).map(|t| rec(t, 1, 1, 1, "A_b_c")).collect();
        let report = validate_pair(&pop, &blocks(&[1, 2, 3, 4, 5, 6, 7], 2, 2));
        assert_eq!(
            report.errors,
            vec!["The simulation times [1, 2, 3, 4, 5, 6, 7, 8] and [1, 2, 3, 4, 5, 6, 7] of your datasets don't match!"]
        );
        assert!(report.statuses.iter().all(|s| !s.ok));
    }

    #[test]
    fn agent_outside_area() {
        let pop = vec![rec(1, 5, 1, 1, "A_b_c")];
        let report = validate_pair(&pop, &blocks(&[1], 4, 5));
        assert_eq!(
            report.errors,
            vec!["The simulation dimensions of x [4, 5] or y [5] don't match!"]
        );
    }

    #[test]
    fn ragged_rows() {
        let mut b = blocks(&[1], 4, 2);
        b[1].values.pop();
        let report = validate_pair(&[rec(1, 1, 1, 1, "A_b_c")], &b);
        assert_eq!(
            report.errors,
            vec!["The simulation dimensions of x [3, 4] or y [2] don't match!"]
        );
    }

    #[test]
    fn genotype_with_two_names() {
        let pop = vec![
            rec(1, 1, 1, 2, "A_b_c"),
            rec(1, 2, 1, 2, "A_b_c"),
            rec(1, 2, 2, 2, "X_y_z"),
        ];
        let report = validate_pair(&pop, &blocks(&[1], 2, 2));
        assert_eq!(
            report.errors,
            vec!["Genotype does not match a name in line 3 of population dataset!"]
        );
        assert!(!report.statuses[0].ok);
        assert!(report.statuses[1].ok);
    }

    #[test]
    fn name_with_two_genotypes() {
        let pop = vec![rec(1, 1, 1, 1, "A_b_c"), rec(1, 2, 1, 2, "A_b_c")];
        let report = validate_pair(&pop, &blocks(&[1], 2, 2));
        assert_eq!(
            report.errors,
            vec!["Genotype does not match a name in line 2 of population dataset!"]
        );
    }

    #[test]
    fn import_reports_parse_errors_per_file() {
        let out = import_pair(
            "Population,1,1,1,1,1,1,A_b_c,0,0,0,0,0,0,9".as_bytes(),
            "Substance,Glucose,1,1,1".as_bytes(),
            "pop.csv",
            "sub.csv",
            |_| {},
        );
        assert!(out.pair.is_none());
        assert_eq!(
            out.report.errors,
            vec!["Population dataset has 15 instead of 14 columns!"]
        );
        assert_eq!(
            out.report.statuses,
            vec![
                FileStatus {
                    name: "pop.csv".into(),
                    ok: false
                },
                FileStatus {
                    name: "sub.csv".into(),
                    ok: true
                },
            ]
        );
    }

    #[test]
    fn import_builds_pair() {
        let mut progress = Vec::new();
        let out = import_pair(
            "Population,2,1,1,1,1,1,A_b_c,0,0,0,0,0,0\n".as_bytes(),
            "Substance,Glucose,2,1,1,2\nSubstance,Ammonium,2,1,0.5,0.5\n".as_bytes(),
            "pop.csv",
            "sub.csv",
            |b| progress.push(b),
        );
        let pair = out.pair.unwrap();
        assert_eq!(pair.dims, (2, 1));
        assert_eq!(pair.times, vec![2]);
        assert_eq!(pair.substances, vec!["Glucose", "Ammonium"]);
        assert_eq!(pair.concentration("Glucose", 2, 2, 1), Some(2.0));
        assert!(progress.windows(2).all(|w| w[0] <= w[1]));
    }
}
