use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{
    format_error, next_line, parse_cell, parse_decimal, parse_positive, CellType, DatasetError,
};

pub const POPULATION_LABEL: &str = "Population";
pub const POPULATION_COLUMNS: usize = 14;
pub const FLUX_COLUMNS: usize = 6;

/// One row of the population dataset:
/// `Population,time,x,y,biomass,genotype,phenotype,name,f1,...,f6`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationRecord {
    pub time: u32,
    pub x: u32,
    pub y: u32,
    /// fg
    pub biomass: f64,
    pub genotype: u32,
    pub phenotype: u32,
    pub name: String,
    /// mmol/(gDW·h), one per substance in substance-file order.
    pub fluxes: [f64; FLUX_COLUMNS],
}

impl PopulationRecord {
    pub fn to_line(&self) -> String {
        let mut s = format!(
            "{POPULATION_LABEL},{},{},{},{},{},{},{}",
            self.time, self.x, self.y, self.biomass, self.genotype, self.phenotype, self.name
        );
        for f in &self.fluxes {
            s.push(',');
            s.push_str(&f.to_string());
        }
        s
    }

    pub(crate) fn parse_line(line: &str, path: &str, line_no: usize) -> Result<Self, DatasetError> {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != POPULATION_COLUMNS {
            return Err(DatasetError::ColumnCount { found: cells.len() });
        }
        if cells[0] != POPULATION_LABEL {
            return Err(format_error(cells[0], CellType::String, path, line_no, 1));
        }
        let time = parse_cell(cells[1], CellType::Integer, path, line_no, 2)?;
        let x = parse_positive(cells[2], path, line_no, 3)?;
        let y = parse_positive(cells[3], path, line_no, 4)?;
        let biomass = parse_decimal(cells[4], true, path, line_no, 5)?;
        let genotype = parse_cell(cells[5], CellType::Integer, path, line_no, 6)?;
        let phenotype = parse_cell(cells[6], CellType::Integer, path, line_no, 7)?;
        if cells[7].trim().is_empty() {
            return Err(format_error(cells[7], CellType::String, path, line_no, 8));
        }
        let mut fluxes = [0.0; FLUX_COLUMNS];
        for (k, f) in fluxes.iter_mut().enumerate() {
            *f = parse_decimal(cells[8 + k], false, path, line_no, 9 + k)?;
        }
        Ok(Self {
            time,
            x,
            y,
            biomass,
            genotype,
            phenotype,
            name: cells[7].to_string(),
            fluxes,
        })
    }
}

/// Streaming population parser holding one line at a time. Stops after
/// the first error.
pub struct PopulationReader<R> {
    reader: R,
    path: String,
    line: usize,
    bytes: u64,
    buf: String,
    done: bool,
}

impl<R: BufRead> PopulationReader<R> {
    pub fn new(reader: R, path: impl Into<String>) -> Self {
        Self {
            reader,
            path: path.into(),
            line: 0,
            bytes: 0,
            buf: String::new(),
            done: false,
        }
    }

    /// Bytes consumed so far, for progress reporting.
    pub fn bytes_read(&self) -> u64 {
        self.bytes
    }
}

impl<R: BufRead> Iterator for PopulationReader<R> {
    type Item = Result<PopulationRecord, DatasetError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match next_line(&mut self.reader, &mut self.buf, &mut self.bytes, &self.path) {
            Ok(false) => {
                self.done = true;
                None
            }
            Ok(true) => {
                self.line += 1;
                let rec = PopulationRecord::parse_line(&self.buf, &self.path, self.line);
                self.done = rec.is_err();
                Some(rec)
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

pub fn parse_population(text: &str, path: &str) -> Result<Vec<PopulationRecord>, DatasetError> {
    PopulationReader::new(text.as_bytes(), path).collect()
}
