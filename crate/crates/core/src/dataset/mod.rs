//! Population and substance CSV datasets: writers, streaming parsers and
//! cross-file validation.
//!
//! Both files are headerless, comma separated, use `.` as the decimal
//! separator and `\n` line endings (`\r\n` is accepted on input). Decimals
//! are written in the shortest form that parses back to the same `f64`.

mod export;
mod population;
mod substance;
mod validate;

use std::fmt;

use thiserror::Error;

pub use export::{
    export_population, export_substance, select_fluctuating_substances, write_population,
    write_substance, FluxMode, RandomFluxes, FLUX_RANGE,
};
pub use population::{
    parse_population, PopulationReader, PopulationRecord, FLUX_COLUMNS, POPULATION_COLUMNS,
    POPULATION_LABEL,
};
pub use substance::{parse_substance, SubstanceBlock, SubstanceReader, SUBSTANCE_LABEL};
pub use validate::{
    import_pair, validate_pair, DatasetPair, FileStatus, ImportOutcome, ValidationReport,
};

pub const POPULATION_FILE: &str = "population_dataset.csv";
pub const SUBSTANCE_FILE: &str = "substance_dataset.csv";

/// Expected content of a dataset cell, as named in format errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellType {
    String,
    Integer,
    Decimal,
    NonnegativeDecimal,
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CellType::String => "string",
            CellType::Integer => "integer",
            CellType::Decimal => "decimal",
            CellType::NonnegativeDecimal => "nonnegative decimal",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("Format of {path} is invalid. Please check line {line}, column {column}. Invalid entry: {entry}. Should be of type: {expected}!")]
    Format {
        path: String,
        line: usize,
        column: usize,
        entry: String,
        expected: CellType,
    },
    #[error("Population dataset has {found} instead of 14 columns!")]
    ColumnCount { found: usize },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub fn times_mismatch_message(population: &[u32], substance: &[u32]) -> String {
    format!(
        "The simulation times {} and {} of your datasets don't match!",
        list(population),
        list(substance)
    )
}

pub fn dimensions_mismatch_message(xs: &[usize], ys: &[usize]) -> String {
    format!(
        "The simulation dimensions of x {} or y {} don't match!",
        list(xs),
        list(ys)
    )
}

pub fn genotype_message(line: usize) -> String {
    format!("Genotype does not match a name in line {line} of population dataset!")
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub(crate) fn parse_cell<T: std::str::FromStr>(
    raw: &str,
    expected: CellType,
    path: &str,
    line: usize,
    column: usize,
) -> Result<T, DatasetError> {
    raw.parse::<T>()
        .map_err(|_| format_error(raw, expected, path, line, column))
}

pub(crate) fn format_error(
    raw: &str,
    expected: CellType,
    path: &str,
    line: usize,
    column: usize,
) -> DatasetError {
    DatasetError::Format {
        path: path.to_string(),
        line,
        column,
        entry: raw.to_string(),
        expected,
    }
}

pub(crate) fn parse_decimal(
    raw: &str,
    nonnegative: bool,
    path: &str,
    line: usize,
    column: usize,
) -> Result<f64, DatasetError> {
    let expected = if nonnegative {
        CellType::NonnegativeDecimal
    } else {
        CellType::Decimal
    };
    let v: f64 = parse_cell(raw, expected, path, line, column)?;
    if !v.is_finite() || (nonnegative && v < 0.0) {
        return Err(format_error(raw, expected, path, line, column));
    }
    Ok(v)
}

pub(crate) fn parse_positive(
    raw: &str,
    path: &str,
    line: usize,
    column: usize,
) -> Result<u32, DatasetError> {
    let v: u32 = parse_cell(raw, CellType::Integer, path, line, column)?;
    if v == 0 {
        return Err(format_error(raw, CellType::Integer, path, line, column));
    }
    Ok(v)
}

/// Reads one line into `buf`, stripping the terminator. Returns `Ok(false)`
/// at end of input.
pub(crate) fn next_line<R: std::io::BufRead>(
    reader: &mut R,
    buf: &mut String,
    bytes: &mut u64,
    path: &str,
) -> Result<bool, DatasetError> {
    buf.clear();
    let n = reader.read_line(buf).map_err(|e| DatasetError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    if n == 0 {
        return Ok(false);
    }
    *bytes += n as u64;
    if buf.ends_with('\n') {
        buf.pop();
        if buf.ends_with('\r') {
            buf.pop();
        }
    }
    Ok(true)
}
