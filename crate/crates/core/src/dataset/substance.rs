use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::{
    format_error, next_line, parse_cell, parse_decimal, parse_positive, CellType, DatasetError,
};

pub const SUBSTANCE_LABEL: &str = "Substance";

/// One matrix row of the substance dataset:
/// `Substance,name,time,row,v1,...,v_x`. Values run along x, in mM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubstanceBlock {
    pub substance: String,
    pub time: u32,
    /// 1-based matrix row (grid y).
    pub row: u32,
    pub values: Vec<f64>,
}

impl SubstanceBlock {
    pub fn to_line(&self) -> String {
        let mut s = format!(
            "{SUBSTANCE_LABEL},{},{},{}",
            self.substance, self.time, self.row
        );
        for v in &self.values {
            s.push(',');
            s.push_str(&v.to_string());
        }
        s
    }

    pub(crate) fn parse_line(line: &str, path: &str, line_no: usize) -> Result<Self, DatasetError> {
        let mut cells = line.split(',');
        let mut column = 0;
        let mut take = |expected: CellType| {
            column += 1;
            cells
                .next()
                .ok_or_else(|| format_error("", expected, path, line_no, column))
                .map(|c| (c, column))
        };
        let (label, col) = take(CellType::String)?;
        if label != SUBSTANCE_LABEL {
            return Err(format_error(label, CellType::String, path, line_no, col));
        }
        let (name, col) = take(CellType::String)?;
        if name.trim().is_empty() {
            return Err(format_error(name, CellType::String, path, line_no, col));
        }
        let (raw, col) = take(CellType::Integer)?;
        let time = parse_cell(raw, CellType::Integer, path, line_no, col)?;
        let (raw, col) = take(CellType::Integer)?;
        let row = parse_positive(raw, path, line_no, col)?;
        let (first, col) = take(CellType::NonnegativeDecimal)?;
        let mut values = vec![parse_decimal(first, true, path, line_no, col)?];
        for (k, raw) in cells.enumerate() {
            values.push(parse_decimal(raw, true, path, line_no, col + 1 + k)?);
        }
        Ok(Self {
            substance: name.to_string(),
            time,
            row,
            values,
        })
    }
}

/// Streaming substance parser; same contract as the population reader.
pub struct SubstanceReader<R> {
    reader: R,
    path: String,
    line: usize,
    bytes: u64,
    buf: String,
    done: bool,
}

impl<R: BufRead> SubstanceReader<R> {
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

    pub fn bytes_read(&self) -> u64 {
        self.bytes
    }
}

impl<R: BufRead> Iterator for SubstanceReader<R> {
    type Item = Result<SubstanceBlock, DatasetError>;

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
                let block = SubstanceBlock::parse_line(&self.buf, &self.path, self.line);
                self.done = block.is_err();
                Some(block)
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

pub fn parse_substance(text: &str, path: &str) -> Result<Vec<SubstanceBlock>, DatasetError> {
    SubstanceReader::new(text.as_bytes(), path).collect()
}
