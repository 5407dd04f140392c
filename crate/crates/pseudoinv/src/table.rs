//! Sampled tables: delimited text with header `t,value_re,value_im`.

use std::path::Path;

use pseudoinv_core::grid::TimeGrid;
use pseudoinv_core::C64;

use crate::RunError;

pub const HEADER: [&str; 3] = ["t", "value_re", "value_im"];

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub t: Vec<f64>,
    pub values: Vec<C64>,
}

impl Table {
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    /// Values of a real quantity; a nonzero imaginary column is an error.
    pub fn real_values(&self, what: &str) -> Result<Vec<f64>, RunError> {
        if let Some(i) = self.values.iter().position(|z| z.im != 0.0) {
            return Err(RunError::Config(format!("{what}: row {} has a nonzero value_im", i + 1)));
        }
        Ok(self.real_parts())
    }

    /// The times must coincide with the grid samples.
    pub fn check_grid(&self, grid: &TimeGrid, what: &str) -> Result<(), RunError> {
        if self.t.len() != grid.len() {
            return Err(RunError::Config(format!(
                "{what}: table has {} rows but the grid has {} samples",
                self.t.len(),
                grid.len()
            )));
        }
        let tol = 1e-9 * grid.horizon().max(1.0);
        for (i, (a, b)) in self.t.iter().zip(grid.times()).enumerate() {
            if (a - b).abs() > tol {
                return Err(RunError::Config(format!("{what}: row {} has t = {a}, grid expects {b}", i + 1)));
            }
        }
        Ok(())
    }
}

pub fn parse_table(text: &str, what: &str) -> Result<Table, RunError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| RunError::Config(format!("{what}: {e}")))?
        .clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(RunError::Config(format!(
            "{what}: header must be `{}`, found `{}`",
            HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut table = Table {
        t: Vec::new(),
        values: Vec::new(),
    };
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| RunError::Config(format!("{what}: row {row}: {e}")))?;
        let field = |k: usize| -> Result<f64, RunError> {
            let s = record.get(k).unwrap_or("");
            s.parse::<f64>()
                .map_err(|_| RunError::Config(format!("{what}: row {row}: cannot parse `{s}` as {}", HEADER[k])))
        };
        table.t.push(field(0)?);
        table.values.push(C64::new(field(1)?, field(2)?));
    }
    if table.t.is_empty() {
        return Err(RunError::Config(format!("{what}: table has no rows")));
    }
    Ok(table)
}

pub fn read_table(path: &Path) -> Result<Table, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("cannot read table {}: {e}", path.display())))?;
    parse_table(&text, &path.display().to_string())
}

pub fn write_table(t: &[f64], values: &[C64]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for (t, z) in t.iter().zip(values) {
        w.write_record([crate::fmt_f64(*t), crate::fmt_f64(z.re), crate::fmt_f64(z.im)])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}
