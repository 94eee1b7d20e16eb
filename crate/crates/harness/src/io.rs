//! CSV snapshots and custom initial-condition files.

use std::fs::File;
use std::path::Path;

use reparam_core::spectral::{ComplexField, GridSpec, RealField};
use reparam_core::Complex64;

use crate::HarnessError;

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// Header plus rows of numbers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_path(path).map_err(|e| HarnessError::io(path, e))?;
        w.write_record(&self.header).map_err(|e| HarnessError::io(path, e))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&v| fmt_float(v)))
                .map_err(|e| HarnessError::io(path, e))?;
        }
        w.flush().map_err(|e| HarnessError::io(path, e))
    }
}

pub fn complex_table(f: &ComplexField) -> Table {
    let mut t = Table::new(&["x", "re", "im"]);
    for (x, z) in f.grid().positions().into_iter().zip(f.values()) {
        t.push(vec![x, z.re, z.im]);
    }
    t
}

pub fn real_table(f: &RealField) -> Table {
    let mut t = Table::new(&["x", "value"]);
    for (x, v) in f.grid().positions().into_iter().zip(f.values()) {
        t.push(vec![x, *v]);
    }
    t
}

/// Contents of a custom initial-condition file.
#[derive(Debug, Clone, PartialEq)]
pub enum CustomField {
    Complex(ComplexField),
    Real(RealField),
}

/// Reads `x,re,im` or `x,value` rows. The `x` column must match the grid.
pub fn read_custom_file(path: &Path, grid: GridSpec) -> Result<CustomField, HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| HarnessError::io(path, e))?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let complex = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["x", "re", "im"] => true,
        ["x", "value"] => false,
        _ => {
            return Err(HarnessError::io(
                path,
                format!("expected header x,re,im or x,value, got {}", header.join(",")),
            ))
        }
    };
    let positions = grid.positions();
    let mut rows = Vec::with_capacity(grid.n());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| HarnessError::io(path, e))?;
        let nums = record
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| HarnessError::io(path, format!("row {}: {e}", i + 1)))?;
        if i >= positions.len() {
            return Err(HarnessError::io(path, format!("more than n = {} rows", grid.n())));
        }
        if (nums[0] - positions[i]).abs() > 1e-9 * (1.0 + grid.length()) {
            return Err(HarnessError::io(
                path,
                format!("row {}: x = {} does not match grid point {}", i + 1, nums[0], positions[i]),
            ));
        }
        rows.push(nums);
    }
    if rows.len() != grid.n() {
        return Err(HarnessError::io(path, format!("expected {} rows, got {}", grid.n(), rows.len())));
    }
    Ok(if complex {
        CustomField::Complex(ComplexField::new(grid, rows.iter().map(|r| Complex64::new(r[1], r[2])).collect())?)
    } else {
        CustomField::Real(RealField::new(grid, rows.iter().map(|r| r[1]).collect())?)
    })
}
