//! Snapshot CSV files: plain text, one snapshot per column, one state entry
//! per row, optional header row. Values are written with 17 significant
//! digits so a write/read cycle is lossless.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use thiserror::Error;

use crate::linalg::CMatrix;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> IoError {
    IoError::Io { path: path.to_path_buf(), message: e.to_string() }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Parses a snapshot matrix from CSV text. `source` only labels errors.
pub fn parse_snapshot_csv(text: &str, header: bool, source: &Path) -> Result<DMatrix<f64>, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            IoError::Parse { path: source.to_path_buf(), line, message: e.to_string() }
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let mut row = Vec::with_capacity(record.len());
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| IoError::Parse {
                path: source.to_path_buf(),
                line,
                message: format!("column {}: not a number: {field:?}", j + 1),
            })?;
            if !v.is_finite() {
                return Err(IoError::Parse {
                    path: source.to_path_buf(),
                    line,
                    message: format!("column {}: non-finite value {field:?}", j + 1),
                });
            }
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(IoError::Parse {
                    path: source.to_path_buf(),
                    line,
                    message: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IoError::Parse { path: source.to_path_buf(), line: 0, message: "no data rows".into() });
    }
    let cols = rows[0].len();
    Ok(DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

pub fn read_snapshot_csv(path: &Path, header: bool) -> Result<DMatrix<f64>, IoError> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| io_err(path, e))?;
    parse_snapshot_csv(&text, header, path)
}

fn write_rows(path: &Path, header: Option<Vec<String>>, rows: Vec<Vec<String>>) -> Result<(), IoError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    if let Some(h) = header {
        w.write_record(&h).map_err(|e| io_err(path, e))?;
    }
    for row in rows {
        w.write_record(&row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn snapshot_csv_string(z: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..z.nrows() {
        let row: Vec<String> = (0..z.ncols()).map(|j| format_f64(z[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes a real matrix in snapshot layout, without a header.
pub fn write_snapshot_csv(path: &Path, z: &DMatrix<f64>) -> Result<(), IoError> {
    let rows = (0..z.nrows()).map(|i| (0..z.ncols()).map(|j| format_f64(z[(i, j)])).collect()).collect();
    write_rows(path, None, rows)
}

/// Writes a complex matrix with real and imaginary parts in interleaved
/// columns `re_0, im_0, re_1, im_1, …`.
pub fn write_complex_csv(path: &Path, m: &CMatrix) -> Result<(), IoError> {
    let header = (0..m.ncols()).flat_map(|j| [format!("re_{j}"), format!("im_{j}")]).collect();
    let rows = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .flat_map(|j| [format_f64(m[(i, j)].re), format_f64(m[(i, j)].im)])
                .collect()
        })
        .collect();
    write_rows(path, Some(header), rows)
}

/// Writes a table of labelled numeric columns. `None` cells are left empty.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<Option<f64>>]) -> Result<(), IoError> {
    let header = header.iter().map(|s| s.to_string()).collect();
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|v| v.map(format_f64).unwrap_or_default()).collect())
        .collect();
    write_rows(path, Some(header), rows)
}

/// Parses a table written by [`write_table`]; empty cells become `None`.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>), IoError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let header = reader.headers().map_err(|e| io_err(path, e))?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| io_err(path, e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut row = Vec::with_capacity(record.len());
        for field in record.iter() {
            if field.is_empty() {
                row.push(None);
            } else {
                row.push(Some(field.parse().map_err(|_| IoError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("not a number: {field:?}"),
                })?));
            }
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    File::create(path).and_then(|mut f| f.write_all(text.as_bytes())).map_err(|e| io_err(path, e))
}
