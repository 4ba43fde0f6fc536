//! Deterministic file emission: CSV with 17 significant digits and LF line
//! endings, JSON with sorted keys.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qcf_core::OperatorMatrix;

/// 17 significant digits round-trips every f64 exactly.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter {
    inner: BufWriter<File>,
    path: PathBuf,
}

impl CsvWriter {
    pub fn create(path: &Path, header: &str) -> std::io::Result<Self> {
        let mut inner = BufWriter::new(File::create(path)?);
        inner.write_all(header.as_bytes())?;
        inner.write_all(b"\n")?;
        Ok(Self { inner, path: path.to_owned() })
    }

    /// One row; numeric cells are formatted, verbatim cells pass through.
    pub fn row(&mut self, cells: &[Cell]) -> std::io::Result<()> {
        let rendered: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Num(x) => fmt(*x),
                Cell::Bool(b) => b.to_string(),
                Cell::Text(s) => s.to_string(),
            })
            .collect();
        self.inner.write_all(rendered.join(",").as_bytes())?;
        self.inner.write_all(b"\n")
    }

    pub fn finish(mut self) -> std::io::Result<PathBuf> {
        self.inner.flush()?;
        Ok(self.path)
    }
}

pub enum Cell {
    Num(f64),
    Bool(bool),
    Text(&'static str),
}

/// serde_json's default map is ordered, so keys come out sorted.
pub fn write_json(path: &Path, value: &serde_json::Value) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()
}

/// A complex matrix as nested [re, im] pairs, row-major.
pub fn matrix_json(m: &OperatorMatrix) -> serde_json::Value {
    let d = m.dim();
    let rows: Vec<serde_json::Value> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let Complex64 { re, im } = m.get(i, j);
                    serde_json::json!([re, im])
                })
                .collect()
        })
        .collect();
    serde_json::Value::Array(rows)
}
