//! Matrix JSON, vector JSON and dataset CSV readers plus JSON encoders for results.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pseudodet::gaussian::Dataset;
use pseudodet::matrix::{build_hermitian, BuildPolicy, CMatrix, HermitianMatrix};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::CliError;

/// `{"n": 2, "real": [[..], [..]], "imag": [[..], [..]]}`; `imag` is optional.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub real: Vec<Vec<f64>>,
    #[serde(default)]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn to_hermitian(&self, policy: BuildPolicy) -> Result<HermitianMatrix, CliError> {
        let n = self.n;
        let check = |name: &str, rows: &[Vec<f64>]| {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CliError::input(format!("'{name}' must be a {n}x{n} array")));
            }
            Ok(())
        };
        check("real", &self.real)?;
        if let Some(imag) = &self.imag {
            check("imag", imag)?;
        }
        let raw: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let im = self.imag.as_ref().map_or(0.0, |m| m[i][j]);
                        Complex64::new(self.real[i][j], im)
                    })
                    .collect()
            })
            .collect();
        build_hermitian(&raw, policy).map_err(CliError::from)
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

pub fn read_matrix(path: &Path, policy: BuildPolicy) -> Result<HermitianMatrix, CliError> {
    let file: MatrixFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    file.to_hermitian(policy)
        .map_err(|e| CliError { message: format!("{}: {}", path.display(), e.message), ..e })
}

/// A JSON array of numbers.
pub fn read_vector(path: &Path) -> Result<DVector<f64>, CliError> {
    let v: Vec<f64> = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::input(format!("{}: expected a JSON array of numbers: {e}", path.display())))?;
    if v.is_empty() {
        return Err(CliError::input(format!("{}: vector is empty", path.display())));
    }
    Ok(DVector::from_vec(v))
}

/// Headerless CSV, one sample per row.
pub fn parse_dataset(text: &str) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(format!("CSV error: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| CliError::input(format!("row {}: '{f}' is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(CliError::input(format!(
                    "row {} has {} columns, expected {}",
                    line + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    Dataset::from_rows(&rows).map_err(|e| CliError::input(format!("dataset: {e}")))
}

pub fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    parse_dataset(&read_text(path)?).map_err(|e| CliError { message: format!("{}: {}", path.display(), e.message), ..e })
}

pub fn format_csv_row(x: &DVector<f64>) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Matrix in the input file layout; `imag` is emitted only when non-zero.
pub fn complex_matrix_json(m: &CMatrix) -> Value {
    let n = m.nrows();
    let real: Vec<Vec<f64>> = (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
    if m.iter().all(|z| z.im == 0.0) {
        json!({ "n": n, "real": real })
    } else {
        let imag: Vec<Vec<f64>> = (0..n).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
        json!({ "n": n, "real": real, "imag": imag })
    }
}

pub fn hermitian_json(m: &HermitianMatrix) -> Value {
    complex_matrix_json(m.as_matrix())
}

pub fn real_matrix_json(m: &DMatrix<f64>) -> Value {
    let real: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
    json!({ "n": m.nrows(), "real": real })
}
