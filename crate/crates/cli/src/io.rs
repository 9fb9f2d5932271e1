use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use debranges::{Complex64, HermiteBiehlerFunction, KernelCombination};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path, field: &str) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{field} {}: {e}", path.display())))
}

pub fn read_hb(path: &Path, field: &str) -> CliResult<HermiteBiehlerFunction> {
    let text = read_text(path, field)?;
    HermiteBiehlerFunction::from_json(&text).map_err(|e| CliError::Input(format!("{field} {}: {e}", path.display())))
}

/// `{"centers": [[re, im], ...], "coefficients": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CombinationSpec {
    pub centers: Vec<[f64; 2]>,
    pub coefficients: Vec<[f64; 2]>,
}

impl CombinationSpec {
    pub fn from_combination(f: &KernelCombination) -> Self {
        let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
        CombinationSpec {
            centers: pairs(f.centers()),
            coefficients: pairs(f.coefficients()),
        }
    }
}

pub fn read_combination(path: &Path, e: &HermiteBiehlerFunction) -> CliResult<KernelCombination> {
    let text = read_text(path, "--ref")?;
    let spec: CombinationSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("--ref {}: {e}", path.display())))?;
    let to_c = |v: &[[f64; 2]]| v.iter().map(|p| Complex64::new(p[0], p[1])).collect::<Vec<_>>();
    KernelCombination::new(e.clone(), to_c(&spec.centers), to_c(&spec.coefficients))
        .map_err(|err| CliError::Input(format!("--ref {}: {err}", path.display())))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleRow {
    pub n: i64,
    pub lambda: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StreamRow {
    pub n: i64,
    pub lambda: f64,
    pub m_re: f64,
    pub m_im: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct NodeRow {
    pub n: i64,
    pub lambda: f64,
    pub residual: f64,
}

/// Reads a sample CSV; indices must be consecutive.
pub fn read_samples(path: &Path) -> CliResult<Vec<SampleRow>> {
    let bad = |msg: String| CliError::Input(format!("--samples {}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| bad(e.to_string()))?;
    let mut rows: Vec<SampleRow> = Vec::new();
    for (line, record) in reader.deserialize().enumerate() {
        let row: SampleRow = record.map_err(|e| bad(e.to_string()))?;
        if let Some(prev) = rows.last() {
            if row.n != prev.n + 1 {
                return Err(bad(format!("row {}: index n = {} does not follow {}", line + 1, row.n, prev.n)));
            }
        }
        if !(row.lambda.is_finite() && row.re.is_finite() && row.im.is_finite()) {
            return Err(bad(format!("row {}: non-finite value", line + 1)));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("no sample rows".into()));
    }
    Ok(rows)
}

pub fn csv_string<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| CliError::Input(format!("csv output: {e}")))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Input(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&PathBuf>, field: &str, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{field} {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Input(format!("stdout: {e}")))
        }
    }
}
