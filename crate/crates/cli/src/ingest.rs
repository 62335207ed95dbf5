//! Signal files.

use std::path::Path;

use qcorr_core::SignalWindow;

use crate::args::SignalFormat;
use crate::error::CliError;

fn finite(values: Vec<f64>, lines: Option<&[u64]>, path: &Path) -> Result<Vec<f64>, CliError> {
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        let at = match lines {
            Some(l) => format!(" (line {})", l[i]),
            None => String::new(),
        };
        return Err(CliError::data(format!(
            "{}: sample {i}{at} is not finite: {}",
            path.display(),
            values[i]
        )));
    }
    if values.is_empty() {
        return Err(CliError::data(format!("{}: no samples", path.display())));
    }
    Ok(values)
}

/// One value per line. A non-numeric first line is taken as a header.
pub fn parse_csv(bytes: &[u8], path: &Path) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        if rec.len() != 1 {
            return Err(CliError::data(format!(
                "{}: line {line}: expected one column, found {}",
                path.display(),
                rec.len()
            )));
        }
        let field = &rec[0];
        match field.parse::<f64>() {
            Ok(v) => {
                values.push(v);
                lines.push(line);
            }
            Err(_) if line == 1 => {}
            Err(_) => {
                return Err(CliError::data(format!(
                    "{}: line {line}: cannot parse '{field}' as a number",
                    path.display()
                )))
            }
        }
    }
    finite(values, Some(&lines), path)
}

pub fn parse_raw(bytes: &[u8], path: &Path) -> Result<Vec<f64>, CliError> {
    if bytes.len() % 8 != 0 {
        return Err(CliError::data(format!(
            "{}: {} bytes is not a whole number of 64-bit floats",
            path.display(),
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    finite(values, None, path)
}

pub fn ingest_signal(path: &Path, format: SignalFormat) -> Result<SignalWindow, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    Ok(SignalWindow::new(parse_signal(&bytes, path, format)?, 0)?)
}

/// Parses file contents; `path` only labels error messages.
pub fn parse_signal(bytes: &[u8], path: &Path, format: SignalFormat) -> Result<Vec<f64>, CliError> {
    match format {
        SignalFormat::Csv => parse_csv(bytes, path),
        SignalFormat::Raw => parse_raw(bytes, path),
    }
}

pub fn encode_signal(values: &[f64], format: SignalFormat) -> Vec<u8> {
    match format {
        SignalFormat::Csv => {
            let mut s = String::from("value\n");
            for v in values {
                s.push_str(&format!("{v}\n"));
            }
            s.into_bytes()
        }
        SignalFormat::Raw => values.iter().flat_map(|v| v.to_le_bytes()).collect(),
    }
}
