//! Single-column CSV ingestion.

use std::path::Path;

use crate::error::{CliError, CliResult};

/// Parses one numeric column. A non-numeric first cell is taken as a header;
/// any later non-numeric or non-finite cell is an error naming its line.
pub fn parse_dataset(text: &str) -> CliResult<Vec<f64>> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(format!("malformed CSV: {e}")))?;
        let line = record.position().map_or(i as u64 + 1, |p| p.line());
        if record.len() != 1 {
            return Err(CliError::input(format!("line {line}: expected one column, found {}", record.len())));
        }
        let cell = &record[0];
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => return Err(CliError::input(format!("line {line}: value {v} is not finite"))),
            Err(_) if i == 0 => {}
            Err(_) => return Err(CliError::input(format!("line {line}: `{cell}` is not a number"))),
        }
    }
    if values.is_empty() {
        return Err(CliError::input("data file contains no observations"));
    }
    Ok(values)
}

pub fn read_dataset(path: &Path) -> CliResult<(Vec<f64>, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let text =
        std::str::from_utf8(&bytes).map_err(|_| CliError::input(format!("{}: not valid UTF-8", path.display())))?;
    Ok((parse_dataset(text)?, bytes))
}
