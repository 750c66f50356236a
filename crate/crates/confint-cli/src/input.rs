//! Data-file parsing: one numeric value per line.

use std::path::Path;

use crate::CliError;

/// Reads a sample from a text file: one value per line, blank lines
/// skipped, `#` starts a comment line, both `\n` and `\r\n` endings
/// accepted. Errors name the offending line.
pub fn read_values(path: &Path) -> Result<Vec<f64>, CliError> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            CliError::Input(format!(
                "{}:{}: not a number: {line:?}",
                path.display(),
                idx + 1
            ))
        })?;
        if !value.is_finite() {
            return Err(CliError::Input(format!(
                "{}:{}: non-finite value {value}",
                path.display(),
                idx + 1
            )));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no data values found",
            path.display()
        )));
    }
    Ok(values)
}
