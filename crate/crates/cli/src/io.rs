//! Single- and multi-column CSV reading and writing.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{CliError, Result};

/// Reads one real number per line. A first line that does not parse as a
/// number is treated as a header and skipped.
pub fn read_column(path: &Path) -> Result<Vec<f64>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file);
    let mut values = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => CliError::io(path, e.into()),
            _ => CliError::Parse {
                path: path.into(),
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            },
        })?;
        let line = record.position().map_or(k as u64 + 1, |p| p.line());
        if record.len() != 1 {
            return Err(CliError::Parse {
                path: path.into(),
                line,
                message: format!("expected one value, found {} fields", record.len()),
            });
        }
        let field = record[0].trim();
        match field.parse::<f64>() {
            Ok(x) if x.is_nan() => {
                return Err(CliError::Parse {
                    path: path.into(),
                    line,
                    message: "NaN is not a valid entry".into(),
                })
            }
            Ok(x) => values.push(x),
            Err(_) if k == 0 => {}
            Err(_) => {
                return Err(CliError::Parse {
                    path: path.into(),
                    line,
                    message: format!("cannot parse {field:?} as a number"),
                })
            }
        }
    }
    Ok(values)
}

/// Writes one value per line with shortest round-trip formatting.
pub fn write_column(path: &Path, values: &[f64]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for x in values {
        writeln!(out, "{x}").map_err(|e| CliError::io(path, e))?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

/// Writes a header and rows of already formatted fields.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let csv_err = |e: csv::Error| CliError::io(path, e.into());
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    writer.write_record(header).map_err(csv_err)?;
    for row in rows {
        writer.write_record(row).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}
