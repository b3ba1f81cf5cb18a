use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::CliError;

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>, CliError> {
    Ok(match &out.out {
        Some(path) => Box::new(File::create(path).map_err(|e| CliError::Io(path.display().to_string(), e))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io("output".into(), io::Error::other(e.to_string()))
}

/// Rows as CSV (header from the field names) or as a JSON array.
pub fn emit_rows<T: Serialize>(out: &OutputArgs, default: Format, rows: &[T]) -> Result<(), CliError> {
    let mut w = sink(out)?;
    match out.format.unwrap_or(default) {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            for r in rows {
                csv.serialize(r).map_err(io_err)?;
            }
            csv.flush().map_err(io_err)?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows).map_err(io_err)?;
            writeln!(w).map_err(io_err)?;
        }
    }
    Ok(())
}

/// A single JSON document, or `csv_rows` when CSV is requested.
pub fn emit_object<T: Serialize, R: Serialize>(
    out: &OutputArgs,
    default: Format,
    object: &T,
    csv_rows: &[R],
) -> Result<(), CliError> {
    match out.format.unwrap_or(default) {
        Format::Csv => emit_rows(out, Format::Csv, csv_rows),
        Format::Json => {
            let mut w = sink(out)?;
            serde_json::to_writer_pretty(&mut w, object).map_err(io_err)?;
            writeln!(w).map_err(io_err)?;
            Ok(())
        }
    }
}
