//! CSV field export and boundary-table import.

use crate::CliError;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use typechange::tricomi::{BoundaryPhi, PhiTable};

/// One grid node of an exported field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldRow {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub region: &'static str,
    pub operator: &'static str,
}

/// Writes `rows` under the `x,y,u,ux,uy,region,operator` header, taken from
/// the field names of [`FieldRow`]. Floats go out in shortest round-trip form.
pub fn write_field_csv(path: &Path, rows: &[FieldRow]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let file = File::create(path).map_err(io)?;
    let mut out = csv::Writer::from_writer(BufWriter::new(file));
    if rows.is_empty() {
        out.write_record(["x", "y", "u", "ux", "uy", "region", "operator"])
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    for row in rows {
        out.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    out.flush().map_err(io)
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(io)?;
    out.flush().map_err(io)
}

/// Two-column `theta,phi` table. Rows whose first cell is not a number
/// (a header, say) are skipped.
pub fn read_phi_table(path: &Path) -> Result<BoundaryPhi, CliError> {
    let usage = |msg: String| CliError::Usage { flag: "--phi", msg };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let (mut thetas, mut values) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let Some(Ok(theta)) = record.get(0).map(str::parse::<f64>) else {
            continue;
        };
        let phi = record
            .get(1)
            .and_then(|c| c.parse::<f64>().ok())
            .ok_or_else(|| usage(format!("{}: row {} has no numeric phi column", path.display(), line + 1)))?;
        thetas.push(theta);
        values.push(phi);
    }
    PhiTable::new(thetas, values)
        .map(BoundaryPhi::Table)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}
