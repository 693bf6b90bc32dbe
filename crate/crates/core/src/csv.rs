//! Deterministic, locale-independent CSV output.
//!
//! Values are written in scientific notation with 17 significant digits,
//! '.' as the decimal separator and '\n' line endings. A header row is
//! always present; metadata rides in '#' comment lines above it. No
//! timestamps anywhere: identical inputs produce byte-identical files.

use std::io::Write;

use crate::error::Result;
use crate::sweep::ScanResult;

/// Format a float with 17 significant digits in scientific notation.
pub fn fmt(value: f64) -> String {
    if value.is_nan() {
        return "nan".to_string();
    }
    format!("{value:.16e}")
}

/// Write a scan as CSV: comment header, column header, data rows.
pub fn write_scan<W: Write>(out: &mut W, scan: &ScanResult, comments: &[String]) -> Result<()> {
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "# git: {}", scan.git_hash)?;
    if !scan.config_echo.is_empty() {
        writeln!(out, "# config: {}", scan.config_echo)?;
    }
    let mut header = vec![scan.axis1.clone()];
    if let Some(axis2) = &scan.axis2 {
        header.push(axis2.clone());
    }
    header.extend(scan.columns.iter().cloned());
    header.push("stable".to_string());
    writeln!(out, "{}", header.join(","))?;
    for row in &scan.rows {
        let mut fields = vec![fmt(row.x1)];
        if let Some(x2) = row.x2 {
            fields.push(fmt(x2));
        }
        fields.extend(row.values.iter().map(|v| fmt(*v)));
        fields.push(if row.stable { "1" } else { "0" }.to_string());
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Write a single-row CSV (header + one data row).
pub fn write_single_row<W: Write>(out: &mut W, columns: &[&str], values: &[f64]) -> Result<()> {
    debug_assert_eq!(columns.len(), values.len());
    writeln!(out, "{}", columns.join(","))?;
    let fields: Vec<String> = values.iter().map(|v| fmt(*v)).collect();
    writeln!(out, "{}", fields.join(","))?;
    Ok(())
}
