//! CSV input and output.
//!
//! Input files are numeric matrices with one observation per row; a single
//! leading header row is skipped when its first field does not parse as a
//! number. Output floats use Rust's shortest round-trip formatting, so a
//! written value parses back bit-identically.

use crate::error::{CliError, CliResult};
use boundkde::SampleSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Read a sample from a CSV file, validating every coordinate into [0, 1].
pub fn read_csv(path: &Path) -> CliResult<SampleSet> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Data(format!("cannot read {}: {e}", path.display()))
    })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line_1 = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, usize> = fields
            .iter()
            .enumerate()
            .map(|(col, f)| f.parse::<f64>().map_err(|_| col + 1))
            .collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_col) if lineno == 0 => continue, // header row
            Err(col) => {
                return Err(CliError::Data(format!(
                    "parse error at line {line_1}, column {col}"
                )));
            }
        };
        match dim {
            None => dim = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(CliError::Data(format!(
                    "parse error at line {line_1}: expected {d} columns, got {}",
                    values.len()
                )));
            }
            _ => {}
        }
        for (col, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::Data(format!(
                    "value {v} out of domain [0, 1] at line {line_1}, column {}",
                    col + 1
                )));
            }
        }
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(CliError::Data("no data rows in input file".into()));
    }
    SampleSet::from_rows(&rows).map_err(CliError::from)
}

/// Shortest round-trip decimal form of a float.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Render a CSV table (header plus numeric rows).
pub fn render_csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            let _ = write!(out, "{v}");
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Write text to a file, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            CliError::Data(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_plain_columns() {
        let f = tmp("0.1\n0.2\n");
        let s = read_csv(f.path()).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.len(), 2);
        assert_eq!(s.coord(0, 0), 0.1);
        assert_eq!(s.coord(1, 0), 0.2);
    }

    #[test]
    fn skips_a_header_row() {
        let f = tmp("x,y\n0.5,0.5\n");
        let s = read_csv(f.path()).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn reports_out_of_domain_position() {
        let f = tmp("1.5\n");
        let err = read_csv(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1, column 1"), "{msg}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn reports_parse_error_line() {
        let f = tmp("0.5\nabc\n");
        let err = read_csv(f.path()).unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn rejects_ragged_rows_and_missing_files() {
        let f = tmp("0.5,0.5\n0.1\n");
        assert!(read_csv(f.path()).is_err());
        let err = read_csv(Path::new("/nonexistent/file.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn float_formatting_round_trips() {
        for &v in &[0.1, 1.0 / 3.0, 0.049787068367863944, 1e-17, 123456.789] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
