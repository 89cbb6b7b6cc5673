//! Two-column numeric input files.

use std::fmt;

use ratioci::{Error as CoreError, PairedSample};

#[derive(Debug, Clone, PartialEq)]
pub struct DataError {
    /// 1-based line number; 0 when the problem concerns the whole file.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for DataError {}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect()
}

/// Reads `x,y` rows separated by commas and/or whitespace. Blank lines and
/// lines starting with `#` are skipped; a non-numeric first row is taken as
/// a header.
pub fn parse_pairs(text: &str) -> Result<PairedSample, DataError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut lines_of_rows = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        let cols = fields(line);
        let parsed: Option<Vec<f64>> = cols.iter().map(|c| c.parse::<f64>().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => {
                if !v[0].is_finite() || !v[1].is_finite() {
                    return Err(DataError { line: line_no, message: format!("non-finite value in '{line}'") });
                }
                xs.push(v[0]);
                ys.push(v[1]);
                lines_of_rows.push(line_no);
            }
            None if first && cols.len() == 2 => {}
            Some(v) => {
                return Err(DataError { line: line_no, message: format!("expected 2 columns, found {}", v.len()) })
            }
            None => return Err(DataError { line: line_no, message: format!("cannot parse '{line}' as two numbers") }),
        }
    }
    PairedSample::new(xs, ys).map_err(|e| match e {
        CoreError::InsufficientData { needed, got } => DataError {
            line: 0,
            message: format!("need at least {needed} data rows, found {got}"),
        },
        CoreError::NonFinite(i) => DataError { line: lines_of_rows[i], message: "non-finite value".into() },
        other => DataError { line: 0, message: other.to_string() },
    })
}
