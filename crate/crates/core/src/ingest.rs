//! Reading `x,y` point files.

use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: non-finite value")]
    NonFiniteValue { line: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Parses one point per line as `x,y`. Blank lines and lines starting with
/// `#` are skipped. Line numbers in errors are 1-based.
pub fn parse_points(text: &str) -> Result<Vec<(f64, f64)>, IngestError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let parse_error = |message: String| IngestError::Parse { line, message };
        let (xs, ys) = s
            .split_once(',')
            .ok_or_else(|| parse_error(format!("expected `x,y`, got `{s}`")))?;
        let value = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| parse_error(format!("`{}` is not a number", t.trim())))
        };
        let (x, y) = (value(xs)?, value(ys)?);
        if !x.is_finite() || !y.is_finite() {
            return Err(IngestError::NonFiniteValue { line });
        }
        points.push((x, y));
    }
    Ok(points)
}

pub fn read_points(path: &Path) -> Result<Vec<(f64, f64)>, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_points(&text)
}

/// Formats points as `x,y` lines, with full round-trip precision.
pub fn format_points(points: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(points.len() * 40);
    for (x, y) in points {
        out.push_str(&format!("{x:?},{y:?}\n"));
    }
    out
}
