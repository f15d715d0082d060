//! Observation files: plain text, one decimal number per line, no header.
//! Blank lines (including a trailing newline) are ignored.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum DataError {
    Empty,
    BadLine { line: usize, content: String },
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataError::Empty => write!(f, "data file contains no observations"),
            DataError::BadLine { line, content } => {
                write!(
                    f,
                    "line {line}: expected a decimal number, found {content:?}"
                )
            }
        }
    }
}

impl std::error::Error for DataError {}

pub fn parse_observations(text: &str) -> Result<Vec<f64>, DataError> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                return Err(DataError::BadLine {
                    line: i + 1,
                    content: trimmed.to_owned(),
                });
            }
        }
    }
    if values.is_empty() {
        return Err(DataError::Empty);
    }
    Ok(values)
}

/// Sample size, mean, residual sum of squares `q = Σ(Yᵢ - Ȳ)²` and the
/// maximum-likelihood scale `S = √(q/n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    pub q: f64,
    pub s: f64,
}

impl SampleSummary {
    pub fn from_observations(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let q = values.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>();
        SampleSummary {
            n,
            mean,
            q,
            s: (q / n as f64).sqrt(),
        }
    }
}
