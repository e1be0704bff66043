//! State-file parsing and the versioned output writers.
//!
//! State files hold eight complex amplitudes with the big-endian index
//! convention amp[4i+2j+k] = t^{ijk}:
//!
//! * JSON: `{"amp": [[re, im], ...8 pairs]}`
//! * CSV: one data row with 16 columns re0,im0,...,re7,im7
//!
//! CSV outputs start with the schema comment line `# triq-lab v1`; JSON
//! outputs carry a `"schema"` field.

use std::fs;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use triq_lab::state::PureState3Q;

pub const CSV_SCHEMA: &str = "# triq-lab v1";

/// Norm deviations up to this are silently renormalized; larger ones are
/// rejected.
pub const NORM_ACCEPT_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum StateFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("state in {path} has norm deviating from 1 by {deviation:.3e} (accepted up to {NORM_ACCEPT_TOL:.0e})")]
    Norm { path: String, deviation: f64 },
}

#[derive(Debug, Serialize, Deserialize)]
struct StateDto {
    amp: Vec<[f64; 2]>,
}

fn state_from_pairs(path: &str, pairs: &[[f64; 2]]) -> Result<PureState3Q, StateFileError> {
    if pairs.len() != 8 {
        return Err(StateFileError::Parse {
            path: path.to_string(),
            detail: format!("expected 8 amplitudes, found {}", pairs.len()),
        });
    }
    let mut amp = [Complex64::new(0.0, 0.0); 8];
    for (a, p) in amp.iter_mut().zip(pairs) {
        if !p[0].is_finite() || !p[1].is_finite() {
            return Err(StateFileError::Parse {
                path: path.to_string(),
                detail: "non-finite amplitude".to_string(),
            });
        }
        *a = Complex64::new(p[0], p[1]);
    }
    let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let deviation = (norm - 1.0).abs();
    if deviation > NORM_ACCEPT_TOL {
        return Err(StateFileError::Norm {
            path: path.to_string(),
            deviation,
        });
    }
    PureState3Q::from_unnormalized(amp).map_err(|e| StateFileError::Parse {
        path: path.to_string(),
        detail: e.to_string(),
    })
}

fn parse_state_json(path: &str, text: &str) -> Result<PureState3Q, StateFileError> {
    let dto: StateDto = serde_json::from_str(text).map_err(|e| StateFileError::Parse {
        path: path.to_string(),
        detail: format!("line {}, column {}: {e}", e.line(), e.column()),
    })?;
    state_from_pairs(path, &dto.amp)
}

fn parse_state_csv(path: &str, text: &str) -> Result<PureState3Q, StateFileError> {
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        // Skip a header row.
        if line.starts_with("re0") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 16 {
            return Err(StateFileError::Parse {
                path: path.to_string(),
                detail: format!(
                    "line {}: expected 16 fields, found {}",
                    lineno + 1,
                    fields.len()
                ),
            });
        }
        let mut pairs = [[0.0f64; 2]; 8];
        for (i, chunk) in fields.chunks(2).enumerate() {
            for (j, field) in chunk.iter().enumerate() {
                pairs[i][j] = field.parse().map_err(|e| StateFileError::Parse {
                    path: path.to_string(),
                    detail: format!("line {}, field {}: {e}", lineno + 1, 2 * i + j + 1),
                })?;
            }
        }
        return state_from_pairs(path, &pairs);
    }
    Err(StateFileError::Parse {
        path: path.to_string(),
        detail: "no data row found".to_string(),
    })
}

/// Read a state from a JSON or CSV file, or from stdin when `path` is "-".
/// The format is chosen by extension (.csv for CSV, JSON otherwise);
/// stdin is sniffed by its first non-space byte.
pub fn validate_state_file(path: &str) -> Result<PureState3Q, StateFileError> {
    let (text, is_csv) = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| StateFileError::Io {
                path: path.to_string(),
                source,
            })?;
        let csv = !buf.trim_start().starts_with('{');
        (buf, csv)
    } else {
        let text = fs::read_to_string(path).map_err(|source| StateFileError::Io {
            path: path.to_string(),
            source,
        })?;
        let csv = Path::new(path)
            .extension()
            .map(|e| e.eq_ignore_ascii_case("csv"))
            .unwrap_or(false);
        (text, csv)
    };
    if is_csv {
        parse_state_csv(path, &text)
    } else {
        parse_state_json(path, &text)
    }
}

pub fn state_to_json(s: &PureState3Q) -> serde_json::Value {
    let amp: Vec<[f64; 2]> = s.amp().iter().map(|a| [a.re, a.im]).collect();
    serde_json::json!({ "schema": "triq-lab/state-v1", "amp": amp })
}

pub fn state_csv_columns() -> String {
    (0..8)
        .flat_map(|i| [format!("re{i}"), format!("im{i}")])
        .collect::<Vec<_>>()
        .join(",")
}

pub fn state_csv_row(s: &PureState3Q) -> String {
    s.amp()
        .iter()
        .flat_map(|a| [a.re, a.im])
        .map(|x| format!("{x:.17e}"))
        .collect::<Vec<_>>()
        .join(",")
}
