//! Wire formats and argument parsing.
//!
//! Complex numbers travel as `[re, im]` JSON pairs. Matrices use
//! `{"dim": n, "entries": [[re, im], ...]}` in row-major order; states use
//! `{"dim": n, "amplitudes": [[re, im], ...]}`. Floats are written in the
//! shortest form that round-trips to the same `f64`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState};

/// Negative zero is written as zero.
fn pair(z: C64) -> [f64; 2] {
    [z.re + 0.0, z.im + 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            entries: m.entries().iter().map(|&z| pair(z)).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        let entries = m
            .entries
            .into_iter()
            .map(|[re, im]| C64::new(re, im))
            .collect();
        ComplexMatrix::from_row_major(m.dim, entries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for StateJson {
    fn from(s: &PureState) -> Self {
        Self {
            dim: s.dim(),
            amplitudes: s.amplitudes().iter().map(|&z| pair(z)).collect(),
        }
    }
}

pub fn complex_pair(z: C64) -> [f64; 2] {
    pair(z)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrix serializes")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let m: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad matrix JSON: {e}")))?;
    m.try_into()
}

/// `re+imi`, e.g. `0.5-0.25i`.
pub fn complex_to_csv(z: C64) -> String {
    let [re, im] = pair(z);
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{re}{sign}{}i", im.abs())
}

/// One matrix row per line, entries separated by commas.
pub fn matrix_to_csv(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = m.row(i).iter().map(|&z| complex_to_csv(z)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parses `a+bi`, `a-bi`, `bi`, or a plain real number.
pub fn parse_complex(s: &str) -> Result<C64> {
    let trimmed = s.trim();
    let z: C64 = trimmed
        .replace(' ', "")
        .parse()
        .map_err(|_| Error::Invalid(format!("cannot parse complex number '{s}'")))?;
    if !z.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(z)
}

/// Parses an angle in radians: a number, or a multiple of π such as `pi`,
/// `-pi/2`, `pi/4`, `3pi/4`, `2*pi`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let text = s.trim().to_ascii_lowercase();
    let bad = || Error::Invalid(format!("cannot parse angle '{s}'"));
    if let Ok(x) = text.parse::<f64>() {
        return if x.is_finite() {
            Ok(x)
        } else {
            Err(Error::NonFinite)
        };
    }
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (text.as_str(), 1.0),
    };
    let coeff_text = numer
        .trim()
        .strip_suffix("pi")
        .ok_or_else(bad)?
        .trim_end_matches('*')
        .trim();
    let coeff = match coeff_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let value = coeff * PI / denom;
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoefficientFile {
    Pairs(Vec<[f64; 2]>),
    State { amplitudes: Vec<[f64; 2]> },
}

/// Coefficient files hold either a bare `[[re, im], ...]` array or a state
/// object with an `amplitudes` field.
pub fn parse_coefficients(text: &str) -> Result<Vec<C64>> {
    let file: CoefficientFile = serde_json::from_str(text)
        .map_err(|e| Error::Invalid(format!("malformed coefficient file: {e}")))?;
    let pairs = match file {
        CoefficientFile::Pairs(p) => p,
        CoefficientFile::State { amplitudes } => amplitudes,
    };
    if pairs.is_empty() {
        return Err(Error::Invalid("coefficient file is empty".into()));
    }
    let coeffs: Vec<C64> = pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect();
    if coeffs.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(coeffs)
}
