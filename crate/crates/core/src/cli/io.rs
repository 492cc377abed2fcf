//! JSON file formats read and written by the command-line tool.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::spectral::SpectralState;

/// `{"rows": r, "cols": c, "data": [...]}` with `data` in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<Matrix<f64>, Error> {
        Matrix::new(self.rows, self.cols, self.data)
    }
}

impl From<&Matrix<f64>> for MatrixFile {
    fn from(m: &Matrix<f64>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.as_slice().to_vec(),
        }
    }
}

/// `{"lambda": [...]}`; other keys (as written by `state`) are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub lambda: Vec<f64>,
}

/// Entries down to this value are rounding noise and clamp to zero.
pub const NEGATIVE_CLAMP: f64 = -1e-15;
/// Largest sum deviation repaired by renormalisation.
pub const RENORMALISE_LIMIT: f64 = 1e-9;

/// A loaded state plus any repair that was applied on the way in.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedState {
    pub state: SpectralState<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Invalid { path: String, source: Error },
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, InputError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| InputError::Read {
        path: shown.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json {
        path: shown,
        source,
    })
}

pub fn load_matrix(path: &Path) -> Result<Matrix<f64>, InputError> {
    let file: MatrixFile = read_json(path)?;
    file.into_matrix().map_err(|source| InputError::Invalid {
        path: path.display().to_string(),
        source,
    })
}

/// Validates raw coordinates, clamping rounding-level negatives and
/// renormalising sums that are off by at most [`RENORMALISE_LIMIT`].
pub fn repair_state(mut lambda: Vec<f64>) -> Result<LoadedState, Error> {
    let mut warnings = Vec::new();
    if let Some(i) = lambda.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidState(format!("coordinate {i} is not finite")));
    }
    if let Some(i) = lambda.iter().position(|&x| x < NEGATIVE_CLAMP) {
        return Err(Error::InvalidState(format!(
            "coordinate {i} is negative ({})",
            lambda[i]
        )));
    }
    let mut clamped = 0;
    for x in lambda.iter_mut().filter(|x| **x < 0.0) {
        *x = 0.0;
        clamped += 1;
    }
    if clamped > 0 {
        warnings.push(format!(
            "clamped {clamped} rounding-level negative coordinate(s) to 0"
        ));
    }
    let sum: f64 = lambda.iter().sum();
    let deviation = (sum - 1.0).abs();
    if deviation > RENORMALISE_LIMIT {
        return Err(Error::InvalidState(format!(
            "coordinates sum to {sum}, more than {RENORMALISE_LIMIT:e} away from 1"
        )));
    }
    if deviation > <f64 as Scalar>::SIMPLEX_TOL {
        lambda.iter_mut().for_each(|x| *x /= sum);
        warnings.push(format!("renormalised coordinates (sum was {sum})"));
    }
    Ok(LoadedState {
        state: SpectralState::new(lambda)?,
        warnings,
    })
}

pub fn load_state(path: &Path) -> Result<LoadedState, InputError> {
    let file: StateFile = read_json(path)?;
    repair_state(file.lambda).map_err(|source| InputError::Invalid {
        path: path.display().to_string(),
        source,
    })
}
