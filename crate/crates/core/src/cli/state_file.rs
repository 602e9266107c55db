//! JSON state files: `{"dim": d, "re": [[...]], "im": [[...]]}` where `re`
//! and `im` are `d² × d²` row-major arrays of the real and imaginary parts.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::DensityState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(state: &DensityState) -> Self {
        let m = state.matrix();
        let part = |f: fn(C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| f(m[(r, c)])).collect())
                .collect()
        };
        Self {
            dim: state.dim(),
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    /// Checks shapes and builds the matrix; the state itself is not validated.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.re.len();
        if n == 0 || self.re.iter().any(|row| row.len() != n) {
            return Err(Error::Parse(format!(
                "field \"re\" must be a non-empty square array, got {n} rows of lengths {:?}",
                self.re.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        if self.im.len() != n || self.im.iter().any(|row| row.len() != n) {
            return Err(Error::Parse(format!(
                "field \"im\" must match \"re\" ({n}x{n}), got {} rows of lengths {:?}",
                self.im.len(),
                self.im.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        if self.dim < 2 || self.dim.checked_mul(self.dim) != Some(n) {
            return Err(Error::Dimension(format!(
                "\"dim\" = {} needs {}x{} arrays (d >= 2), got {n}x{n}",
                self.dim,
                self.dim.saturating_mul(self.dim),
                self.dim.saturating_mul(self.dim)
            )));
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .flat_map(|(r, i)| r.iter().zip(i).map(|(&x, &y)| C64::new(x, y)))
            .collect();
        ComplexMatrix::from_row_major(n, n, data)
    }
}

/// Parses and validates a state. With `allow_unphysical` the validation
/// record is attached but not enforced.
pub fn parse_state_str(text: &str, allow_unphysical: bool) -> Result<DensityState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let m = file.to_matrix()?;
    if allow_unphysical {
        DensityState::unchecked(file.dim, m)
    } else {
        DensityState::new(file.dim, m)
    }
}

pub fn parse_state_file(path: &Path, allow_unphysical: bool) -> Result<DensityState> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state_str(&text, allow_unphysical)
}

pub fn write_state_string(state: &DensityState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).expect("state file serializes")
}

pub fn write_state_file(state: &DensityState, path: &Path) -> Result<()> {
    std::fs::write(path, write_state_string(state) + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
