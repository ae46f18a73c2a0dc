//! On-disk state format: a self-describing JSON document carrying subsystem
//! dims, a kind tag, and the raw `[re, im]` entries (row-major for density
//! matrices). Floats are serialized in shortest round-trip form, so a
//! write/read cycle reproduces the matrix bit for bit.

use num_complex::Complex64 as C64;
use qprod::{CMatrix, CVector, DensityMatrix, PureState};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Density,
    Pure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateData {
    /// D x D grid of `[re, im]` pairs, row-major.
    Density(Vec<Vec<[f64; 2]>>),
    /// Length-D list of `[re, im]` pairs.
    Pure(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub kind: StateKind,
    pub data: StateData,
}

/// A state file parsed into a validated in-memory value.
pub enum LoadedState {
    Density(DensityMatrix),
    Pure(PureState),
}

impl LoadedState {
    /// Density-matrix view; pure states become their projectors.
    pub fn into_density(self) -> DensityMatrix {
        match self {
            LoadedState::Density(rho) => rho,
            LoadedState::Pure(psi) => psi.density(),
        }
    }
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let m = rho.matrix();
        let data = (0..d)
            .map(|i| (0..d).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        StateFile {
            dims: rho.dims().to_vec(),
            kind: StateKind::Density,
            data: StateData::Density(data),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let data = psi.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        StateFile {
            dims: psi.dims().to_vec(),
            kind: StateKind::Pure,
            data: StateData::Pure(data),
        }
    }

    /// Validate shape and contents into a state value.
    pub fn parse(&self) -> Result<LoadedState, CliError> {
        let d: usize = self.dims.iter().product();
        match (&self.kind, &self.data) {
            (StateKind::Density, StateData::Density(rows)) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(CliError::Usage(format!(
                        "density data must be a {d}x{d} grid for dims {:?}",
                        self.dims
                    )));
                }
                let matrix = CMatrix::from_fn(d, d, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
                Ok(LoadedState::Density(DensityMatrix::new(
                    self.dims.clone(),
                    matrix,
                )?))
            }
            (StateKind::Pure, StateData::Pure(amps)) => {
                if amps.len() != d {
                    return Err(CliError::Usage(format!(
                        "pure data must hold {d} amplitudes for dims {:?}",
                        self.dims
                    )));
                }
                let v = CVector::from_iterator(d, amps.iter().map(|[re, im]| C64::new(*re, *im)));
                Ok(LoadedState::Pure(PureState::new(self.dims.clone(), v)?))
            }
            _ => Err(CliError::Usage(
                "state kind does not match the shape of `data`".into(),
            )),
        }
    }

    /// JSON with one matrix row (or the amplitude vector) per line; parses
    /// back with any JSON reader and round-trips floats exactly.
    pub fn to_json(&self) -> String {
        let dims = serde_json::to_string(&self.dims).expect("dims serialize");
        let kind = match self.kind {
            StateKind::Density => "density",
            StateKind::Pure => "pure",
        };
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"dims\": {dims},\n"));
        out.push_str(&format!("  \"kind\": \"{kind}\",\n"));
        match &self.data {
            StateData::Density(rows) => {
                out.push_str("  \"data\": [\n");
                for (i, row) in rows.iter().enumerate() {
                    let line = serde_json::to_string(row).expect("row serializes");
                    let sep = if i + 1 < rows.len() { "," } else { "" };
                    out.push_str(&format!("    {line}{sep}\n"));
                }
                out.push_str("  ]\n");
            }
            StateData::Pure(amps) => {
                let line = serde_json::to_string(amps).expect("amplitudes serialize");
                out.push_str(&format!("  \"data\": {line}\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid state file: {e}")))
    }
}
