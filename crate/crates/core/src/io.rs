//! JSON parameter files: `{"n": 2, "m": 4, "neurons": [{"p": [...], "theta": .., "gamma": ..}]}`.
//!
//! Floats are written in shortest round-trip form, so `load(save(params))`
//! reproduces every bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HjError, Result};
use crate::network::{Neuron, NetworkParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsFile {
    pub n: usize,
    pub m: usize,
    pub neurons: Vec<Neuron>,
}

impl ParamsFile {
    pub fn from_params(params: &NetworkParams) -> Self {
        ParamsFile {
            n: params.dim(),
            m: params.len(),
            neurons: params.neurons(),
        }
    }

    pub fn into_params(self) -> Result<NetworkParams> {
        if self.m != self.neurons.len() {
            return Err(HjError::invalid(format!(
                "m = {} but {} neurons listed",
                self.m,
                self.neurons.len()
            )));
        }
        NetworkParams::new(self.n, &self.neurons)
    }
}

pub fn params_from_json(text: &str) -> Result<NetworkParams> {
    let file: ParamsFile =
        serde_json::from_str(text).map_err(|e| HjError::invalid(format!("parameter file: {e}")))?;
    file.into_params()
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn params_to_json(params: &NetworkParams) -> String {
    let mut s = serde_json::to_string_pretty(&ParamsFile::from_params(params))
        .expect("parameter serialization cannot fail");
    s.push('\n');
    s
}

pub fn load_params(path: impl AsRef<Path>) -> Result<NetworkParams> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| HjError::invalid(format!("cannot read {}: {e}", path.display())))?;
    params_from_json(&text)
}

pub fn save_params(params: &NetworkParams, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, params_to_json(params))
        .map_err(|e| HjError::invalid(format!("cannot write {}: {e}", path.display())))
}
