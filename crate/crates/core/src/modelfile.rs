//! TOML model files.
//!
//! ```toml
//! sites = 4
//! beta = 0.7
//! topology = "open-chain"   # open-chain | closed-chain | bethe | square-2d | cubic-3d | general
//! bonds = [[0, 1, 1.0], [1, 2, 1.0], [2, 3, 1.0]]
//! fields = [0.0, 0.0, 0.0, 0.0]    # optional, defaults to zero
//! plaquettes = [[0, 1, 5, 4]]      # optional, loop site orders for lattice assembly
//! ```
//!
//! Sites are numbered from 0. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{Bond, IsingModel, Topology};

/// On-disk representation of an [`IsingModel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub sites: usize,
    pub beta: f64,
    pub topology: Topology,
    #[serde(default)]
    pub bonds: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub plaquettes: Vec<Vec<usize>>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ModelFile(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::ModelFile(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::ModelFile(msg) => Error::ModelFile(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("model files always serialise")
    }

    pub fn from_model(model: &IsingModel) -> Self {
        ModelFile {
            sites: model.num_sites(),
            beta: model.beta(),
            topology: model.topology(),
            bonds: model.bonds().iter().map(|b| (b.i, b.j, b.coupling)).collect(),
            fields: if model.has_fields() {
                model.fields().to_vec()
            } else {
                vec![]
            },
            plaquettes: vec![],
        }
    }

    /// Validated model; field-level problems are reported as model-file errors.
    pub fn to_model(&self) -> Result<IsingModel> {
        let bonds = self.bonds.iter().map(|&(i, j, g)| Bond::new(i, j, g)).collect();
        IsingModel::new(self.sites, bonds, self.fields.clone(), self.beta, self.topology).map_err(|e| match e {
            Error::Argument(msg) => Error::ModelFile(msg),
            other => other,
        })
    }
}
