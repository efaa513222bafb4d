//! The JSON chain file: a chain, optionally with a cocone over it.
//!
//! ```json
//! {
//!   "category": "contraction",
//!   "prefix_dims": [1],
//!   "prefix_maps": [],
//!   "tail": { "kind": "scalar_geometric", "ratio": [0.5, 0.0] },
//!   "cocone": {
//!     "target_dim": 1,
//!     "prefix_components": [],
//!     "tail": { "kind": "scaled_identity", "scale": [1.0, 0.0], "ratio": [2.0, 0.0] },
//!     "category": "bounded"
//!   }
//! }
//! ```
//!
//! Matrices are lists of rows, and complex entries are `[re, im]`.

use std::path::Path;

use hilbert_colim::chain::{FamilyTail, OmegaChain, StageFamily, TailRule};
use hilbert_colim::colimit::Cocone;
use hilbert_colim::linalg::{Operator, OperatorKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub category: OperatorKind,
    pub prefix_dims: Vec<usize>,
    pub prefix_maps: Vec<Operator>,
    pub tail: TailRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocone: Option<CoconeFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoconeFile {
    pub target_dim: usize,
    #[serde(default)]
    pub prefix_components: Vec<Operator>,
    pub tail: FamilyTail,
    #[serde(default = "bounded")]
    pub category: OperatorKind,
}

fn bounded() -> OperatorKind {
    OperatorKind::Bounded
}

impl ChainFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(CliError::Parse)
    }

    pub fn from_chain(chain: &OmegaChain) -> Self {
        Self {
            category: chain.category(),
            prefix_dims: chain.prefix_dims().to_vec(),
            prefix_maps: chain.prefix_maps().to_vec(),
            tail: chain.tail().clone(),
            cocone: None,
        }
    }

    /// Builds and validates the chain against its declared category.
    pub fn chain(&self) -> Result<OmegaChain, CliError> {
        Ok(OmegaChain::new(
            self.prefix_dims.clone(),
            self.prefix_maps.clone(),
            self.tail.clone(),
            self.category,
        )?)
    }

    pub fn cocone(&self) -> Result<Cocone, CliError> {
        let c = self.cocone.as_ref().ok_or(CliError::MissingCocone)?;
        let family = StageFamily::new(c.prefix_components.clone(), c.tail.clone())?;
        Ok(Cocone::new(
            self.chain()?,
            c.target_dim,
            family,
            c.category,
        )?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("chain files serialize");
        s.push('\n');
        s
    }
}
