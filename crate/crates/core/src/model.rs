//! Versioned JSON model files.
//!
//! ```json
//! { "format": "setforest-model", "version": 1, "method": "RF GreedyMask",
//!   "pipeline": { "encoder": ..., "chain": ... },
//!   "forest": { "kind": "random_forest", "initial_score": 0.0, "trees": [...] } }
//! ```
//!
//! Trees are nested `{"node": "internal", "condition": {...}, "negative": ...,
//! "positive": ...}` / `{"node": "leaf", "value": ...}` objects; set masks
//! are sorted term-id arrays.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::RawDataset;
use crate::error::{Error, Result};
use crate::pipeline::Pipeline;
use crate::tree::DecisionForest;

pub const MODEL_FORMAT: &str = "setforest-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub format: String,
    pub version: u32,
    pub method: String,
    pub pipeline: Pipeline,
    pub forest: DecisionForest,
}

impl Model {
    pub fn new(method: String, pipeline: Pipeline, forest: DecisionForest) -> Self {
        Model {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            method,
            pipeline,
            forest,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Model = serde_json::from_str(text)?;
        if model.format != MODEL_FORMAT {
            return Err(Error::Model(format!(
                "unexpected format `{}`",
                model.format
            )));
        }
        if model.version != MODEL_VERSION {
            return Err(Error::Model(format!(
                "unsupported model version {}",
                model.version
            )));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Encodes, transforms and scores raw rows top-down.
    pub fn predict_raw(&self, raw: &RawDataset) -> Result<Vec<f64>> {
        let data = self.pipeline.apply(raw)?;
        self.forest.check_schema(data.schema())?;
        Ok((0..data.len())
            .map(|e| self.forest.predict(&data.row(e)))
            .collect())
    }
}
