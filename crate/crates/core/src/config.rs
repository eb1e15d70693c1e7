//! Run configuration files (TOML).
//!
//! ```toml
//! output_dir = "runs/planted"
//!
//! [data]
//! path = "../data/planted.tsv"
//! format = "text"            # "text" (<label>\t<text>) or "csv"
//!
//! [method]
//! algorithm = "random_forest" # or "mart"
//! transforms = []             # e.g. ["maxhash", "targetmean"]
//!
//! [train]                     # overrides of the algorithm defaults
//! num_trees = 100
//!
//! [vocabulary]
//! max_size = 5000
//! min_frequency = 5
//!
//! [evaluation]
//! folds = 5
//! seed = 1
//! ```
//!
//! Relative paths are resolved against the directory holding the file.
//! Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::{load_csv, load_text_corpus, CsvSchema};
use crate::dataset::{RawDataset, VocabularyConfig};
use crate::error::{Error, Result};
use crate::evaluation::EvaluationConfig;
use crate::pipeline::MethodSpec;
use crate::train::{FeatureSampling, TrainConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    /// `<label>\t<text>` lines.
    Text,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub path: PathBuf,
    #[serde(default = "DataConfig::default_format")]
    pub format: DataFormat,
    /// Column layout, required for CSV input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<CsvSchema>,
}

impl DataConfig {
    fn default_format() -> DataFormat {
        DataFormat::Text
    }

    pub fn load(&self) -> Result<RawDataset> {
        load_data(&self.path, self.format, self.csv.as_ref())
    }
}

pub fn load_data(path: &Path, format: DataFormat, csv: Option<&CsvSchema>) -> Result<RawDataset> {
    match format {
        DataFormat::Text => load_text_corpus(path),
        DataFormat::Csv => {
            let schema =
                csv.ok_or_else(|| Error::Config("CSV data needs a [data.csv] schema".into()))?;
            load_csv(path, schema)
        }
    }
}

/// Optional overrides of [`TrainConfig::defaults_for`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_trees: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features_per_node: Option<FeatureSampling>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shrinkage: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patience: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_examples_per_leaf: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Sampling-rate sweep settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub grid: Vec<f64>,
    /// Vocabulary cap used for every sweep point.
    pub vocabulary_max_size: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid: vec![0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0],
            vocabulary_max_size: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub data: DataConfig,
    pub method: MethodSpec,
    #[serde(default)]
    pub train: TrainOverrides,
    #[serde(default)]
    pub vocabulary: VocabularyConfig,
    #[serde(default)]
    pub evaluation: EvaluationConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default = "RunConfig::default_output_dir")]
    pub output_dir: PathBuf,
}

impl RunConfig {
    fn default_output_dir() -> PathBuf {
        PathBuf::from("output")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads, resolves relative paths against the file's directory, and
    /// validates.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        if let Some(dir) = path.parent() {
            config.resolve_paths(dir);
        }
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        if self.data.path.is_relative() {
            self.data.path = base.join(&self.data.path);
        }
        if self.output_dir.is_relative() {
            self.output_dir = base.join(&self.output_dir);
        }
    }

    /// Algorithm defaults with the `[train]` overrides applied.
    pub fn train_config(&self) -> TrainConfig {
        let o = &self.train;
        let mut c = TrainConfig::defaults_for(self.method.algorithm);
        c.num_trees = o.num_trees.unwrap_or(c.num_trees);
        c.max_depth = o.max_depth.unwrap_or(c.max_depth);
        c.features_per_node = o.features_per_node.unwrap_or(c.features_per_node);
        c.sampling_rate = o.sampling_rate.unwrap_or(c.sampling_rate);
        c.shrinkage = o.shrinkage.unwrap_or(c.shrinkage);
        c.validation_fraction = o.validation_fraction.unwrap_or(c.validation_fraction);
        c.patience = o.patience.or(c.patience);
        c.min_examples_per_leaf = o.min_examples_per_leaf.unwrap_or(c.min_examples_per_leaf);
        c.seed = o.seed.unwrap_or(c.seed);
        c
    }

    pub fn validate(&self) -> Result<()> {
        self.train_config().validate()?;
        self.method.transform_specs()?;
        if self.evaluation.folds < 2 {
            return Err(Error::Config("evaluation.folds must be at least 2".into()));
        }
        if self.vocabulary.max_size == 0 || self.vocabulary.min_frequency == 0 {
            return Err(Error::Config(
                "vocabulary max_size and min_frequency must be at least 1".into(),
            ));
        }
        if self.data.format == DataFormat::Csv && self.data.csv.is_none() {
            return Err(Error::Config("CSV data needs a [data.csv] schema".into()));
        }
        if self.sweep.grid.is_empty() || self.sweep.vocabulary_max_size == 0 {
            return Err(Error::Config(
                "sweep grid and vocabulary cap must be non-empty".into(),
            ));
        }
        if let Some(p) = self.sweep.grid.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
            return Err(Error::Config(format!(
                "sweep sampling rate {p} is outside (0, 1]"
            )));
        }
        Ok(())
    }
}
