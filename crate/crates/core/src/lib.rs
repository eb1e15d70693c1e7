//! Decision forests over numerical, categorical and categorical-set features.
//!
//! Categorical-set features (for example the tokens of a sentence) are split
//! natively with a greedy mask splitter: a node tests whether the example's
//! set intersects a learned term mask. Trained forests can be scored top-down
//! or through a QuickScorer-style compiled layout with per-term leaf masks.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod inference;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod split;
pub mod synthetic;
pub mod train;
pub mod transforms;
pub mod tree;

pub use dataset::{Dataset, FeatureKind, FeatureSpec, FeatureValue, RawDataset, Vocabulary};
pub use error::{Error, Result};
pub use inference::{qs_predict, top_down_predict, CompiledForest};
pub use tree::{DecisionForest, ForestKind, TreeNode};
