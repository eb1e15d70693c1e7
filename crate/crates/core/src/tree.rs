//! Trained tree and forest representation.

use serde::{Deserialize, Serialize};

use crate::dataset::{Example, FeatureKind, FeatureSpec, FeatureValue};
use crate::error::{Error, Result};
use crate::split::SplitCondition;
use crate::train::TrainConfig;

/// A binary decision tree. The negative child is the left one: leaves are
/// numbered left to right with every negative subtree before its positive
/// sibling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Internal {
        condition: SplitCondition,
        negative: Box<TreeNode>,
        positive: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(value: f64) -> Self {
        TreeNode::Leaf { value }
    }

    pub fn internal(condition: SplitCondition, negative: TreeNode, positive: TreeNode) -> Self {
        TreeNode::Internal {
            condition,
            negative: Box::new(negative),
            positive: Box::new(positive),
        }
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal {
                negative, positive, ..
            } => negative.num_leaves() + positive.num_leaves(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal {
                negative, positive, ..
            } => 1 + negative.num_nodes() + positive.num_nodes(),
        }
    }

    /// Depth of the deepest leaf; a lone leaf has depth 0.
    pub fn max_depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal {
                negative, positive, ..
            } => 1 + negative.max_depth().max(positive.max_depth()),
        }
    }

    /// Depth of every leaf, in left-to-right order.
    pub fn leaf_depths(&self) -> Vec<usize> {
        fn walk(node: &TreeNode, depth: usize, out: &mut Vec<usize>) {
            match node {
                TreeNode::Leaf { .. } => out.push(depth),
                TreeNode::Internal {
                    negative, positive, ..
                } => {
                    walk(negative, depth + 1, out);
                    walk(positive, depth + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, 0, &mut out);
        out
    }

    /// Leaf values in left-to-right order.
    pub fn leaf_values(&self) -> Vec<f64> {
        fn walk(node: &TreeNode, out: &mut Vec<f64>) {
            match node {
                TreeNode::Leaf { value } => out.push(*value),
                TreeNode::Internal {
                    negative, positive, ..
                } => {
                    walk(negative, out);
                    walk(positive, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Routes `example` from the root and returns the reached leaf value.
    #[inline]
    pub fn evaluate<E: Example + ?Sized>(&self, example: &E) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Internal {
                    condition,
                    negative,
                    positive,
                } => {
                    node = if condition.evaluate(example) {
                        positive
                    } else {
                        negative
                    };
                }
            }
        }
    }

    /// Left-to-right index of the leaf reached by `example`.
    pub fn leaf_index<E: Example + ?Sized>(&self, example: &E) -> usize {
        let mut node = self;
        let mut offset = 0;
        loop {
            match node {
                TreeNode::Leaf { .. } => return offset,
                TreeNode::Internal {
                    condition,
                    negative,
                    positive,
                } => {
                    if condition.evaluate(example) {
                        offset += negative.num_leaves();
                        node = positive;
                    } else {
                        node = negative;
                    }
                }
            }
        }
    }

    pub(crate) fn scale_leaves(&mut self, factor: f64) {
        match self {
            TreeNode::Leaf { value } => *value *= factor,
            TreeNode::Internal {
                negative, positive, ..
            } => {
                negative.scale_leaves(factor);
                positive.scale_leaves(factor);
            }
        }
    }

    pub(crate) fn for_each_condition<'a>(&'a self, f: &mut impl FnMut(&'a SplitCondition)) {
        if let TreeNode::Internal {
            condition,
            negative,
            positive,
        } = self
        {
            f(condition);
            negative.for_each_condition(f);
            positive.for_each_condition(f);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForestKind {
    /// Bagged classification trees; the output is the mean leaf probability.
    RandomForest,
    /// Additive regression trees on the log-odds scale.
    Mart,
}

/// Combines per-tree outputs accumulated in tree order into a probability.
/// `accumulated` starts at the initial score and adds each leaf value in tree
/// index order; both evaluators go through this function.
#[inline]
pub fn finish_prediction(kind: ForestKind, accumulated: f64, num_trees: usize) -> f64 {
    match kind {
        ForestKind::RandomForest => {
            if num_trees == 0 {
                0.5
            } else {
                accumulated / num_trees as f64
            }
        }
        ForestKind::Mart => sigmoid(accumulated),
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeStats {
    pub num_nodes: usize,
    pub num_leaves: usize,
    pub depth: usize,
    /// Out-of-bag accuracy at threshold 0.5 (random forests only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oob_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    pub config: TrainConfig,
    pub tree_stats: Vec<TreeStats>,
    /// Mean training log-loss before the first round and after each round
    /// (MART only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub train_losses: Vec<f64>,
    /// Mean validation log-loss, aligned with `train_losses`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub validation_losses: Vec<f64>,
}

/// A trained ensemble.
///
/// For MART the shrinkage is already multiplied into the stored leaf values,
/// so the raw score is `initial_score + Σ leaf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionForest {
    pub kind: ForestKind,
    pub initial_score: f64,
    pub shrinkage: f64,
    pub schema: Vec<FeatureSpec>,
    pub trees: Vec<TreeNode>,
    pub metadata: TrainingMetadata,
}

impl DecisionForest {
    /// Reference top-down prediction.
    pub fn predict<E: Example + ?Sized>(&self, example: &E) -> f64 {
        crate::inference::top_down_predict(self, example)
    }

    /// Checks `values` against the schema before predicting.
    pub fn predict_values(&self, values: &[FeatureValue]) -> Result<f64> {
        self.check_values(values)?;
        Ok(self.predict(values))
    }

    pub fn check_values(&self, values: &[FeatureValue]) -> Result<()> {
        if values.len() != self.schema.len() {
            return Err(Error::Schema(format!(
                "example has {} features, model expects {}",
                values.len(),
                self.schema.len()
            )));
        }
        for (spec, value) in self.schema.iter().zip(values) {
            let ok = match value {
                FeatureValue::Missing => true,
                FeatureValue::Numerical(_) => spec.kind == FeatureKind::Numerical,
                FeatureValue::Categorical(_) => spec.kind == FeatureKind::Categorical,
                FeatureValue::CategoricalSet(ids) => {
                    spec.kind == FeatureKind::CategoricalSet && ids.windows(2).all(|w| w[0] < w[1])
                }
            };
            if !ok {
                return Err(Error::Schema(format!(
                    "value {value:?} does not fit {} feature `{}`",
                    spec.kind, spec.name
                )));
            }
        }
        Ok(())
    }

    /// Checks that a dataset's schema matches the training schema.
    pub fn check_schema(&self, schema: &[FeatureSpec]) -> Result<()> {
        if schema.len() != self.schema.len()
            || schema
                .iter()
                .zip(&self.schema)
                .any(|(a, b)| a.kind != b.kind || a.name != b.name)
        {
            return Err(Error::Schema(
                "dataset features differ from the model's training features".into(),
            ));
        }
        Ok(())
    }
}
