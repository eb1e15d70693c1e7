//! Forest evaluators.
//!
//! [`top_down_predict`] routes an example from the root of every tree.
//! [`CompiledForest`] is a QuickScorer layout: each tree keeps a 64-bit leaf
//! mask, every condition that routes an example positive clears the leaves of
//! the node's negative subtree, and the active leaf is the lowest set bit.
//!
//! Numerical nodes become per-feature entries sorted by threshold and are
//! applied while `threshold <= value`. Categorical-set nodes become term
//! masks: for every term of a node's mask, the leaves that are unreachable
//! when the term is present. Term masks of one feature are grouped by term in
//! `entries`, and `index[term]` gives the `[begin, end)` range of that term.
//! Categorical (CART) conditions reuse the same tables with the category
//! value playing the role of a term.
//!
//! Trees with more than 64 leaves can be kept as top-down fallbacks with
//! [`CompiledForest::compile_with_fallback`]; outputs are still accumulated in
//! tree order, so both evaluators agree bit for bit.

use std::collections::BTreeMap;
use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Example, FeatureKind};
use crate::error::{Error, Result};
use crate::split::SplitCondition;
use crate::tree::{finish_prediction, DecisionForest, ForestKind, TreeNode};

/// Leaf bit vector of one tree; bit `i` is the `i`-th leaf from the left.
pub type LeafMask = u64;

pub const MAX_LEAVES: usize = 64;

/// Renders the low `width` bits of a mask, leaf 0 first.
pub fn mask_bits(mask: LeafMask, width: usize) -> String {
    (0..width)
        .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Reference evaluator: trees are visited in index order and their leaf
/// values added to the initial score.
pub fn top_down_predict<E: Example + ?Sized>(forest: &DecisionForest, example: &E) -> f64 {
    let mut acc = forest.initial_score;
    for tree in &forest.trees {
        acc += tree.evaluate(example);
    }
    finish_prediction(forest.kind, acc, forest.trees.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermMaskEntry {
    pub tree_id: u32,
    pub mask: LeafMask,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRange {
    pub begin: u32,
    pub end: u32,
}

/// Term masks of one categorical or categorical-set feature.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TermMaskTable {
    pub feature: usize,
    /// Grouped by term, ascending; tree ids strictly increase within a group.
    pub entries: Vec<TermMaskEntry>,
    /// `index[term]` is the range of `term` in `entries`.
    pub index: Vec<TermRange>,
}

impl TermMaskTable {
    pub fn masks_for(&self, term: u32) -> &[TermMaskEntry] {
        match self.index.get(term as usize) {
            Some(r) => &self.entries[r.begin as usize..r.end as usize],
            None => &[],
        }
    }

    #[inline]
    fn apply(&self, term: u32, leaf_masks: &mut [LeafMask]) {
        if let Some(r) = self.index.get(term as usize) {
            for m in &self.entries[r.begin as usize..r.end as usize] {
                leaf_masks[m.tree_id as usize] &= m.mask;
            }
        }
    }
}

/// Threshold entries of one numerical feature, sorted by threshold.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NumericalEntries {
    pub feature: usize,
    pub thresholds: Vec<f64>,
    pub tree_ids: Vec<u32>,
    pub masks: Vec<LeafMask>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledForest {
    pub kind: ForestKind,
    pub initial_score: f64,
    pub num_features: usize,
    /// Start of each tree's leaves in `leaf_values`.
    pub leaf_offsets: Vec<usize>,
    pub leaf_values: Vec<f64>,
    pub numerical: Vec<NumericalEntries>,
    pub categorical: Vec<TermMaskTable>,
    pub categorical_set: Vec<TermMaskTable>,
    /// Trees evaluated top-down, indexed like the forest's trees.
    fallback: Vec<Option<TreeNode>>,
}

#[derive(Default)]
struct Builder {
    numerical: BTreeMap<usize, Vec<(f64, u32, LeafMask)>>,
    categorical: BTreeMap<usize, BTreeMap<(u32, u32), LeafMask>>,
    categorical_set: BTreeMap<usize, BTreeMap<(u32, u32), LeafMask>>,
}

impl Builder {
    /// Walks `node`, whose leaves start at `offset`; returns its leaf count.
    fn visit(&mut self, node: &TreeNode, tree_id: u32, offset: usize) -> usize {
        match node {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal {
                condition,
                negative,
                positive,
            } => {
                let negative_leaves = self.visit(negative, tree_id, offset);
                let positive_leaves = self.visit(positive, tree_id, offset + negative_leaves);
                let cleared = ((1u128 << negative_leaves) - 1) as u64;
                let mask = !(cleared << offset);
                match condition {
                    SplitCondition::NumericalGe { feature, threshold } => self
                        .numerical
                        .entry(*feature)
                        .or_default()
                        .push((*threshold, tree_id, mask)),
                    SplitCondition::CategoricalIn { feature, values } => {
                        let table = self.categorical.entry(*feature).or_default();
                        for &v in values {
                            *table.entry((v, tree_id)).or_insert(!0) &= mask;
                        }
                    }
                    SplitCondition::SetIntersects {
                        feature,
                        mask: terms,
                    } => {
                        let table = self.categorical_set.entry(*feature).or_default();
                        for &t in terms {
                            *table.entry((t, tree_id)).or_insert(!0) &= mask;
                        }
                    }
                }
                negative_leaves + positive_leaves
            }
        }
    }
}

fn term_table(
    feature: usize,
    domain: usize,
    masks: BTreeMap<(u32, u32), LeafMask>,
) -> TermMaskTable {
    let max_term = masks.keys().map(|k| k.0 as usize + 1).max().unwrap_or(0);
    let mut index = vec![TermRange::default(); domain.max(max_term)];
    let mut entries = Vec::with_capacity(masks.len());
    for ((term, tree_id), mask) in masks {
        let range = &mut index[term as usize];
        if range.begin == range.end {
            range.begin = entries.len() as u32;
        }
        entries.push(TermMaskEntry { tree_id, mask });
        range.end = entries.len() as u32;
    }
    TermMaskTable {
        feature,
        entries,
        index,
    }
}

impl CompiledForest {
    /// Compiles every tree; fails if a tree has more than 64 leaves.
    pub fn compile(forest: &DecisionForest) -> Result<Self> {
        if let Some((tree, leaves)) = forest
            .trees
            .iter()
            .map(TreeNode::num_leaves)
            .enumerate()
            .find(|(_, l)| *l > MAX_LEAVES)
        {
            return Err(Error::TooManyLeaves { tree, leaves });
        }
        Ok(Self::compile_with_fallback(forest))
    }

    /// Compiles trees with at most 64 leaves and keeps wider ones for
    /// top-down evaluation.
    pub fn compile_with_fallback(forest: &DecisionForest) -> Self {
        let mut builder = Builder::default();
        let mut leaf_offsets = Vec::with_capacity(forest.trees.len());
        let mut leaf_values = Vec::new();
        let mut fallback = Vec::with_capacity(forest.trees.len());
        for (t, tree) in forest.trees.iter().enumerate() {
            leaf_offsets.push(leaf_values.len());
            if tree.num_leaves() > MAX_LEAVES {
                fallback.push(Some(tree.clone()));
                continue;
            }
            fallback.push(None);
            builder.visit(tree, t as u32, 0);
            leaf_values.extend(tree.leaf_values());
        }

        let domain = |f: usize| forest.schema.get(f).map_or(0, |s| s.domain_size());
        let numerical = builder
            .numerical
            .into_iter()
            .map(|(feature, mut items)| {
                items.sort_by(|a, b| a.0.total_cmp(&b.0));
                NumericalEntries {
                    feature,
                    thresholds: items.iter().map(|i| i.0).collect(),
                    tree_ids: items.iter().map(|i| i.1).collect(),
                    masks: items.iter().map(|i| i.2).collect(),
                }
            })
            .collect();
        let categorical = builder
            .categorical
            .into_iter()
            .map(|(f, m)| term_table(f, domain(f), m))
            .collect();
        let categorical_set = builder
            .categorical_set
            .into_iter()
            .map(|(f, m)| term_table(f, domain(f), m))
            .collect();

        CompiledForest {
            kind: forest.kind,
            initial_score: forest.initial_score,
            num_features: forest.schema.len(),
            leaf_offsets,
            leaf_values,
            numerical,
            categorical,
            categorical_set,
            fallback,
        }
    }

    pub fn num_trees(&self) -> usize {
        self.leaf_offsets.len()
    }

    /// Number of trees evaluated top-down.
    pub fn num_fallback_trees(&self) -> usize {
        self.fallback.iter().filter(|f| f.is_some()).count()
    }

    pub fn term_masks(&self, feature: usize) -> Option<&TermMaskTable> {
        self.categorical_set
            .iter()
            .chain(&self.categorical)
            .find(|t| t.feature == feature)
    }

    /// Runs the mask phases and leaves the final per-tree leaf masks in
    /// `leaf_masks` (resized to the number of trees).
    pub fn leaf_masks<E: Example + ?Sized>(&self, example: &E, leaf_masks: &mut Vec<LeafMask>) {
        leaf_masks.clear();
        leaf_masks.resize(self.num_trees(), !0);
        for entries in &self.numerical {
            if let Some(value) = example.numerical(entries.feature) {
                for (i, &threshold) in entries.thresholds.iter().enumerate() {
                    if threshold > value {
                        break;
                    }
                    leaf_masks[entries.tree_ids[i] as usize] &= entries.masks[i];
                }
            }
        }
        for table in &self.categorical {
            if let Some(value) = example.categorical(table.feature) {
                table.apply(value, leaf_masks);
            }
        }
        for table in &self.categorical_set {
            if let Some(terms) = example.categorical_set(table.feature) {
                for &term in terms {
                    table.apply(term, leaf_masks);
                }
            }
        }
    }

    /// QuickScorer prediction with caller-provided scratch space.
    pub fn predict_with<E: Example + ?Sized>(
        &self,
        example: &E,
        scratch: &mut Vec<LeafMask>,
    ) -> f64 {
        self.leaf_masks(example, scratch);
        let mut acc = self.initial_score;
        for (t, &mask) in scratch.iter().enumerate() {
            acc += match &self.fallback[t] {
                Some(tree) => tree.evaluate(example),
                None => {
                    debug_assert!(mask != 0);
                    self.leaf_values[self.leaf_offsets[t] + mask.trailing_zeros() as usize]
                }
            };
        }
        finish_prediction(self.kind, acc, self.num_trees())
    }

    /// Active leaf index per tree (`None` for fallback trees).
    pub fn active_leaves<E: Example + ?Sized>(&self, example: &E) -> Vec<Option<usize>> {
        let mut scratch = Vec::new();
        self.leaf_masks(example, &mut scratch);
        scratch
            .iter()
            .enumerate()
            .map(|(t, m)| {
                self.fallback[t]
                    .is_none()
                    .then_some(m.trailing_zeros() as usize)
            })
            .collect()
    }
}

/// QuickScorer prediction allocating its own scratch buffer.
pub fn qs_predict<E: Example + ?Sized>(compiled: &CompiledForest, example: &E) -> f64 {
    let mut scratch = Vec::with_capacity(compiled.num_trees());
    compiled.predict_with(example, &mut scratch)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    Qs,
    TopDown,
}

impl Evaluator {
    pub fn name(&self) -> &'static str {
        match self {
            Evaluator::Qs => "qs",
            Evaluator::TopDown => "topdown",
        }
    }
}

/// Scores every row of `dataset` with the chosen evaluator.
pub fn predict_dataset(
    forest: &DecisionForest,
    compiled: Option<&CompiledForest>,
    dataset: &Dataset,
    evaluator: Evaluator,
) -> Vec<f64> {
    match (evaluator, compiled) {
        (Evaluator::Qs, Some(c)) => {
            let mut scratch = Vec::with_capacity(c.num_trees());
            (0..dataset.len())
                .map(|e| c.predict_with(&dataset.row(e), &mut scratch))
                .collect()
        }
        (Evaluator::Qs, None) => {
            let c = CompiledForest::compile_with_fallback(forest);
            predict_dataset(forest, Some(&c), dataset, evaluator)
        }
        (Evaluator::TopDown, _) => (0..dataset.len())
            .map(|e| top_down_predict(forest, &dataset.row(e)))
            .collect(),
    }
}

/// One line of the inference benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub model: String,
    pub evaluator: String,
    #[serde(rename = "µs_per_example")]
    pub us_per_example: f64,
    pub examples: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkProtocol {
    pub warmup_runs: usize,
    pub timed_runs: usize,
}

impl Default for BenchmarkProtocol {
    /// 10 warm-up passes followed by 100 timed passes.
    fn default() -> Self {
        BenchmarkProtocol {
            warmup_runs: 10,
            timed_runs: 100,
        }
    }
}

/// Times both evaluators over full passes of already-encoded `dataset` on the
/// calling thread.
pub fn benchmark_inference(
    model_name: &str,
    forest: &DecisionForest,
    compiled: &CompiledForest,
    dataset: &Dataset,
    protocol: BenchmarkProtocol,
) -> Result<Vec<TimingRow>> {
    forest.check_schema(dataset.schema())?;
    let n = dataset.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut scratch = Vec::with_capacity(compiled.num_trees());
    let mut qs_pass = || {
        let mut sum = 0.0;
        for e in 0..n {
            sum += compiled.predict_with(&dataset.row(e), &mut scratch);
        }
        black_box(sum)
    };
    let qs = time_passes(&mut qs_pass, protocol);
    let mut td_pass = || {
        let mut sum = 0.0;
        for e in 0..n {
            sum += top_down_predict(forest, &dataset.row(e));
        }
        black_box(sum)
    };
    let td = time_passes(&mut td_pass, protocol);
    let row = |evaluator: Evaluator, seconds: f64| TimingRow {
        model: model_name.to_owned(),
        evaluator: evaluator.name().to_owned(),
        us_per_example: seconds * 1e6 / (protocol.timed_runs * n) as f64,
        examples: n,
        runs: protocol.timed_runs,
    };
    Ok(vec![row(Evaluator::Qs, qs), row(Evaluator::TopDown, td)])
}

fn time_passes(pass: &mut impl FnMut() -> f64, protocol: BenchmarkProtocol) -> f64 {
    for _ in 0..protocol.warmup_runs {
        pass();
    }
    let start = Instant::now();
    for _ in 0..protocol.timed_runs.max(1) {
        pass();
    }
    start.elapsed().as_secs_f64()
}

/// Checks that all set-feature conditions in `forest` reference existing
/// categorical-set features.
pub fn check_compilable(forest: &DecisionForest) -> Result<()> {
    for (t, tree) in forest.trees.iter().enumerate() {
        let mut problem = None;
        tree.for_each_condition(&mut |c| {
            let expected = match c {
                SplitCondition::NumericalGe { .. } => FeatureKind::Numerical,
                SplitCondition::CategoricalIn { .. } => FeatureKind::Categorical,
                SplitCondition::SetIntersects { .. } => FeatureKind::CategoricalSet,
            };
            if forest.schema.get(c.feature()).map(|s| s.kind) != Some(expected) {
                problem = Some(c.feature());
            }
        });
        if let Some(f) = problem {
            return Err(Error::Model(format!(
                "tree {t} tests feature {f} with a condition of the wrong type"
            )));
        }
    }
    Ok(())
}
