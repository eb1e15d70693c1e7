//! Metrics, structure statistics and cross-validation.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{RawDataset, VocabularyConfig};
use crate::error::{Error, Result};
use crate::inference::{predict_dataset, CompiledForest, Evaluator, TimingRow};
use crate::pipeline::{fit_method, MethodSpec, Pipeline};
use crate::rng::stream;
use crate::train::TrainConfig;
use crate::tree::{DecisionForest, TreeNode};

/// Rank-based (Mann-Whitney) area under the ROC curve. Tied scores count
/// one half per positive-negative pair.
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidArgument("scores contain NaN".into()));
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Sum of 1-based average ranks of the positives.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + j + 2) as f64 / 2.0;
        let tied_pos = order[i..=j].iter().filter(|&&e| labels[e] == 1).count();
        rank_sum += avg_rank * tied_pos as f64;
        i = j + 1;
    }
    let p = positives as f64;
    let u = rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * negatives as f64))
}

/// Relative accuracy headroom reduction: `(accuracy - baseline) / (1 - baseline)`.
pub fn rahr(accuracy: f64, baseline: f64) -> Result<f64> {
    if baseline >= 1.0 || baseline.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "baseline {baseline} leaves no headroom"
        )));
    }
    Ok((accuracy - baseline) / (1.0 - baseline))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureStats {
    /// Mean over trees of the mean leaf depth.
    pub avg_depth: f64,
    pub nodes_per_tree: f64,
    /// `log2(nodes_per_tree) / avg_depth`; 1 when `avg_depth` is 0.
    pub balance_ratio: f64,
}

pub fn structure_stats(trees: &[TreeNode]) -> Result<StructureStats> {
    if trees.is_empty() {
        return Err(Error::InvalidArgument(
            "structure statistics need at least one tree".into(),
        ));
    }
    let n = trees.len() as f64;
    let avg_depth = trees
        .iter()
        .map(|t| {
            let depths = t.leaf_depths();
            depths.iter().sum::<usize>() as f64 / depths.len() as f64
        })
        .sum::<f64>()
        / n;
    let nodes_per_tree = trees.iter().map(|t| t.num_nodes() as f64).sum::<f64>() / n;
    let balance_ratio = if avg_depth == 0.0 {
        1.0
    } else {
        nodes_per_tree.log2() / avg_depth
    };
    Ok(StructureStats {
        avg_depth,
        nodes_per_tree,
        balance_ratio,
    })
}

pub fn forest_structure(forest: &DecisionForest) -> Result<StructureStats> {
    structure_stats(&forest.trees)
}

/// Seeded Fisher-Yates shuffle of `0..n` cut into `folds` contiguous blocks.
/// Each returned fold is sorted.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::InvalidArgument(
            "cross-validation needs at least 2 folds".into(),
        ));
    }
    if n < folds {
        return Err(Error::InvalidArgument(format!(
            "{n} examples cannot fill {folds} folds"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream(seed));
    Ok((0..folds)
        .map(|f| {
            let mut fold = order[f * n / folds..(f + 1) * n / folds].to_vec();
            fold.sort_unstable();
            fold
        })
        .collect())
}

/// Cross-validation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvaluationConfig {
    pub folds: usize,
    pub seed: u64,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        EvaluationConfig { folds: 5, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: String,
    pub fold_aucs: Vec<f64>,
    pub mean_auc: f64,
    /// Sample standard deviation of `fold_aucs`.
    pub std_auc: f64,
    /// Statistics over the trees of every fold model.
    pub structure: StructureStats,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<TimingRow>,
}

impl EvaluationReport {
    pub fn from_folds(method: String, fold_aucs: Vec<f64>, structure: StructureStats) -> Self {
        let (mean_auc, std_auc) = mean_std(&fold_aucs);
        EvaluationReport {
            method,
            fold_aucs,
            mean_auc,
            std_auc,
            structure,
            timings: Vec::new(),
        }
    }
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Model and held-out scores of one fold.
#[derive(Debug, Clone)]
pub struct FoldResult {
    pub test_rows: Vec<usize>,
    pub pipeline: Pipeline,
    pub forest: DecisionForest,
    pub scores: Vec<f64>,
    pub auc: f64,
}

#[derive(Debug, Clone)]
pub struct CrossValidation {
    pub report: EvaluationReport,
    pub folds: Vec<FoldResult>,
}

/// Trains on every fold's complement and scores the held-out rows.
/// Vocabularies and transforms are fitted on the training rows only.
pub fn cross_validate(
    data: &RawDataset,
    method: &MethodSpec,
    config: &TrainConfig,
    vocabulary: &VocabularyConfig,
    evaluation: &EvaluationConfig,
) -> Result<CrossValidation> {
    config.validate()?;
    let folds = fold_assignment(data.len(), evaluation.folds, evaluation.seed)?;
    let results = folds
        .par_iter()
        .map(|test_rows| {
            let mut in_test = vec![false; data.len()];
            test_rows.iter().for_each(|&r| in_test[r] = true);
            let train_rows: Vec<usize> = (0..data.len()).filter(|&r| !in_test[r]).collect();
            let train = data.select(&train_rows);
            let test = data.select(test_rows);
            let (pipeline, forest) = fit_method(&train, vocabulary, method, config)?;
            let test_data = pipeline.apply(&test)?;
            let compiled = CompiledForest::compile_with_fallback(&forest);
            let scores = predict_dataset(&forest, Some(&compiled), &test_data, Evaluator::Qs);
            let auc = auc(&scores, test_data.labels())?;
            Ok(FoldResult {
                test_rows: test_rows.clone(),
                pipeline,
                forest,
                scores,
                auc,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let trees: Vec<TreeNode> = results
        .iter()
        .flat_map(|r| r.forest.trees.iter().cloned())
        .collect();
    let structure = if trees.is_empty() {
        StructureStats {
            avg_depth: 0.0,
            nodes_per_tree: 0.0,
            balance_ratio: 1.0,
        }
    } else {
        structure_stats(&trees)?
    };
    let report = EvaluationReport::from_folds(
        method.label(),
        results.iter().map(|r| r.auc).collect(),
        structure,
    );
    Ok(CrossValidation {
        report,
        folds: results,
    })
}

/// Ranks by descending mean AUC; tied methods share the average rank.
pub fn ranks(reports: &[EvaluationReport]) -> Vec<f64> {
    reports
        .iter()
        .map(|r| {
            let better = reports.iter().filter(|o| o.mean_auc > r.mean_auc).count();
            let equal = reports.iter().filter(|o| o.mean_auc == r.mean_auc).count();
            better as f64 + (equal as f64 + 1.0) / 2.0
        })
        .collect()
}

pub const REPORT_CSV_HEADER: &str =
    "method,folds,mean_auc,std_auc,rank,fold_aucs,avg_depth,nodes_per_tree,balance_ratio";

/// One row per report; `fold_aucs` is `;`-separated.
pub fn reports_csv(reports: &[EvaluationReport]) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for (r, rank) in reports.iter().zip(ranks(reports)) {
        let folds = r
            .fold_aucs
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.method,
            r.fold_aucs.len(),
            r.mean_auc,
            r.std_auc,
            rank,
            folds,
            r.structure.avg_depth,
            r.structure.nodes_per_tree,
            r.structure.balance_ratio
        ));
    }
    out
}

/// Fixed-width table: method, mean ± std AUC, rank, structure statistics.
pub fn reports_table(reports: &[EvaluationReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.method.len())
        .max()
        .unwrap_or(0)
        .max("Method".len());
    let mut out = format!(
        "{:<width$}  {:>17}  {:>4}  {:>9}  {:>11}  {:>7}\n",
        "Method", "AUC", "Rank", "Avg Depth", "Nodes/Tree", "Balance"
    );
    for (r, rank) in reports.iter().zip(ranks(reports)) {
        out.push_str(&format!(
            "{:<width$}  {:>17}  {:>4}  {:>9.2}  {:>11.1}  {:>7.3}\n",
            r.method,
            format!("{:.4}±{:.4}", r.mean_auc, r.std_auc),
            rank,
            r.structure.avg_depth,
            r.structure.nodes_per_tree,
            r.structure.balance_ratio
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::split::SplitCondition;
    use proptest::prelude::*;

    fn brute_force_auc(scores: &[f64], labels: &[u8]) -> f64 {
        let mut num = 0.0;
        let mut pairs = 0.0;
        for (i, &si) in scores.iter().enumerate() {
            for (j, &sj) in scores.iter().enumerate() {
                if labels[i] == 1 && labels[j] == 0 {
                    pairs += 1.0;
                    if si > sj {
                        num += 1.0;
                    } else if si == sj {
                        num += 0.5;
                    }
                }
            }
        }
        num / pairs
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[0.1, 0.2, 0.3, 0.4], &[0, 0, 1, 1]).unwrap(), 1.0);
        assert_eq!(auc(&[0.5; 4], &[0, 1, 0, 1]).unwrap(), 0.5);
        assert_eq!(auc(&[0.1, 0.4, 0.35, 0.8], &[0, 0, 1, 1]).unwrap(), 0.75);
        assert!(matches!(auc(&[0.1, 0.2], &[1, 1]), Err(Error::SingleClass)));
    }

    #[test]
    fn rahr_examples() {
        assert_eq!(rahr(0.8, 0.8).unwrap(), 0.0);
        assert_eq!(rahr(1.0, 0.8).unwrap(), 1.0);
        assert!(rahr(0.9, 1.0).is_err());
    }

    fn complete(depth: usize) -> TreeNode {
        if depth == 0 {
            return TreeNode::leaf(0.0);
        }
        TreeNode::internal(
            SplitCondition::NumericalGe {
                feature: 0,
                threshold: depth as f64,
            },
            complete(depth - 1),
            complete(depth - 1),
        )
    }

    #[test]
    fn structure_of_lopsided_tree() {
        let c = SplitCondition::NumericalGe {
            feature: 0,
            threshold: 0.0,
        };
        let t = TreeNode::internal(
            c.clone(),
            TreeNode::internal(c, TreeNode::leaf(0.0), TreeNode::leaf(1.0)),
            TreeNode::leaf(1.0),
        );
        let s = structure_stats(&[t]).unwrap();
        // Leaf depths 2, 2, 1.
        assert_eq!(s.avg_depth, 5.0 / 3.0);
        assert_eq!(s.nodes_per_tree, 5.0);
        assert_eq!(s.balance_ratio, 5f64.log2() / (5.0 / 3.0));
    }

    #[test]
    fn structure_of_single_leaf_and_complete_trees() {
        let s = structure_stats(&[TreeNode::leaf(1.0)]).unwrap();
        assert_eq!(s.avg_depth, 0.0);
        assert_eq!(s.balance_ratio, 1.0);
        for d in 1..8 {
            let s = structure_stats(&[complete(d)]).unwrap();
            assert_eq!(s.nodes_per_tree, ((1usize << (d + 1)) - 1) as f64);
            assert_eq!(s.avg_depth, d as f64);
        }
        assert!(structure_stats(&[]).is_err());
    }

    #[test]
    fn folds_partition_rows() {
        let folds = fold_assignment(23, 5, 9).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        assert_eq!(folds, fold_assignment(23, 5, 9).unwrap());
        assert_ne!(folds, fold_assignment(23, 5, 10).unwrap());
        assert!(fold_assignment(10, 1, 0).is_err());
    }

    #[test]
    fn ranks_average_ties() {
        let mk = |m: f64| {
            EvaluationReport::from_folds(
                "x".into(),
                vec![m, m],
                structure_stats(&[TreeNode::leaf(0.0)]).unwrap(),
            )
        };
        let r = ranks(&[mk(0.9), mk(0.8), mk(0.9), mk(0.7)]);
        assert_eq!(r, vec![1.5, 3.0, 1.5, 4.0]);
    }

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert_eq!(s, 1.0);
    }

    proptest! {
        #[test]
        fn auc_matches_pair_counting(
            data in proptest::collection::vec((0u8..6, 0u8..2), 2..60)
        ) {
            let scores: Vec<f64> = data.iter().map(|d| d.0 as f64 / 5.0).collect();
            let labels: Vec<u8> = data.iter().map(|d| d.1).collect();
            prop_assume!(labels.contains(&0) && labels.contains(&1));
            let a = auc(&scores, &labels).unwrap();
            prop_assert!((a - brute_force_auc(&scores, &labels)).abs() <= 1e-12);
            let squashed: Vec<f64> = scores.iter().map(|s| (3.0 * s).exp()).collect();
            prop_assert_eq!(a, auc(&squashed, &labels).unwrap());
        }

        #[test]
        fn auc_complements_under_label_flip(
            scores in proptest::collection::btree_set(0u32..10_000, 2..40),
            bits in any::<u64>(),
        ) {
            let scores: Vec<f64> = scores.into_iter().map(|s| s as f64).collect();
            let labels: Vec<u8> = (0..scores.len()).map(|i| (bits >> (i % 64) & 1) as u8).collect();
            prop_assume!(labels.contains(&0) && labels.contains(&1));
            let flipped: Vec<u8> = labels.iter().map(|l| 1 - l).collect();
            let sum = auc(&scores, &labels).unwrap() + auc(&scores, &flipped).unwrap();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }

        #[test]
        fn rahr_increases_with_accuracy(b in 0.0f64..0.99, a1 in 0.0f64..1.0, a2 in 0.0f64..1.0) {
            prop_assume!(a1 < a2);
            prop_assert!(rahr(a1, b).unwrap() < rahr(a2, b).unwrap());
        }
    }
}
