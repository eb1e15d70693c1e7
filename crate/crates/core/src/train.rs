//! Tree growth and the Random Forest / MART ensemble learners.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng;
use crate::split::{find_split, NodeContext, Objective, SplitCandidate};
use crate::tree::{sigmoid, DecisionForest, ForestKind, TrainingMetadata, TreeNode, TreeStats};

/// Initial MART score used when the training labels are all of one class.
pub const MAX_INITIAL_SCORE: f64 = 30.0;

/// Deepest tree the model document format can nest.
pub const MAX_SUPPORTED_DEPTH: usize = 100;

const VALIDATION_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    #[serde(alias = "rf")]
    RandomForest,
    Mart,
}

/// How many features are examined at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSampling {
    All,
    /// `ceil(sqrt(num_features))`.
    Sqrt,
    Count(usize),
}

impl FeatureSampling {
    pub fn count(&self, num_features: usize) -> usize {
        let k = match *self {
            FeatureSampling::All => num_features,
            FeatureSampling::Sqrt => (num_features as f64).sqrt().ceil() as usize,
            FeatureSampling::Count(k) => k,
        };
        k.clamp(1.min(num_features), num_features)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub algorithm: Algorithm,
    pub num_trees: usize,
    pub max_depth: usize,
    pub features_per_node: FeatureSampling,
    /// Probability that a term enters the greedy splitter's candidate pool.
    pub sampling_rate: f64,
    /// MART learning rate.
    pub shrinkage: f64,
    /// Fraction of the training data held out for MART early stopping; 0
    /// disables the hold-out.
    pub validation_fraction: f64,
    /// Stop after this many rounds without validation improvement. `None`
    /// trains every round; the model is truncated to the best round either way.
    pub patience: Option<usize>,
    pub min_examples_per_leaf: usize,
    pub seed: u64,
}

impl TrainConfig {
    /// 500 trees, depth 32, `ceil(sqrt(F))` features per node, p = 0.2.
    pub fn random_forest() -> Self {
        TrainConfig {
            algorithm: Algorithm::RandomForest,
            num_trees: 500,
            max_depth: 32,
            features_per_node: FeatureSampling::Sqrt,
            sampling_rate: 0.2,
            shrinkage: 1.0,
            validation_fraction: 0.0,
            patience: None,
            min_examples_per_leaf: 1,
            seed: 1,
        }
    }

    /// 500 rounds, depth 6, shrinkage 0.1, 10% validation, all features.
    pub fn mart() -> Self {
        TrainConfig {
            algorithm: Algorithm::Mart,
            num_trees: 500,
            max_depth: 6,
            features_per_node: FeatureSampling::All,
            sampling_rate: 0.2,
            shrinkage: 0.1,
            validation_fraction: 0.1,
            patience: None,
            min_examples_per_leaf: 5,
            seed: 1,
        }
    }

    pub fn defaults_for(algorithm: Algorithm) -> Self {
        match algorithm {
            Algorithm::RandomForest => Self::random_forest(),
            Algorithm::Mart => Self::mart(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_owned()));
        if self.num_trees == 0 {
            return fail("num_trees must be at least 1");
        }
        if self.max_depth == 0 || self.max_depth > MAX_SUPPORTED_DEPTH {
            return fail("max_depth must be in [1, 100]");
        }
        if self.min_examples_per_leaf == 0 {
            return fail("min_examples_per_leaf must be at least 1");
        }
        if let FeatureSampling::Count(0) = self.features_per_node {
            return fail("features_per_node count must be at least 1");
        }
        if !(self.sampling_rate > 0.0 && self.sampling_rate <= 1.0) {
            return fail("sampling_rate must be in (0, 1]");
        }
        if !(self.shrinkage > 0.0 && self.shrinkage <= 1.0) {
            return fail("shrinkage must be in (0, 1]");
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return fail("validation_fraction must be in [0, 1)");
        }
        if self.patience == Some(0) {
            return fail("patience must be at least 1");
        }
        Ok(())
    }
}

/// Parameters of one tree growth.
#[derive(Debug, Clone, Copy)]
pub struct TreeParams {
    pub objective: Objective,
    pub max_depth: usize,
    pub min_examples_per_leaf: usize,
    pub features_per_node: FeatureSampling,
    pub sampling_rate: f64,
}

/// How leaf values are computed from the examples reaching a leaf.
#[derive(Debug, Clone, Copy)]
pub enum LeafRule<'a> {
    /// Weighted mean target.
    Mean,
    /// One Newton step: Σ w·target / Σ w·hessian.
    Newton { hessians: &'a [f64] },
}

struct Grower<'a> {
    dataset: &'a Dataset,
    ctx: NodeContext<'a>,
    params: TreeParams,
    leaf: LeafRule<'a>,
}

impl Grower<'_> {
    fn leaf_value(&self, examples: &[usize]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for &e in examples {
            let w = self.ctx.weights[e];
            num += w * self.ctx.targets[e];
            den += match self.leaf {
                LeafRule::Mean => w,
                LeafRule::Newton { hessians } => w * hessians[e],
            };
        }
        if den > 1e-12 {
            num / den
        } else {
            0.0
        }
    }

    fn best_split(&self, examples: &[usize], rng: &mut ChaCha8Rng) -> Option<SplitCandidate> {
        let num_features = self.dataset.num_features();
        let k = self.params.features_per_node.count(num_features);
        let node_seed: u64 = rng.gen();
        let mut features: Vec<usize> = if k >= num_features {
            (0..num_features).collect()
        } else {
            rand::seq::index::sample(rng, num_features, k).into_vec()
        };
        features.sort_unstable();

        let mut best: Option<SplitCandidate> = None;
        for f in features {
            let mut feature_rng = rng::child_stream(node_seed, f as u64);
            let found = find_split(
                self.dataset,
                f,
                examples,
                &self.ctx,
                self.params.sampling_rate,
                &mut feature_rng,
            );
            if let Some(c) = found {
                if best.as_ref().is_none_or(|b| c.score > b.score) {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn grow(&self, examples: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> TreeNode {
        let min_leaf = self.params.min_examples_per_leaf.max(1);
        let constant = examples
            .windows(2)
            .all(|w| self.ctx.targets[w[0]] == self.ctx.targets[w[1]]);
        if depth >= self.params.max_depth || examples.len() < 2 * min_leaf || constant {
            return TreeNode::leaf(self.leaf_value(&examples));
        }
        let Some(split) = self.best_split(&examples, rng) else {
            return TreeNode::leaf(self.leaf_value(&examples));
        };
        let (positive, negative): (Vec<usize>, Vec<usize>) = examples
            .iter()
            .partition(|&&e| split.condition.evaluate(&self.dataset.row(e)));
        debug_assert!(!positive.is_empty() && !negative.is_empty());
        let negative_child = self.grow(negative, depth + 1, rng);
        let positive_child = self.grow(positive, depth + 1, rng);
        TreeNode::internal(split.condition, negative_child, positive_child)
    }
}

/// Grows one tree on `examples` (ids into `dataset`, repeats allowed).
#[allow(clippy::too_many_arguments)]
pub fn grow_tree(
    dataset: &Dataset,
    examples: Vec<usize>,
    targets: &[f64],
    weights: &[f64],
    params: &TreeParams,
    leaf: LeafRule<'_>,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let grower = Grower {
        dataset,
        ctx: NodeContext {
            targets,
            weights,
            objective: params.objective,
            min_examples_per_leaf: params.min_examples_per_leaf,
        },
        params: *params,
        leaf,
    };
    if examples.is_empty() {
        return TreeNode::leaf(0.0);
    }
    grower.grow(examples, 0, rng)
}

fn tree_stats(tree: &TreeNode, oob_accuracy: Option<f64>) -> TreeStats {
    TreeStats {
        num_nodes: tree.num_nodes(),
        num_leaves: tree.num_leaves(),
        depth: tree.max_depth(),
        oob_accuracy,
    }
}

/// Trains a Random Forest of classification trees.
///
/// Each tree sees a bootstrap sample of size n and its own random stream
/// derived from `config.seed` and the tree index.
pub fn train_random_forest(dataset: &Dataset, config: &TrainConfig) -> Result<DecisionForest> {
    config.validate()?;
    let n = dataset.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let targets: Vec<f64> = dataset.labels().iter().map(|&l| l as f64).collect();
    let params = TreeParams {
        objective: Objective::Classification,
        max_depth: config.max_depth,
        min_examples_per_leaf: config.min_examples_per_leaf,
        features_per_node: config.features_per_node,
        sampling_rate: config.sampling_rate,
    };
    let grown: Vec<(TreeNode, TreeStats)> = (0..config.num_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::child_stream(config.seed, t as u64);
            let mut in_bag = vec![false; n];
            let sample: Vec<usize> = (0..n)
                .map(|_| {
                    let e = rng.gen_range(0..n);
                    in_bag[e] = true;
                    e
                })
                .collect();
            let mut sample = sample;
            sample.sort_unstable();
            let tree = grow_tree(
                dataset,
                sample,
                &targets,
                dataset.weights(),
                &params,
                LeafRule::Mean,
                &mut rng,
            );
            let (mut hits, mut total) = (0usize, 0usize);
            for e in (0..n).filter(|&e| !in_bag[e]) {
                total += 1;
                let predicted = u8::from(tree.evaluate(&dataset.row(e)) >= 0.5);
                hits += usize::from(predicted == dataset.labels()[e]);
            }
            let oob = (total > 0).then(|| hits as f64 / total as f64);
            let stats = tree_stats(&tree, oob);
            (tree, stats)
        })
        .collect();
    let (trees, tree_stats) = grown.into_iter().unzip();
    Ok(DecisionForest {
        kind: ForestKind::RandomForest,
        initial_score: 0.0,
        shrinkage: 1.0,
        schema: dataset.schema().to_vec(),
        trees,
        metadata: TrainingMetadata {
            config: config.clone(),
            tree_stats,
            train_losses: Vec::new(),
            validation_losses: Vec::new(),
        },
    })
}

/// Binomial log-loss of a raw score for a {0, 1} label.
pub fn log_loss(score: f64, label: f64) -> f64 {
    // softplus(s) - y s, computed without overflow.
    score.max(0.0) + (-score.abs()).exp().ln_1p() - label * score
}

/// Derivative of [`log_loss`] with respect to the score.
pub fn log_loss_gradient(score: f64, label: f64) -> f64 {
    sigmoid(score) - label
}

/// Second derivative of [`log_loss`] with respect to the score.
pub fn log_loss_hessian(score: f64) -> f64 {
    let p = sigmoid(score);
    p * (1.0 - p)
}

fn mean_loss(examples: &[usize], scores: &[f64], labels: &[u8], weights: &[f64]) -> f64 {
    let (mut total, mut weight) = (0.0, 0.0);
    for &e in examples {
        total += weights[e] * log_loss(scores[e], labels[e] as f64);
        weight += weights[e];
    }
    if weight > 0.0 {
        total / weight
    } else {
        0.0
    }
}

/// Gradient boosting with binomial log-loss and Newton leaf values.
///
/// A seeded `validation_fraction` of the data is held out; after training the
/// ensemble is truncated to the prefix with the lowest validation loss.
pub fn train_mart(dataset: &Dataset, config: &TrainConfig) -> Result<DecisionForest> {
    config.validate()?;
    let n = dataset.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let labels = dataset.labels();
    let weights = dataset.weights();

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::child_stream(config.seed, VALIDATION_STREAM));
    let num_valid = ((n as f64 * config.validation_fraction).floor() as usize).min(n - 1);
    let mut valid: Vec<usize> = order[..num_valid].to_vec();
    let mut train: Vec<usize> = order[num_valid..].to_vec();
    valid.sort_unstable();
    train.sort_unstable();

    let (mut pos, mut total) = (0.0, 0.0);
    for &e in &train {
        pos += weights[e] * labels[e] as f64;
        total += weights[e];
    }
    let rate = pos / total;
    let degenerate = rate <= 0.0 || rate >= 1.0;
    let initial_score = if rate <= 0.0 {
        -MAX_INITIAL_SCORE
    } else if rate >= 1.0 {
        MAX_INITIAL_SCORE
    } else {
        (rate / (1.0 - rate))
            .ln()
            .clamp(-MAX_INITIAL_SCORE, MAX_INITIAL_SCORE)
    };

    let params = TreeParams {
        objective: Objective::Regression,
        max_depth: config.max_depth,
        min_examples_per_leaf: config.min_examples_per_leaf,
        features_per_node: config.features_per_node,
        sampling_rate: config.sampling_rate,
    };
    let mut scores = vec![initial_score; n];
    let mut residuals = vec![0.0; n];
    let mut hessians = vec![0.0; n];
    let mut trees = Vec::new();
    let mut train_losses = vec![mean_loss(&train, &scores, labels, weights)];
    let mut validation_losses = Vec::new();
    if !valid.is_empty() {
        validation_losses.push(mean_loss(&valid, &scores, labels, weights));
    }
    let mut best = (
        validation_losses.first().copied().unwrap_or(f64::INFINITY),
        0usize,
    );

    let rounds = if degenerate { 0 } else { config.num_trees };
    for round in 0..rounds {
        for &e in &train {
            residuals[e] = -log_loss_gradient(scores[e], labels[e] as f64);
            hessians[e] = log_loss_hessian(scores[e]);
        }
        let mut rng = rng::child_stream(config.seed, round as u64);
        let mut tree = grow_tree(
            dataset,
            train.clone(),
            &residuals,
            weights,
            &params,
            LeafRule::Newton {
                hessians: &hessians,
            },
            &mut rng,
        );
        tree.scale_leaves(config.shrinkage);
        for (e, score) in scores.iter_mut().enumerate() {
            *score += tree.evaluate(&dataset.row(e));
        }
        trees.push(tree);
        train_losses.push(mean_loss(&train, &scores, labels, weights));
        if !valid.is_empty() {
            let loss = mean_loss(&valid, &scores, labels, weights);
            validation_losses.push(loss);
            if loss < best.0 {
                best = (loss, trees.len());
            }
            if let Some(patience) = config.patience {
                if trees.len() - best.1 >= patience {
                    break;
                }
            }
        }
    }
    if !valid.is_empty() {
        trees.truncate(best.1);
    }

    let tree_stats = trees.iter().map(|t| tree_stats(t, None)).collect();
    Ok(DecisionForest {
        kind: ForestKind::Mart,
        initial_score,
        shrinkage: config.shrinkage,
        schema: dataset.schema().to_vec(),
        trees,
        metadata: TrainingMetadata {
            config: config.clone(),
            tree_stats,
            train_losses,
            validation_losses,
        },
    })
}

/// Dispatches on `config.algorithm`.
pub fn train(dataset: &Dataset, config: &TrainConfig) -> Result<DecisionForest> {
    match config.algorithm {
        Algorithm::RandomForest => train_random_forest(dataset, config),
        Algorithm::Mart => train_mart(dataset, config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Column, FeatureSpec, SetColumn, Vocabulary};
    use crate::split::SplitCondition;

    fn separable_sets(n: usize) -> Dataset {
        // Term 0 marks positives; other terms are noise.
        let mut col = SetColumn::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let positive = i % 2 == 0;
            let mut set = vec![];
            if positive {
                set.push(0);
            }
            set.push(1 + (i % 3) as u32);
            col.push(Some(&set));
            labels.push(u8::from(positive));
        }
        Dataset::new(
            vec![FeatureSpec::categorical_set(
                "t",
                Vocabulary::from_terms(["a", "b", "c", "d"]),
            )],
            vec![Column::CategoricalSet(col)],
            labels,
            None,
        )
        .unwrap()
    }

    fn numeric(values: &[f64], labels: &[u8]) -> Dataset {
        Dataset::new(
            vec![FeatureSpec::numerical("x")],
            vec![Column::Numerical(values.to_vec())],
            labels.to_vec(),
            None,
        )
        .unwrap()
    }

    fn rf_params(max_depth: usize) -> TreeParams {
        TreeParams {
            objective: Objective::Classification,
            max_depth,
            min_examples_per_leaf: 1,
            features_per_node: FeatureSampling::All,
            sampling_rate: 1.0,
        }
    }

    #[test]
    fn pure_node_is_a_leaf() {
        let ds = numeric(&[1.0, 2.0, 3.0], &[1, 1, 1]);
        let targets = [1.0; 3];
        let tree = grow_tree(
            &ds,
            vec![0, 1, 2],
            &targets,
            ds.weights(),
            &rf_params(5),
            LeafRule::Mean,
            &mut rng::stream(0),
        );
        assert_eq!(tree, TreeNode::leaf(1.0));
    }

    #[test]
    fn separable_examples_give_depth_one_tree() {
        let ds = numeric(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1]);
        let targets = [0.0, 0.0, 1.0, 1.0];
        let tree = grow_tree(
            &ds,
            vec![0, 1, 2, 3],
            &targets,
            ds.weights(),
            &rf_params(3),
            LeafRule::Mean,
            &mut rng::stream(0),
        );
        assert_eq!(tree.max_depth(), 1);
        for (e, &target) in targets.iter().enumerate() {
            assert_eq!(tree.evaluate(&ds.row(e)), target);
        }
    }

    #[test]
    fn feature_sampling_counts() {
        assert_eq!(FeatureSampling::Sqrt.count(1), 1);
        assert_eq!(FeatureSampling::Sqrt.count(10), 4);
        assert_eq!(FeatureSampling::Sqrt.count(16), 4);
        assert_eq!(FeatureSampling::All.count(7), 7);
        assert_eq!(FeatureSampling::Count(50).count(7), 7);
    }

    #[test]
    fn default_hyperparameters() {
        let rf = TrainConfig::random_forest();
        assert_eq!((rf.num_trees, rf.max_depth), (500, 32));
        assert_eq!(rf.features_per_node, FeatureSampling::Sqrt);
        assert_eq!(rf.sampling_rate, 0.2);
        let mart = TrainConfig::mart();
        assert_eq!((mart.num_trees, mart.max_depth), (500, 6));
        assert_eq!(mart.shrinkage, 0.1);
        assert_eq!(mart.validation_fraction, 0.1);
        assert_eq!(mart.features_per_node, FeatureSampling::All);
    }

    #[test]
    fn config_validation() {
        let mut c = TrainConfig::random_forest();
        c.sampling_rate = 0.0;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = TrainConfig::mart();
        c.shrinkage = 1.5;
        assert!(c.validate().is_err());
        let mut c = TrainConfig::mart();
        c.num_trees = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_tree_forest_fits_separable_data() {
        let ds = separable_sets(40);
        let mut config = TrainConfig::random_forest();
        config.num_trees = 1;
        config.sampling_rate = 1.0;
        let forest = train_random_forest(&ds, &config).unwrap();
        let scores: Vec<f64> = (0..ds.len()).map(|e| forest.predict(&ds.row(e))).collect();
        let auc = crate::evaluation::auc(&scores, ds.labels()).unwrap();
        assert_eq!(auc, 1.0);
    }

    #[test]
    fn random_forest_is_deterministic() {
        let ds = separable_sets(60);
        let mut config = TrainConfig::random_forest();
        config.num_trees = 8;
        config.seed = 99;
        let a = train_random_forest(&ds, &config).unwrap();
        let b = train_random_forest(&ds, &config).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn random_forest_rejects_empty_data() {
        let ds = numeric(&[], &[]);
        assert!(matches!(
            train_random_forest(&ds, &TrainConfig::random_forest()),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn random_forest_averages_tree_outputs() {
        let ds = separable_sets(30);
        let mut config = TrainConfig::random_forest();
        config.num_trees = 3;
        config.sampling_rate = 0.5;
        let forest = train_random_forest(&ds, &config).unwrap();
        for e in 0..ds.len() {
            let row = ds.row(e);
            let t: Vec<f64> = forest.trees.iter().map(|t| t.evaluate(&row)).collect();
            assert_eq!(forest.predict(&row), (t[0] + t[1] + t[2]) / 3.0);
        }
    }

    #[test]
    fn mart_training_loss_strictly_decreases() {
        let ds = separable_sets(40);
        let mut config = TrainConfig::mart();
        config.num_trees = 10;
        config.validation_fraction = 0.0;
        config.sampling_rate = 1.0;
        let forest = train_mart(&ds, &config).unwrap();
        assert_eq!(forest.trees.len(), 10);
        let losses = &forest.metadata.train_losses;
        assert_eq!(losses.len(), 11);
        assert!(losses.windows(2).all(|w| w[1] < w[0]), "{losses:?}");
    }

    #[test]
    fn mart_single_class_has_no_trees() {
        let ds = numeric(&[1.0, 2.0, 3.0], &[1, 1, 1]);
        let forest = train_mart(&ds, &TrainConfig::mart()).unwrap();
        assert!(forest.trees.is_empty());
        assert_eq!(forest.initial_score, MAX_INITIAL_SCORE);
        assert!(forest.predict(&ds.row(0)) > 0.999_999);
    }

    #[test]
    fn mart_truncates_to_best_validation_round() {
        let ds = separable_sets(200);
        let mut config = TrainConfig::mart();
        config.num_trees = 30;
        config.sampling_rate = 1.0;
        let forest = train_mart(&ds, &config).unwrap();
        let v = &forest.metadata.validation_losses;
        assert_eq!(v.len(), 31);
        let best = v.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(v[forest.trees.len()], best);
        assert!(v[..forest.trees.len()].iter().all(|&l| l > best));
    }

    #[test]
    fn mart_patience_stops_early() {
        let ds = separable_sets(200);
        let mut config = TrainConfig::mart();
        config.num_trees = 400;
        config.sampling_rate = 1.0;
        config.patience = Some(3);
        let forest = train_mart(&ds, &config).unwrap();
        assert!(forest.metadata.train_losses.len() < 401);
    }

    #[test]
    fn depth_limit_is_respected() {
        let ds = separable_sets(50);
        let mut config = TrainConfig::random_forest();
        config.num_trees = 5;
        config.max_depth = 2;
        let forest = train_random_forest(&ds, &config).unwrap();
        assert!(forest.trees.iter().all(|t| t.max_depth() <= 2));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for &(s, y) in &[(0.3, 1.0), (-2.0, 0.0), (4.0, 1.0), (0.0, 0.0)] {
            let h = 1e-5;
            let fd = (log_loss(s + h, y) - log_loss(s - h, y)) / (2.0 * h);
            let g = log_loss_gradient(s, y);
            assert!(
                (fd - g).abs() <= 1e-6 * g.abs().max(1e-3),
                "{s} {y}: {fd} vs {g}"
            );
        }
    }

    #[test]
    fn splits_never_produce_empty_branches() {
        let ds = separable_sets(64);
        let targets: Vec<f64> = ds.labels().iter().map(|&l| l as f64).collect();
        let mut params = rf_params(6);
        params.sampling_rate = 0.5;
        let tree = grow_tree(
            &ds,
            (0..ds.len()).collect(),
            &targets,
            ds.weights(),
            &params,
            LeafRule::Mean,
            &mut rng::stream(3),
        );
        fn check(node: &TreeNode, ds: &Dataset, examples: Vec<usize>) {
            if let TreeNode::Internal {
                condition,
                negative,
                positive,
            } = node
            {
                let (p, n): (Vec<usize>, Vec<usize>) = examples
                    .iter()
                    .partition(|&&e| condition.evaluate(&ds.row(e)));
                assert!(matches!(condition, SplitCondition::SetIntersects { .. }));
                assert!(!p.is_empty() && !n.is_empty());
                check(negative, ds, n);
                check(positive, ds, p);
            }
        }
        check(&tree, &ds, (0..ds.len()).collect());
    }
}
