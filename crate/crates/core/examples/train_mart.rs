//! Gradient boosting with log-loss on set features: per-round training and
//! validation loss, and truncation to the best validation round.
//!
//! cargo run --release --example train_mart [-- <num rounds>]

use std::path::Path;

use setforest::dataset::{load_text_corpus, VocabularyConfig};
use setforest::evaluation::{auc, fold_assignment};
use setforest::inference::{predict_dataset, Evaluator};
use setforest::pipeline::{fit_method, MethodSpec};
use setforest::train::{Algorithm, TrainConfig};

fn main() -> setforest::Result<()> {
    let rounds = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let data = load_text_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/planted.tsv"))?;
    let folds = fold_assignment(data.len(), 5, 2)?;
    let train_rows: Vec<usize> = folds[1..].concat();

    let mut config = TrainConfig::mart();
    config.num_trees = rounds;
    let (pipeline, forest) = fit_method(
        &data.select(&train_rows),
        &VocabularyConfig::default(),
        &MethodSpec::greedy_mask(Algorithm::Mart),
        &config,
    )?;

    let m = &forest.metadata;
    for r in (0..m.train_losses.len()).step_by((rounds / 10).max(1)) {
        println!(
            "round {r:>4}: train {:.4}  validation {:.4}",
            m.train_losses[r], m.validation_losses[r]
        );
    }
    println!(
        "kept {} of {rounds} rounds, initial score {:.4}",
        forest.trees.len(),
        forest.initial_score
    );
    let test = pipeline.apply(&data.select(&folds[0]))?;
    let scores = predict_dataset(&forest, None, &test, Evaluator::Qs);
    println!("held-out AUC {:.4}", auc(&scores, test.labels())?);
    Ok(())
}
