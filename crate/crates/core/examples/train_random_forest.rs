//! Random Forest with native set splits on the planted-keyword corpus: hold
//! out a fifth of the data, report AUC, out-of-bag accuracy and tree shape.
//!
//! cargo run --release --example train_random_forest [-- <num trees>]

use std::path::Path;

use setforest::dataset::{load_text_corpus, VocabularyConfig};
use setforest::evaluation::{auc, fold_assignment, forest_structure};
use setforest::inference::{predict_dataset, Evaluator};
use setforest::pipeline::{fit_method, MethodSpec};
use setforest::train::{Algorithm, TrainConfig};

fn main() -> setforest::Result<()> {
    let trees = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let data = load_text_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/planted.tsv"))?;
    let folds = fold_assignment(data.len(), 5, 1)?;
    let test_rows = &folds[0];
    let train_rows: Vec<usize> = folds[1..].concat();

    let method = MethodSpec::greedy_mask(Algorithm::RandomForest);
    let mut config = TrainConfig::random_forest();
    config.num_trees = trees;
    let (pipeline, forest) = fit_method(
        &data.select(&train_rows),
        &VocabularyConfig::default(),
        &method,
        &config,
    )?;

    let test = pipeline.apply(&data.select(test_rows))?;
    let scores = predict_dataset(&forest, None, &test, Evaluator::Qs);
    let oob: Vec<f64> = forest
        .metadata
        .tree_stats
        .iter()
        .filter_map(|s| s.oob_accuracy)
        .collect();
    let s = forest_structure(&forest)?;
    println!(
        "{} trees on {} examples",
        forest.trees.len(),
        train_rows.len()
    );
    println!("held-out AUC      {:.4}", auc(&scores, test.labels())?);
    println!(
        "mean OOB accuracy {:.4}",
        oob.iter().sum::<f64>() / oob.len() as f64
    );
    println!(
        "avg depth {:.2}, nodes/tree {:.1}, balance {:.3}",
        s.avg_depth, s.nodes_per_tree, s.balance_ratio
    );
    Ok(())
}
