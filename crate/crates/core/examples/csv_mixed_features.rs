//! A CSV input mixing numerical, categorical and set columns, with missing
//! cells and empty sets, trained with a Random Forest.
//!
//! cargo run --release --example csv_mixed_features

use setforest::dataset::{load_csv, CsvColumn, CsvSchema, FeatureKind, VocabularyConfig};
use setforest::evaluation::auc;
use setforest::inference::{predict_dataset, Evaluator};
use setforest::pipeline::{fit_method, MethodSpec};
use setforest::synthetic::mixed_csv;
use setforest::train::{Algorithm, TrainConfig};

fn main() -> setforest::Result<()> {
    let csv = mixed_csv(2000, 11);
    let path = std::env::temp_dir().join("setforest_mixed.csv");
    std::fs::write(&path, csv).map_err(|e| setforest::Error::io(&path, e))?;

    let schema = CsvSchema {
        columns: vec![
            CsvColumn {
                name: "price".into(),
                kind: FeatureKind::Numerical,
            },
            CsvColumn {
                name: "color".into(),
                kind: FeatureKind::Categorical,
            },
            CsvColumn {
                name: "tags".into(),
                kind: FeatureKind::CategoricalSet,
            },
        ],
        label: "label".into(),
        weight: None,
    };
    let raw = load_csv(&path, &schema)?;
    std::fs::remove_file(&path).ok();
    let train_rows: Vec<usize> = (0..1500).collect();
    let test_rows: Vec<usize> = (1500..raw.len()).collect();

    let mut config = TrainConfig::random_forest();
    config.num_trees = 50;
    let vocabulary = VocabularyConfig {
        max_size: 100,
        min_frequency: 1,
    };
    let method = MethodSpec::greedy_mask(Algorithm::RandomForest);
    let (pipeline, forest) = fit_method(&raw.select(&train_rows), &vocabulary, &method, &config)?;
    let test = pipeline.apply(&raw.select(&test_rows))?;
    let scores = predict_dataset(&forest, None, &test, Evaluator::Qs);
    for spec in test.schema() {
        println!("{:<6} {}", spec.name, spec.kind);
    }
    println!("held-out AUC {:.4}", auc(&scores, test.labels())?);
    Ok(())
}
