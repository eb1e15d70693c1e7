//! Cross-validated AUC over a grid of term sampling rates, with the
//! vocabulary capped at 2000 terms.
//!
//! cargo run --release --example sampling_rate_sweep [-- <num trees>]

use std::path::Path;

use setforest::commands::{sweep_csv, SweepPoint};
use setforest::dataset::{load_text_corpus, VocabularyConfig};
use setforest::evaluation::{cross_validate, EvaluationConfig};
use setforest::pipeline::MethodSpec;
use setforest::train::{Algorithm, TrainConfig};

fn main() -> setforest::Result<()> {
    let trees = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let data = load_text_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/planted.tsv"))?;
    let vocabulary = VocabularyConfig {
        max_size: 2000,
        ..VocabularyConfig::default()
    };
    let method = MethodSpec::greedy_mask(Algorithm::RandomForest);
    let mut points = Vec::new();
    for p in [0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0] {
        let mut config = TrainConfig::random_forest();
        config.num_trees = trees;
        config.sampling_rate = p;
        let cv = cross_validate(
            &data,
            &method,
            &config,
            &vocabulary,
            &EvaluationConfig::default(),
        )?;
        points.push(SweepPoint {
            sampling_rate: p,
            report: cv.report,
        });
    }
    print!("{}", sweep_csv(&points));
    let aucs: Vec<f64> = points.iter().map(|p| p.report.mean_auc).collect();
    let spread = aucs.iter().cloned().fold(f64::MIN, f64::max)
        - aucs.iter().cloned().fold(f64::MAX, f64::min);
    println!("max - min mean AUC: {spread:.4}");
    Ok(())
}
