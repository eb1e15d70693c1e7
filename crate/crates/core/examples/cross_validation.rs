//! Five-fold comparison of several methods on the bundled planted-keyword
//! corpus, printed as a ranked table.
//!
//! cargo run --release --example cross_validation [-- <num trees>]

use std::path::Path;
use std::time::Instant;

use setforest::dataset::{load_text_corpus, VocabularyConfig};
use setforest::evaluation::{cross_validate, rahr, reports_table, EvaluationConfig};
use setforest::pipeline::MethodSpec;
use setforest::train::TrainConfig;

fn main() -> setforest::Result<()> {
    let trees: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let data = load_text_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/planted.tsv"))?;
    let vocabulary = VocabularyConfig::default();
    let evaluation = EvaluationConfig::default();

    let mut reports = Vec::new();
    for label in [
        "RF GreedyMask",
        "RF BagOfWords",
        "RF MaxHash+TargetMean",
        "MART GreedyMask",
    ] {
        let method: MethodSpec = label.parse()?;
        let mut config = TrainConfig::defaults_for(method.algorithm);
        config.num_trees = trees;
        let start = Instant::now();
        let cv = cross_validate(&data, &method, &config, &vocabulary, &evaluation)?;
        eprintln!("{label}: {:.1}s", start.elapsed().as_secs_f64());
        reports.push(cv.report);
    }
    print!("{}", reports_table(&reports));
    let baseline = reports[1].mean_auc;
    for r in &reports {
        println!(
            "RAHR vs RF BagOfWords  {:<24} {:+.3}",
            r.method,
            rahr(r.mean_auc, baseline)?
        );
    }
    Ok(())
}
