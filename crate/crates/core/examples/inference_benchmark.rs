//! Single-threaded timing of compiled and top-down evaluation of a depth-6
//! MART model over the planted corpus.
//!
//! cargo run --release --example inference_benchmark [-- <num trees> <timed runs>]

use std::path::Path;

use setforest::commands::timing_csv;
use setforest::dataset::{load_text_corpus, VocabularyConfig};
use setforest::inference::{benchmark_inference, BenchmarkProtocol};
use setforest::pipeline::{MethodSpec, Pipeline};
use setforest::train::{train, Algorithm, TrainConfig};
use setforest::CompiledForest;

fn main() -> setforest::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>().ok());
    let trees = args.next().flatten().unwrap_or(500);
    let runs = args.next().flatten().unwrap_or(10);

    let data = load_text_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/planted.tsv"))?;
    let method = MethodSpec::greedy_mask(Algorithm::Mart);
    let (_, encoded) = Pipeline::fit(&data, &VocabularyConfig::default(), &method)?;
    let mut config = TrainConfig::mart();
    config.num_trees = trees;
    config.validation_fraction = 0.0;
    let forest = train(&encoded, &config)?;
    let compiled = CompiledForest::compile(&forest)?;

    let protocol = BenchmarkProtocol {
        warmup_runs: 2,
        timed_runs: runs,
    };
    let rows = benchmark_inference(&method.label(), &forest, &compiled, &encoded, protocol)?;
    print!("{}", timing_csv(&rows));
    println!(
        "speedup {:.1}x",
        rows[1].us_per_example / rows[0].us_per_example
    );
    Ok(())
}
