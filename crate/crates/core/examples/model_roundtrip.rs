//! Saves a trained model with its fitted pipeline to JSON, reloads it and
//! checks that raw-text predictions are bit-identical.
//!
//! cargo run --release --example model_roundtrip

use std::path::Path;

use setforest::dataset::{load_text_corpus, VocabularyConfig};
use setforest::model::Model;
use setforest::pipeline::{fit_method, MethodSpec};
use setforest::train::TrainConfig;
use setforest::RawDataset;

fn main() -> setforest::Result<()> {
    let data = load_text_corpus(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/planted.tsv"))?;
    let method: MethodSpec = "RF MaxHash+TargetMean".parse()?;
    let mut config = TrainConfig::random_forest();
    config.num_trees = 20;
    let (pipeline, forest) = fit_method(&data, &VocabularyConfig::default(), &method, &config)?;
    let model = Model::new(method.label(), pipeline, forest);

    let path = std::env::temp_dir().join("setforest_roundtrip.model.json");
    model.save(&path)?;
    let loaded = Model::load(&path)?;
    println!(
        "{}: {} bytes, method {:?}",
        path.display(),
        std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0),
        loaded.method
    );

    let queries = RawDataset::from_texts(
        &["w025 w100 w200", "w001 w002", "", "never seen terms"],
        vec![0; 4],
    );
    let before = model.predict_raw(&queries)?;
    let after = loaded.predict_raw(&queries)?;
    for (b, a) in before.iter().zip(&after) {
        println!("{b:.6} {a:.6} identical: {}", b.to_bits() == a.to_bits());
    }
    std::fs::remove_file(&path).ok();
    Ok(())
}
