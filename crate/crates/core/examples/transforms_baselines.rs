//! The baseline transformations of a categorical-set column: bag-of-words
//! indicators, per-term one-hot categories, MaxHash signatures and target-mean
//! encoding, fitted on a tiny corpus.
//!
//! cargo run --example transforms_baselines

use setforest::dataset::{RawDataset, VocabularyConfig};
use setforest::pipeline::{MethodSpec, Pipeline};
use setforest::train::Algorithm;
use setforest::transforms::{hash64, max_hash, max_hash_seeds, TransformKind};

fn main() -> setforest::Result<()> {
    let texts = ["red apple", "green apple", "red cherry", "green pear", ""];
    let raw = RawDataset::from_texts(&texts, vec![1, 0, 1, 0, 0]);
    let vocabulary = VocabularyConfig {
        max_size: 10,
        min_frequency: 1,
    };

    println!("hash64(\"apple\", 0) = {:016x}", hash64("apple", 0));
    let seeds = max_hash_seeds(3, 0x5EED);
    println!(
        "max_hash([red, apple], 3 seeds) = {:x?}",
        max_hash(&["red", "apple"], &seeds)
    );

    use TransformKind::*;
    for chain in [
        vec![BagOfWords],
        vec![OneHot],
        vec![MaxHash],
        vec![MaxHash, TargetMean],
    ] {
        let mut method = MethodSpec::with_transforms(Algorithm::RandomForest, &chain);
        method.params.k = 3;
        let (_, data) = Pipeline::fit(&raw, &vocabulary, &method)?;
        println!("\n{}", method.label());
        let names: Vec<String> = data
            .schema()
            .iter()
            .map(|s| format!("{} ({})", s.name, s.kind))
            .collect();
        println!("  columns: {}", names.join(", "));
        for (i, text) in texts.iter().enumerate() {
            println!("  {text:<12} {:?}", data.values(i));
        }
    }
    Ok(())
}
