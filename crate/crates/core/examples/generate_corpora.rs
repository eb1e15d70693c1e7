//! Regenerates the bundled synthetic corpora under `data/`.
//!
//! cargo run --release --example generate_corpora [-- <output dir>]

use std::path::PathBuf;

use setforest::synthetic::{
    mixed_csv, noise_corpus, planted_corpus, signal_terms, to_tsv, PlantedCorpusConfig,
};

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&dir)?;

    let config = PlantedCorpusConfig::default();
    let (texts, labels) = planted_corpus(&config);
    std::fs::write(dir.join("planted.tsv"), to_tsv(&texts, &labels))?;
    println!(
        "planted.tsv: {} documents, signal terms {:?}",
        texts.len(),
        signal_terms(&config)
    );

    let (texts, labels) = noise_corpus(1000, 200, 7);
    std::fs::write(dir.join("noise.tsv"), to_tsv(&texts, &labels))?;
    println!("noise.tsv: {} documents", texts.len());

    std::fs::write(dir.join("mixed.csv"), mixed_csv(2000, 11))?;
    println!("mixed.csv: 2000 rows");
    Ok(())
}
