//! Tokenization, document-frequency vocabularies and set encoding, including
//! the difference between an empty set and a missing value.
//!
//! cargo run --example tokenize_and_vocabulary

use setforest::dataset::{
    encode_set, tokenize, Encoder, FeatureKind, RawColumn, RawDataset, RawValue, VocabularyConfig,
};
use setforest::Vocabulary;

fn main() -> setforest::Result<()> {
    let docs = [
        "the movie was great great fun",
        "the plot was thin",
        "great cast , thin plot",
        "The movie was fun",
    ];
    for d in &docs {
        println!("{d:<32} -> {:?}", tokenize(d));
    }

    // Terms must appear in at least 2 documents; keep the 5 most frequent.
    let vocab = Vocabulary::build(docs.iter().map(|d| tokenize(d)), 5, 2);
    for (id, (term, freq)) in vocab.terms().iter().zip(vocab.frequencies()).enumerate() {
        println!("id {id}: {term:<6} df {freq}");
    }
    println!(
        "encode \"thin unseen was\" -> {:?}",
        encode_set(&tokenize("thin unseen was"), &vocab)
    );

    let raw = RawDataset {
        columns: vec![RawColumn {
            name: "text".into(),
            kind: FeatureKind::CategoricalSet,
        }],
        rows: vec![
            vec![RawValue::Tokens(tokenize(docs[0]))],
            vec![RawValue::Tokens(tokenize(docs[1]))],
            vec![RawValue::Tokens(vec![])],
            vec![RawValue::Missing],
            vec![RawValue::Tokens(tokenize("never seen before"))],
        ],
        labels: vec![1, 0, 0, 1, 0],
        weights: None,
    };
    let config = VocabularyConfig {
        max_size: 100,
        min_frequency: 1,
    };
    let encoder = Encoder::fit(&raw, &config)?;
    let encoded = encoder.encode(&raw)?;
    for i in 0..encoded.len() {
        println!("row {i}: {:?}", encoded.values(i));
    }
    Ok(())
}
