//! Seeded synthetic text corpora.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dataset::RawDataset;
use crate::rng::stream;

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedCorpusConfig {
    pub num_examples: usize,
    pub vocabulary_size: usize,
    pub num_signal_terms: usize,
    /// Probability that a document receives signal terms.
    pub positive_rate: f64,
    /// Probability that a label is flipped after generation.
    pub label_noise: f64,
    pub min_length: usize,
    pub max_length: usize,
    pub seed: u64,
}

impl Default for PlantedCorpusConfig {
    /// 5000 documents over 500 terms, 10 of which carry the signal.
    fn default() -> Self {
        PlantedCorpusConfig {
            num_examples: 5000,
            vocabulary_size: 500,
            num_signal_terms: 10,
            positive_rate: 0.5,
            label_noise: 0.01,
            min_length: 8,
            max_length: 20,
            seed: 2020,
        }
    }
}

/// `w000`, `w001`, ...
pub fn term_name(i: usize) -> String {
    format!("w{i:03}")
}

/// Signal terms are spread evenly over the vocabulary.
pub fn signal_terms(config: &PlantedCorpusConfig) -> Vec<String> {
    let step = config.vocabulary_size / config.num_signal_terms.max(1);
    (0..config.num_signal_terms)
        .map(|i| term_name(i * step + step / 2))
        .collect()
}

/// A document is positive iff it contains a signal term, before label
/// noise. Positive documents get one to three signal terms mixed into
/// noise terms.
pub fn planted_corpus(config: &PlantedCorpusConfig) -> (Vec<String>, Vec<u8>) {
    let mut rng = stream(config.seed);
    let signal = signal_terms(config);
    let noise: Vec<String> = (0..config.vocabulary_size)
        .map(term_name)
        .filter(|t| !signal.contains(t))
        .collect();
    let mut texts = Vec::with_capacity(config.num_examples);
    let mut labels = Vec::with_capacity(config.num_examples);
    for _ in 0..config.num_examples {
        let length = rng.gen_range(config.min_length..=config.max_length);
        let mut tokens: Vec<&str> = (0..length)
            .map(|_| noise.choose(&mut rng).expect("noise terms").as_str())
            .collect();
        let positive = rng.gen_bool(config.positive_rate);
        if positive {
            for _ in 0..rng.gen_range(1..=3) {
                tokens.push(signal.choose(&mut rng).expect("signal terms"));
            }
            tokens.shuffle(&mut rng);
        }
        let flip = rng.gen_bool(config.label_noise);
        texts.push(tokens.join(" "));
        labels.push((positive != flip) as u8);
    }
    (texts, labels)
}

/// Documents whose labels are independent of their text.
pub fn noise_corpus(
    num_examples: usize,
    vocabulary_size: usize,
    seed: u64,
) -> (Vec<String>, Vec<u8>) {
    let mut rng = stream(seed);
    let mut texts = Vec::with_capacity(num_examples);
    let mut labels = Vec::with_capacity(num_examples);
    for _ in 0..num_examples {
        let length = rng.gen_range(8..=20);
        let tokens: Vec<String> = (0..length)
            .map(|_| term_name(rng.gen_range(0..vocabulary_size)))
            .collect();
        texts.push(tokens.join(" "));
        labels.push(rng.gen_bool(0.5) as u8);
    }
    (texts, labels)
}

/// CSV text with a numerical `price`, a categorical `color`, a set of
/// `tags` and a binary `label`. About 5% of prices and colors are missing.
pub fn mixed_csv(num_examples: usize, seed: u64) -> String {
    let mut rng = stream(seed);
    let colors = ["red", "green", "blue"];
    let tags = ["sale", "new", "eco", "bulk", "gift", "promo"];
    let mut csv = String::from("price,color,tags,label\n");
    for _ in 0..num_examples {
        let price: f64 = rng.gen_range(1.0..100.0);
        let color = colors[rng.gen_range(0..colors.len())];
        let chosen: Vec<&str> = tags.iter().copied().filter(|_| rng.gen_bool(0.3)).collect();
        let signal = (price < 30.0) != (chosen.contains(&"sale") && color == "red");
        let label = (signal != rng.gen_bool(0.05)) as u8;
        let price = if rng.gen_bool(0.05) {
            String::new()
        } else {
            format!("{price:.2}")
        };
        let color = if rng.gen_bool(0.05) { "" } else { color };
        csv.push_str(&format!(
            "{price},{color},{{{}}},{label}\n",
            chosen.join(" ")
        ));
    }
    csv
}

/// `<label>\t<text>` lines.
pub fn to_tsv(texts: &[String], labels: &[u8]) -> String {
    texts
        .iter()
        .zip(labels)
        .map(|(t, l)| format!("{l}\t{t}\n"))
        .collect()
}

pub fn to_raw(texts: &[String], labels: &[u8]) -> RawDataset {
    RawDataset::from_texts(texts, labels.to_vec())
}
