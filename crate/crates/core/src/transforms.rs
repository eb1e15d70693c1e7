//! Baseline transformations of categorical-set columns.
//!
//! A chain is applied left to right. The first step rewrites every column of
//! the type it accepts; each later step rewrites the columns produced by the
//! step before it. Other columns pass through untouched.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use twox_hash::XxHash64;

use crate::dataset::{
    Column, Dataset, FeatureKind, FeatureSpec, SetColumn, Vocabulary, MISSING_CATEGORY,
};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// XXH64 of the UTF-8 bytes of `term`.
pub fn hash64(term: &str, seed: u64) -> u64 {
    XxHash64::oneshot(seed, term.as_bytes())
}

/// Binary term-presence vector of length `m`.
pub fn bag_of_words(set: &[u32], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m];
    for &t in set {
        out[t as usize] = 1.0;
    }
    out
}

/// Like [`bag_of_words`] with categorical outputs: 1 = present, 0 = absent.
pub fn one_hot(set: &[u32], m: usize) -> Vec<u32> {
    let mut out = vec![0; m];
    for &t in set {
        out[t as usize] = 1;
    }
    out
}

/// Value returned by [`max_hash`] for an empty set.
pub const EMPTY_SET_HASH: u64 = 0;

/// `out[i] = max over terms of hash64(term, seeds[i])`.
pub fn max_hash<S: AsRef<str>>(terms: &[S], seeds: &[u64]) -> Vec<u64> {
    seeds
        .iter()
        .map(|&seed| {
            terms
                .iter()
                .map(|t| hash64(t.as_ref(), seed))
                .max()
                .unwrap_or(EMPTY_SET_HASH)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    #[serde(alias = "bag_of_words")]
    BagOfWords,
    #[serde(alias = "one_hot")]
    OneHot,
    #[serde(alias = "max_hash")]
    MaxHash,
    #[serde(alias = "target_mean")]
    TargetMean,
}

impl TransformKind {
    pub fn name(&self) -> &'static str {
        match self {
            TransformKind::BagOfWords => "BagOfWords",
            TransformKind::OneHot => "OneHot",
            TransformKind::MaxHash => "MaxHash",
            TransformKind::TargetMean => "TargetMean",
        }
    }

    fn accepts(&self, kind: FeatureKind) -> bool {
        match self {
            TransformKind::BagOfWords | TransformKind::MaxHash => {
                kind == FeatureKind::CategoricalSet
            }
            TransformKind::OneHot => kind != FeatureKind::Numerical,
            TransformKind::TargetMean => kind == FeatureKind::Categorical,
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "bagofwords" | "bow" => Ok(TransformKind::BagOfWords),
            "onehot" => Ok(TransformKind::OneHot),
            "maxhash" => Ok(TransformKind::MaxHash),
            "targetmean" => Ok(TransformKind::TargetMean),
            _ => Err(Error::Config(format!("unknown transform `{s}`"))),
        }
    }
}

/// Parameters shared by every transform kind; each kind reads its own.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransformParams {
    /// MaxHash repetitions.
    pub k: usize,
    /// Base seed from which the MaxHash seeds are derived.
    pub seed: u64,
    /// TargetMean pseudo-count pulling rare values towards the prior.
    pub smoothing: f64,
    /// Most frequent values kept per categorical column by OneHot.
    pub max_values: usize,
}

impl Default for TransformParams {
    fn default() -> Self {
        TransformParams {
            k: 32,
            seed: 0x5EED,
            smoothing: 10.0,
            max_values: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub kind: TransformKind,
    /// MaxHash seeds, one per repetition.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub smoothing: f64,
    pub max_values: usize,
}

impl TransformSpec {
    pub fn new(kind: TransformKind, params: &TransformParams) -> Result<Self> {
        let seeds = if kind == TransformKind::MaxHash {
            max_hash_seeds(params.k, params.seed)
        } else {
            Vec::new()
        };
        let spec = TransformSpec {
            kind,
            seeds,
            smoothing: params.smoothing,
            max_values: params.max_values,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == TransformKind::MaxHash {
            if self.seeds.is_empty() {
                return Err(Error::Config("MaxHash needs k >= 1".into()));
            }
            let mut sorted = self.seeds.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != self.seeds.len() {
                return Err(Error::Config("MaxHash seeds must be distinct".into()));
            }
        }
        if !(self.smoothing >= 0.0 && self.smoothing.is_finite()) {
            return Err(Error::Config(
                "TargetMean smoothing must be non-negative".into(),
            ));
        }
        if self.kind == TransformKind::OneHot && self.max_values == 0 {
            return Err(Error::Config("OneHot max_values must be at least 1".into()));
        }
        Ok(())
    }
}

/// `k` distinct seeds: `derive_seed(base, i)` for `i = 0, 1, ...`, skipping
/// repeats.
pub fn max_hash_seeds(k: usize, base: u64) -> Vec<u64> {
    let mut seeds = Vec::with_capacity(k);
    let mut i = 0;
    while seeds.len() < k {
        let s = derive_seed(base, i);
        if !seeds.contains(&s) {
            seeds.push(s);
        }
        i += 1;
    }
    seeds
}

/// Smoothed positive ratio per category of one column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetMeanTable {
    /// Indexed by category id.
    pub ratios: Vec<f64>,
    /// Positive ratio over all training rows.
    pub prior: f64,
}

impl TargetMeanTable {
    /// Missing and unseen categories map to the prior.
    pub fn get(&self, category: u32) -> f64 {
        self.ratios
            .get(category as usize)
            .copied()
            .unwrap_or(self.prior)
    }
}

/// `ratio[v] = (positives(v) + smoothing * prior) / (count(v) + smoothing)`.
pub fn fit_target_mean(train: &Dataset, column: usize, smoothing: f64) -> Result<TargetMeanTable> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let Column::Categorical(values) = train.column(column) else {
        return Err(Error::TransformMismatch {
            transform: TransformKind::TargetMean.name().into(),
            column: train.schema()[column].name.clone(),
            found: train.column(column).kind().to_string(),
        });
    };
    let labels = train.labels();
    let prior = labels.iter().map(|&l| l as f64).sum::<f64>() / labels.len() as f64;
    let domain = train.schema()[column].domain_size();
    let mut counts = vec![(0.0f64, 0.0f64); domain];
    for (&v, &l) in values.iter().zip(labels) {
        if v != MISSING_CATEGORY {
            counts[v as usize].0 += l as f64;
            counts[v as usize].1 += 1.0;
        }
    }
    let ratios = counts
        .into_iter()
        .map(|(pos, n)| {
            if n + smoothing > 0.0 {
                (pos + smoothing * prior) / (n + smoothing)
            } else {
                prior
            }
        })
        .collect();
    Ok(TargetMeanTable { ratios, prior })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Fitted {
    BagOfWords,
    OneHot {
        /// Per rewritten column: category ids that get an indicator column.
        kept: Vec<Vec<u32>>,
    },
    MaxHash {
        seeds: Vec<u64>,
        /// Per rewritten column and slot: the hash values seen in training.
        vocabularies: Vec<Vec<Vocabulary>>,
    },
    TargetMean {
        tables: Vec<TargetMeanTable>,
    },
}

/// One fitted step of a chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedStep {
    pub spec: TransformSpec,
    fitted: Fitted,
}

/// A transform chain fitted on a training partition.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FittedChain {
    pub steps: Vec<FittedStep>,
}

type Output = Vec<(FeatureSpec, Column)>;

fn hash_name(value: u64) -> String {
    format!("{value:016x}")
}

impl FittedChain {
    /// Fits every step on `train` and returns the transformed training data.
    pub fn fit(train: &Dataset, chain: &[TransformSpec]) -> Result<(Self, Dataset)> {
        let mut current = train.clone();
        let mut targets = None;
        let mut steps = Vec::with_capacity(chain.len());
        for spec in chain {
            spec.validate()?;
            let cols = resolve_targets(&current, spec.kind, targets.as_deref())?;
            let fitted = fit_step(&current, spec, &cols)?;
            let step = FittedStep {
                spec: spec.clone(),
                fitted,
            };
            let (next, produced) = step.apply_to(&current, &cols)?;
            current = next;
            targets = Some(produced);
            steps.push(step);
        }
        Ok((FittedChain { steps }, current))
    }

    /// Applies the fitted steps without reading labels.
    pub fn apply(&self, dataset: &Dataset) -> Result<Dataset> {
        let mut current = dataset.clone();
        let mut targets = None;
        for step in &self.steps {
            let cols = resolve_targets(&current, step.spec.kind, targets.as_deref())?;
            let (next, produced) = step.apply_to(&current, &cols)?;
            current = next;
            targets = Some(produced);
        }
        Ok(current)
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn resolve_targets(
    dataset: &Dataset,
    kind: TransformKind,
    previous: Option<&[usize]>,
) -> Result<Vec<usize>> {
    let targets: Vec<usize> = match previous {
        Some(p) => p.to_vec(),
        None => (0..dataset.num_features())
            .filter(|&c| kind.accepts(dataset.schema()[c].kind))
            .collect(),
    };
    if targets.is_empty() {
        return Err(Error::TransformMismatch {
            transform: kind.name().into(),
            column: "<none>".into(),
            found: "no matching column".into(),
        });
    }
    for &c in &targets {
        let spec = &dataset.schema()[c];
        if !kind.accepts(spec.kind) {
            return Err(Error::TransformMismatch {
                transform: kind.name().into(),
                column: spec.name.clone(),
                found: spec.kind.to_string(),
            });
        }
    }
    Ok(targets)
}

/// Hashes of every vocabulary term under every seed: `[term][slot]`.
fn term_hashes(vocabulary: &Vocabulary, seeds: &[u64]) -> Vec<Vec<u64>> {
    vocabulary
        .terms()
        .iter()
        .map(|t| seeds.iter().map(|&s| hash64(t, s)).collect())
        .collect()
}

/// Per-row MaxHash values of a set column; `None` for missing rows.
fn max_hash_rows(sets: &SetColumn, hashes: &[Vec<u64>], k: usize) -> Vec<Option<Vec<u64>>> {
    (0..sets.len())
        .map(|r| {
            sets.get(r).map(|ids| {
                let mut out = vec![EMPTY_SET_HASH; k];
                for &t in ids {
                    for (o, &h) in out.iter_mut().zip(&hashes[t as usize]) {
                        *o = (*o).max(h);
                    }
                }
                out
            })
        })
        .collect()
}

fn fit_step(train: &Dataset, spec: &TransformSpec, cols: &[usize]) -> Result<Fitted> {
    Ok(match spec.kind {
        TransformKind::BagOfWords => Fitted::BagOfWords,
        TransformKind::OneHot => Fitted::OneHot {
            kept: cols
                .iter()
                .map(|&c| {
                    let schema = &train.schema()[c];
                    let domain = schema.domain_size() as u32;
                    match schema.kind {
                        FeatureKind::CategoricalSet => (0..domain).collect(),
                        _ => (0..domain.min(spec.max_values as u32)).collect(),
                    }
                })
                .collect(),
        },
        TransformKind::MaxHash => {
            let k = spec.seeds.len();
            let vocabularies = cols
                .iter()
                .map(|&c| {
                    let Column::CategoricalSet(sets) = train.column(c) else {
                        unreachable!("targets were type-checked")
                    };
                    let vocab = train.schema()[c].vocabulary.clone().unwrap_or_default();
                    let rows = max_hash_rows(sets, &term_hashes(&vocab, &spec.seeds), k);
                    (0..k)
                        .map(|slot| {
                            Vocabulary::build(
                                rows.iter().flatten().map(|h| vec![hash_name(h[slot])]),
                                usize::MAX,
                                1,
                            )
                        })
                        .collect()
                })
                .collect();
            Fitted::MaxHash {
                seeds: spec.seeds.clone(),
                vocabularies,
            }
        }
        TransformKind::TargetMean => Fitted::TargetMean {
            tables: cols
                .iter()
                .map(|&c| fit_target_mean(train, c, spec.smoothing))
                .collect::<Result<_>>()?,
        },
    })
}

impl FittedStep {
    /// Rewrites `cols` of `dataset`; returns the new dataset and the
    /// positions of the produced columns.
    fn apply_to(&self, dataset: &Dataset, cols: &[usize]) -> Result<(Dataset, Vec<usize>)> {
        let expected = match &self.fitted {
            Fitted::BagOfWords => cols.len(),
            Fitted::OneHot { kept } => kept.len(),
            Fitted::MaxHash { vocabularies, .. } => vocabularies.len(),
            Fitted::TargetMean { tables } => tables.len(),
        };
        if expected != cols.len() {
            return Err(Error::Schema(format!(
                "{} was fitted on {expected} columns but the input has {}",
                self.spec.kind,
                cols.len()
            )));
        }
        let mut schema = Vec::new();
        let mut columns = Vec::new();
        let mut produced = Vec::new();
        let mut next_target = 0;
        for c in 0..dataset.num_features() {
            if cols.get(next_target) == Some(&c) {
                let outputs = self.rewrite(dataset, c, next_target);
                next_target += 1;
                for (spec, column) in outputs {
                    produced.push(schema.len());
                    schema.push(spec);
                    columns.push(column);
                }
            } else {
                schema.push(dataset.schema()[c].clone());
                columns.push(dataset.column(c).clone());
            }
        }
        let out = Dataset::new(
            schema,
            columns,
            dataset.labels().to_vec(),
            Some(dataset.weights().to_vec()),
        )?;
        Ok((out, produced))
    }

    fn rewrite(&self, dataset: &Dataset, c: usize, target: usize) -> Output {
        let source = &dataset.schema()[c];
        let n = dataset.len();
        match (&self.fitted, dataset.column(c)) {
            (Fitted::BagOfWords, Column::CategoricalSet(sets)) => {
                let vocab = source.vocabulary.clone().unwrap_or_default();
                let mut out = vec![vec![0.0; n]; vocab.len()];
                for r in 0..n {
                    match sets.get(r) {
                        Some(ids) => {
                            for &t in ids {
                                out[t as usize][r] = 1.0;
                            }
                        }
                        None => out.iter_mut().for_each(|col| col[r] = f64::NAN),
                    }
                }
                out.into_iter()
                    .zip(vocab.terms())
                    .map(|(col, term)| {
                        (
                            FeatureSpec::numerical(format!("{}={term}", source.name)),
                            Column::Numerical(col),
                        )
                    })
                    .collect()
            }
            (Fitted::OneHot { kept }, column) => {
                let vocab = source.vocabulary.clone().unwrap_or_default();
                let presence = || Vocabulary::from_terms(["absent", "present"]);
                kept[target]
                    .iter()
                    .map(|&v| {
                        let values = (0..n)
                            .map(|r| match column {
                                Column::CategoricalSet(sets) => {
                                    sets.get(r).map_or(MISSING_CATEGORY, |ids| {
                                        ids.binary_search(&v).is_ok() as u32
                                    })
                                }
                                Column::Categorical(cats) => match cats[r] {
                                    MISSING_CATEGORY => MISSING_CATEGORY,
                                    x => (x == v) as u32,
                                },
                                Column::Numerical(_) => unreachable!("targets were type-checked"),
                            })
                            .collect();
                        let name = format!("{}={}", source.name, vocab.term(v).unwrap_or("?"));
                        (
                            FeatureSpec::categorical(name, presence()),
                            Column::Categorical(values),
                        )
                    })
                    .collect()
            }
            (
                Fitted::MaxHash {
                    seeds,
                    vocabularies,
                },
                Column::CategoricalSet(sets),
            ) => {
                let vocab = source.vocabulary.clone().unwrap_or_default();
                let rows = max_hash_rows(sets, &term_hashes(&vocab, seeds), seeds.len());
                vocabularies[target]
                    .iter()
                    .enumerate()
                    .map(|(slot, slot_vocab)| {
                        let values = rows
                            .iter()
                            .map(|h| {
                                h.as_ref()
                                    .and_then(|h| slot_vocab.id(&hash_name(h[slot])))
                                    .unwrap_or(MISSING_CATEGORY)
                            })
                            .collect();
                        (
                            FeatureSpec::categorical(
                                format!("{}#maxhash{slot}", source.name),
                                slot_vocab.clone(),
                            ),
                            Column::Categorical(values),
                        )
                    })
                    .collect()
            }
            (Fitted::TargetMean { tables }, Column::Categorical(cats)) => {
                let table = &tables[target];
                let values = cats.iter().map(|&v| table.get(v)).collect();
                vec![(
                    FeatureSpec::numerical(format!("{}#targetmean", source.name)),
                    Column::Numerical(values),
                )]
            }
            _ => unreachable!("targets were type-checked"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Encoder, RawDataset, VocabularyConfig};
    use proptest::prelude::*;

    #[test]
    fn hash_reference_vectors() {
        assert_eq!(hash64("", 0), 0xEF46DB3751D8E999);
        assert_ne!(hash64("a", 0), hash64("a", 1));
    }

    #[test]
    fn bag_of_words_examples() {
        assert_eq!(bag_of_words(&[0, 2], 4), vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(bag_of_words(&[], 3), vec![0.0; 3]);
        let set = [0, 1, 2];
        let oracle: Vec<f64> = (0..3u32).map(|i| set.contains(&i) as u8 as f64).collect();
        assert_eq!(bag_of_words(&set, 3), oracle);
    }

    #[test]
    fn one_hot_examples() {
        assert_eq!(one_hot(&[0, 2], 4), vec![1, 0, 1, 0]);
        assert_eq!(one_hot(&[], 3), vec![0; 3]);
        assert_eq!(one_hot(&[0, 1, 2], 3), vec![1, 1, 1]);
    }

    #[test]
    fn max_hash_examples() {
        let seeds = max_hash_seeds(2, 7);
        assert_eq!(max_hash::<&str>(&[], &seeds), vec![0, 0]);
        assert_eq!(
            max_hash(&["t"], &seeds),
            vec![hash64("t", seeds[0]), hash64("t", seeds[1])]
        );
        let one = &seeds[..1];
        let expected = hash64("t1", one[0]).max(hash64("t2", one[0]));
        assert_eq!(max_hash(&["t1", "t2"], one), vec![expected]);
    }

    #[test]
    fn seeds_are_distinct_and_deterministic() {
        let s = max_hash_seeds(32, 1);
        assert_eq!(s, max_hash_seeds(32, 1));
        let mut d = s.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), 32);
        let bad = TransformSpec {
            kind: TransformKind::MaxHash,
            seeds: vec![1, 1],
            smoothing: 0.0,
            max_values: 1,
        };
        assert!(bad.validate().is_err());
    }

    fn categorical_dataset(values: &[&str], labels: Vec<u8>) -> Dataset {
        let raw = RawDataset {
            columns: vec![crate::dataset::RawColumn {
                name: "c".into(),
                kind: FeatureKind::Categorical,
            }],
            rows: values
                .iter()
                .map(|v| vec![crate::dataset::RawValue::Categorical(v.to_string())])
                .collect(),
            labels,
            weights: None,
        };
        Encoder::fit(&raw, &VocabularyConfig::default())
            .unwrap()
            .encode(&raw)
            .unwrap()
    }

    #[test]
    fn target_mean_examples() {
        let ds = categorical_dataset(&["A", "A", "A", "A"], vec![1, 1, 1, 0]);
        let t = fit_target_mean(&ds, 0, 0.0).unwrap();
        assert_eq!(t.get(0), 0.75);
        assert_eq!(t.get(MISSING_CATEGORY), t.prior);
        assert_eq!(t.get(17), 0.75);

        let ds = categorical_dataset(&["A", "A", "B", "B"], vec![1, 0, 1, 0]);
        let t = fit_target_mean(&ds, 0, 10.0).unwrap();
        assert_eq!(t.prior, 0.5);
        let a = ds.schema()[0].vocabulary.as_ref().unwrap().id("A").unwrap();
        assert_eq!(t.get(a), (1.0 + 10.0 * 0.5) / (2.0 + 10.0));
    }

    fn text_dataset() -> Dataset {
        let raw = RawDataset::from_texts(
            &["a b", "a c", "b c d", "", "d a", "c"],
            vec![1, 1, 0, 0, 1, 0],
        );
        let cfg = VocabularyConfig {
            max_size: 10,
            min_frequency: 1,
        };
        Encoder::fit(&raw, &cfg).unwrap().encode(&raw).unwrap()
    }

    fn params() -> TransformParams {
        TransformParams {
            k: 3,
            ..TransformParams::default()
        }
    }

    #[test]
    fn chains_produce_expected_shapes() {
        let ds = text_dataset();
        let m = ds.schema()[0].domain_size();
        let spec = |k| TransformSpec::new(k, &params()).unwrap();

        let (_, out) = FittedChain::fit(&ds, &[spec(TransformKind::BagOfWords)]).unwrap();
        assert_eq!(out.num_features(), m);
        assert!(out
            .schema()
            .iter()
            .all(|s| s.kind == FeatureKind::Numerical));

        let (_, out) = FittedChain::fit(&ds, &[spec(TransformKind::MaxHash)]).unwrap();
        assert_eq!(out.num_features(), 3);
        assert!(out
            .schema()
            .iter()
            .all(|s| s.kind == FeatureKind::Categorical));

        let chain = [
            spec(TransformKind::MaxHash),
            spec(TransformKind::TargetMean),
        ];
        let (fitted, out) = FittedChain::fit(&ds, &chain).unwrap();
        assert_eq!(out.num_features(), 3);
        assert!(out
            .schema()
            .iter()
            .all(|s| s.kind == FeatureKind::Numerical));
        assert_eq!(fitted.apply(&ds).unwrap(), out);

        let chain = [spec(TransformKind::MaxHash), spec(TransformKind::OneHot)];
        let (_, out) = FittedChain::fit(&ds, &chain).unwrap();
        assert!(out.num_features() >= 3);
    }

    #[test]
    fn chain_type_mismatch_is_reported() {
        let ds = text_dataset();
        let spec = |k| TransformSpec::new(k, &params()).unwrap();
        assert!(matches!(
            FittedChain::fit(&ds, &[spec(TransformKind::TargetMean)]),
            Err(Error::TransformMismatch { .. })
        ));
        let chain = [
            spec(TransformKind::BagOfWords),
            spec(TransformKind::MaxHash),
        ];
        assert!(matches!(
            FittedChain::fit(&ds, &chain),
            Err(Error::TransformMismatch { .. })
        ));
    }

    #[test]
    fn apply_ignores_labels() {
        let ds = text_dataset();
        let chain = [
            TransformSpec::new(TransformKind::MaxHash, &params()).unwrap(),
            TransformSpec::new(TransformKind::TargetMean, &params()).unwrap(),
        ];
        let (fitted, _) = FittedChain::fit(&ds, &chain).unwrap();
        let flipped = Dataset::new(
            ds.schema().to_vec(),
            ds.columns().to_vec(),
            ds.labels().iter().map(|l| 1 - l).collect(),
            None,
        )
        .unwrap();
        let a = fitted.apply(&ds).unwrap();
        let b = fitted.apply(&flipped).unwrap();
        assert_eq!(a.columns(), b.columns());
    }

    #[test]
    fn max_hash_columns_match_direct_hashing() {
        let ds = text_dataset();
        let spec = TransformSpec::new(TransformKind::MaxHash, &params()).unwrap();
        let (_, out) = FittedChain::fit(&ds, std::slice::from_ref(&spec)).unwrap();
        let vocab = ds.schema()[0].vocabulary.clone().unwrap();
        for r in 0..ds.len() {
            let Column::CategoricalSet(sets) = ds.column(0) else {
                unreachable!()
            };
            let terms: Vec<&str> = sets
                .get(r)
                .unwrap()
                .iter()
                .map(|&t| vocab.term(t).unwrap())
                .collect();
            let direct = max_hash(&terms, &spec.seeds);
            for (slot, h) in direct.iter().enumerate() {
                let Column::Categorical(ids) = out.column(slot) else {
                    unreachable!()
                };
                let slot_vocab = out.schema()[slot].vocabulary.as_ref().unwrap();
                assert_eq!(slot_vocab.term(ids[r]).unwrap(), hash_name(*h));
            }
        }
    }

    proptest! {
        #[test]
        fn indicator_sums_equal_set_size(set in proptest::collection::btree_set(0u32..40, 0..20)) {
            let set: Vec<u32> = set.into_iter().collect();
            prop_assert_eq!(bag_of_words(&set, 40).iter().sum::<f64>(), set.len() as f64);
            prop_assert_eq!(one_hot(&set, 40).iter().sum::<u32>() as usize, set.len());
        }

        #[test]
        fn max_hash_is_order_free_and_monotone(
            x in proptest::collection::vec("[a-z]{1,6}", 0..8),
            y in proptest::collection::vec("[a-z]{1,6}", 0..8),
            base in any::<u64>(),
        ) {
            let seeds = max_hash_seeds(4, base);
            let mut rev = x.clone();
            rev.reverse();
            prop_assert_eq!(max_hash(&x, &seeds), max_hash(&rev, &seeds));
            let union: Vec<String> = x.iter().chain(&y).cloned().collect();
            let hx = max_hash(&x, &seeds);
            let hu = max_hash(&union, &seeds);
            prop_assert!(hx.iter().zip(&hu).all(|(a, b)| b >= a));
        }

        #[test]
        fn target_mean_stays_within_bounds(
            rows in proptest::collection::vec((0usize..4, 0u8..2), 1..40),
            smoothing in 0.0f64..20.0,
        ) {
            let names = ["p", "q", "r", "s"];
            let values: Vec<&str> = rows.iter().map(|r| names[r.0]).collect();
            let labels: Vec<u8> = rows.iter().map(|r| r.1).collect();
            let ds = categorical_dataset(&values, labels);
            let t = fit_target_mean(&ds, 0, smoothing).unwrap();
            let vocab = ds.schema()[0].vocabulary.clone().unwrap();
            for (id, r) in t.ratios.iter().enumerate() {
                let name = vocab.term(id as u32).unwrap();
                let hits: Vec<u8> = rows.iter().filter(|x| names[x.0] == name).map(|x| x.1).collect();
                let raw = hits.iter().map(|&l| l as f64).sum::<f64>() / hits.len() as f64;
                let (lo, hi) = (raw.min(t.prior), raw.max(t.prior));
                prop_assert!(*r >= lo - 1e-12 && *r <= hi + 1e-12);
                prop_assert!((0.0..=1.0).contains(r));
            }
        }
    }
}
