//! Examples, feature values and vocabularies.
//!
//! Raw inputs ([`RawDataset`]) carry token strings. They are turned into an
//! encoded, column-major [`Dataset`] by an [`Encoder`] whose vocabularies were
//! built on a training partition only.

mod io;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_csv, load_text_corpus, parse_text_corpus, CsvColumn, CsvSchema};

/// Sentinel stored in categorical columns for missing values.
pub const MISSING_CATEGORY: u32 = u32::MAX;

/// Splits `text` on runs of ASCII whitespace and returns the distinct tokens,
/// sorted. Case is preserved.
pub fn tokenize(text: &str) -> Vec<String> {
    let set: BTreeSet<&str> = text.split_ascii_whitespace().collect();
    set.into_iter().map(str::to_owned).collect()
}

/// Dense term dictionary.
///
/// Built vocabularies order terms by descending document frequency with a
/// lexicographic tie-break; ids are positions in that order.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "VocabularyDocument", into = "VocabularyDocument")]
pub struct Vocabulary {
    terms: Vec<String>,
    frequencies: Vec<u64>,
    index: HashMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyDocument {
    terms: Vec<String>,
    frequencies: Vec<u64>,
}

impl From<VocabularyDocument> for Vocabulary {
    fn from(doc: VocabularyDocument) -> Self {
        Vocabulary::from_parts(doc.terms, doc.frequencies)
    }
}

impl From<Vocabulary> for VocabularyDocument {
    fn from(v: Vocabulary) -> Self {
        VocabularyDocument {
            terms: v.terms,
            frequencies: v.frequencies,
        }
    }
}

impl fmt::Debug for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Vocabulary")
            .field("len", &self.terms.len())
            .field("terms", &self.terms.iter().take(8).collect::<Vec<_>>())
            .finish()
    }
}

impl Vocabulary {
    /// Counts the number of documents containing each term, keeps terms seen
    /// in at least `min_frequency` documents and truncates to the `max_size`
    /// most frequent ones.
    pub fn build<D, T>(corpus: D, max_size: usize, min_frequency: u64) -> Self
    where
        D: IntoIterator,
        D::Item: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut counts: HashMap<String, u64> = HashMap::new();
        for doc in corpus {
            let unique: BTreeSet<String> = doc.into_iter().map(|t| t.as_ref().to_owned()).collect();
            for term in unique {
                *counts.entry(term).or_insert(0) += 1;
            }
        }
        let mut ranked: Vec<(String, u64)> = counts
            .into_iter()
            .filter(|(_, c)| *c >= min_frequency.max(1))
            .collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(max_size);
        let (terms, frequencies) = ranked.into_iter().unzip();
        Self::from_parts(terms, frequencies)
    }

    /// Vocabulary with a fixed term order and zero frequencies.
    pub fn from_terms<I: IntoIterator<Item = S>, S: Into<String>>(terms: I) -> Self {
        let terms: Vec<String> = terms.into_iter().map(Into::into).collect();
        let frequencies = vec![0; terms.len()];
        Self::from_parts(terms, frequencies)
    }

    fn from_parts(terms: Vec<String>, frequencies: Vec<u64>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocabulary {
            terms,
            frequencies,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: u32) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }
}

/// Maps tokens to vocabulary ids, dropping out-of-vocabulary tokens. The
/// result is sorted and duplicate-free.
pub fn encode_set<T: AsRef<str>>(tokens: &[T], vocabulary: &Vocabulary) -> Vec<u32> {
    let mut ids: Vec<u32> = tokens
        .iter()
        .filter_map(|t| vocabulary.id(t.as_ref()))
        .collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Numerical,
    Categorical,
    CategoricalSet,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Numerical => "numerical",
            FeatureKind::Categorical => "categorical",
            FeatureKind::CategoricalSet => "categorical-set",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    /// Domain of categorical and categorical-set features.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vocabulary: Option<Vocabulary>,
}

impl FeatureSpec {
    pub fn numerical(name: impl Into<String>) -> Self {
        FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Numerical,
            vocabulary: None,
        }
    }

    pub fn categorical(name: impl Into<String>, vocabulary: Vocabulary) -> Self {
        FeatureSpec {
            name: name.into(),
            kind: FeatureKind::Categorical,
            vocabulary: Some(vocabulary),
        }
    }

    pub fn categorical_set(name: impl Into<String>, vocabulary: Vocabulary) -> Self {
        FeatureSpec {
            name: name.into(),
            kind: FeatureKind::CategoricalSet,
            vocabulary: Some(vocabulary),
        }
    }

    /// Number of distinct values for categorical features, vocabulary size for
    /// categorical-set features, 0 otherwise.
    pub fn domain_size(&self) -> usize {
        self.vocabulary.as_ref().map_or(0, Vocabulary::len)
    }
}

/// One encoded feature value.
///
/// An empty `CategoricalSet` is a legal value distinct from `Missing`.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureValue {
    Numerical(f64),
    Categorical(u32),
    CategoricalSet(Vec<u32>),
    Missing,
}

/// Read access to one example's encoded features.
pub trait Example {
    fn numerical(&self, feature: usize) -> Option<f64>;
    fn categorical(&self, feature: usize) -> Option<u32>;
    fn categorical_set(&self, feature: usize) -> Option<&[u32]>;
}

impl Example for [FeatureValue] {
    fn numerical(&self, feature: usize) -> Option<f64> {
        match self.get(feature) {
            Some(FeatureValue::Numerical(v)) if !v.is_nan() => Some(*v),
            _ => None,
        }
    }

    fn categorical(&self, feature: usize) -> Option<u32> {
        match self.get(feature) {
            Some(FeatureValue::Categorical(v)) => Some(*v),
            _ => None,
        }
    }

    fn categorical_set(&self, feature: usize) -> Option<&[u32]> {
        match self.get(feature) {
            Some(FeatureValue::CategoricalSet(v)) => Some(v.as_slice()),
            _ => None,
        }
    }
}

/// Compressed storage of a categorical-set column.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SetColumn {
    offsets: Vec<usize>,
    terms: Vec<u32>,
    missing: Vec<bool>,
}

impl SetColumn {
    pub fn new() -> Self {
        SetColumn {
            offsets: vec![0],
            terms: Vec::new(),
            missing: Vec::new(),
        }
    }

    /// Appends a canonical (sorted, duplicate-free) set, or a missing value.
    pub fn push(&mut self, value: Option<&[u32]>) {
        match value {
            Some(ids) => {
                debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
                self.terms.extend_from_slice(ids);
                self.missing.push(false);
            }
            None => self.missing.push(true),
        }
        self.offsets.push(self.terms.len());
    }

    pub fn len(&self) -> usize {
        self.missing.len()
    }

    pub fn is_empty(&self) -> bool {
        self.missing.is_empty()
    }

    pub fn get(&self, row: usize) -> Option<&[u32]> {
        if self.missing[row] {
            None
        } else {
            Some(&self.terms[self.offsets[row]..self.offsets[row + 1]])
        }
    }
}

impl FromIterator<Option<Vec<u32>>> for SetColumn {
    fn from_iter<I: IntoIterator<Item = Option<Vec<u32>>>>(iter: I) -> Self {
        let mut column = SetColumn::new();
        for v in iter {
            column.push(v.as_deref());
        }
        column
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    /// NaN encodes a missing value.
    Numerical(Vec<f64>),
    /// [`MISSING_CATEGORY`] encodes a missing value.
    Categorical(Vec<u32>),
    CategoricalSet(SetColumn),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Numerical(v) => v.len(),
            Column::Categorical(v) => v.len(),
            Column::CategoricalSet(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> FeatureKind {
        match self {
            Column::Numerical(_) => FeatureKind::Numerical,
            Column::Categorical(_) => FeatureKind::Categorical,
            Column::CategoricalSet(_) => FeatureKind::CategoricalSet,
        }
    }

    fn select(&self, rows: &[usize]) -> Column {
        match self {
            Column::Numerical(v) => Column::Numerical(rows.iter().map(|&r| v[r]).collect()),
            Column::Categorical(v) => Column::Categorical(rows.iter().map(|&r| v[r]).collect()),
            Column::CategoricalSet(v) => {
                let mut out = SetColumn::new();
                for &r in rows {
                    out.push(v.get(r));
                }
                Column::CategoricalSet(out)
            }
        }
    }
}

/// Encoded, column-major training or evaluation data with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: Vec<FeatureSpec>,
    columns: Vec<Column>,
    labels: Vec<u8>,
    weights: Vec<f64>,
}

impl Dataset {
    /// Validates and assembles a dataset. `weights` defaults to all ones.
    pub fn new(
        schema: Vec<FeatureSpec>,
        columns: Vec<Column>,
        labels: Vec<u8>,
        weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = labels.len();
        if schema.len() != columns.len() {
            return Err(Error::Schema(format!(
                "{} feature specs for {} columns",
                schema.len(),
                columns.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::Schema(format!("label {bad} is not binary")));
        }
        let weights = weights.unwrap_or_else(|| vec![1.0; n]);
        if weights.len() != n {
            return Err(Error::Schema("weights and labels differ in length".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::Schema("weights must be positive and finite".into()));
        }
        for (spec, column) in schema.iter().zip(&columns) {
            if spec.kind != column.kind() {
                return Err(Error::Schema(format!(
                    "feature `{}` declared {} but stored as {}",
                    spec.name,
                    spec.kind,
                    column.kind()
                )));
            }
            if column.len() != n {
                return Err(Error::Schema(format!(
                    "feature `{}` has {} rows, expected {n}",
                    spec.name,
                    column.len()
                )));
            }
            let domain = spec.domain_size() as u32;
            match column {
                Column::Numerical(_) => {}
                Column::Categorical(values) => {
                    if values.iter().any(|&v| v != MISSING_CATEGORY && v >= domain) {
                        return Err(Error::Schema(format!(
                            "feature `{}` has a category outside its domain",
                            spec.name
                        )));
                    }
                }
                Column::CategoricalSet(sets) => {
                    for row in 0..sets.len() {
                        if let Some(ids) = sets.get(row) {
                            let canonical = ids.windows(2).all(|w| w[0] < w[1]);
                            if !canonical || ids.last().is_some_and(|&t| t >= domain) {
                                return Err(Error::Schema(format!(
                                    "feature `{}` row {row}: term set is not canonical \
                                     or exceeds the vocabulary",
                                    spec.name
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(Dataset {
            schema,
            columns,
            labels,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn schema(&self) -> &[FeatureSpec] {
        &self.schema
    }

    pub fn num_features(&self) -> usize {
        self.schema.len()
    }

    pub fn column(&self, feature: usize) -> &Column {
        &self.columns[feature]
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn row(&self, index: usize) -> Row<'_> {
        Row {
            dataset: self,
            index,
        }
    }

    pub fn values(&self, index: usize) -> Vec<FeatureValue> {
        let row = self.row(index);
        (0..self.num_features())
            .map(|f| match &self.columns[f] {
                Column::Numerical(_) => row
                    .numerical(f)
                    .map_or(FeatureValue::Missing, FeatureValue::Numerical),
                Column::Categorical(_) => row
                    .categorical(f)
                    .map_or(FeatureValue::Missing, FeatureValue::Categorical),
                Column::CategoricalSet(_) => {
                    row.categorical_set(f).map_or(FeatureValue::Missing, |s| {
                        FeatureValue::CategoricalSet(s.to_vec())
                    })
                }
            })
            .collect()
    }

    /// Copies the given rows, in order, into a new dataset.
    pub fn select(&self, rows: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            columns: self.columns.iter().map(|c| c.select(rows)).collect(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            weights: rows.iter().map(|&r| self.weights[r]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Row<'a> {
    dataset: &'a Dataset,
    index: usize,
}

impl Example for Row<'_> {
    #[inline]
    fn numerical(&self, feature: usize) -> Option<f64> {
        match &self.dataset.columns[feature] {
            Column::Numerical(v) => {
                let x = v[self.index];
                (!x.is_nan()).then_some(x)
            }
            _ => None,
        }
    }

    #[inline]
    fn categorical(&self, feature: usize) -> Option<u32> {
        match &self.dataset.columns[feature] {
            Column::Categorical(v) => {
                let x = v[self.index];
                (x != MISSING_CATEGORY).then_some(x)
            }
            _ => None,
        }
    }

    #[inline]
    fn categorical_set(&self, feature: usize) -> Option<&[u32]> {
        match &self.dataset.columns[feature] {
            Column::CategoricalSet(v) => v.get(self.index),
            _ => None,
        }
    }
}

/// Unencoded value as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum RawValue {
    Numerical(f64),
    Categorical(String),
    /// Deduplicated tokens of a categorical-set cell.
    Tokens(Vec<String>),
    Missing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawColumn {
    pub name: String,
    pub kind: FeatureKind,
}

/// Row-major examples holding token strings, before vocabulary encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub columns: Vec<RawColumn>,
    pub rows: Vec<Vec<RawValue>>,
    pub labels: Vec<u8>,
    pub weights: Option<Vec<f64>>,
}

impl RawDataset {
    /// A single categorical-set column named `text` built by tokenizing each
    /// document.
    pub fn from_texts<S: AsRef<str>>(texts: &[S], labels: Vec<u8>) -> Self {
        RawDataset {
            columns: vec![RawColumn {
                name: "text".into(),
                kind: FeatureKind::CategoricalSet,
            }],
            rows: texts
                .iter()
                .map(|t| vec![RawValue::Tokens(tokenize(t.as_ref()))])
                .collect(),
            labels,
            weights: None,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn select(&self, rows: &[usize]) -> RawDataset {
        RawDataset {
            columns: self.columns.clone(),
            rows: rows.iter().map(|&r| self.rows[r].clone()).collect(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            weights: self
                .weights
                .as_ref()
                .map(|w| rows.iter().map(|&r| w[r]).collect()),
        }
    }

    /// Same rows with labels replaced.
    pub fn with_labels(&self, labels: Vec<u8>) -> RawDataset {
        RawDataset {
            labels,
            ..self.clone()
        }
    }
}

/// Vocabulary pruning parameters for categorical-set columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VocabularyConfig {
    #[serde(default = "VocabularyConfig::default_max_size")]
    pub max_size: usize,
    #[serde(default = "VocabularyConfig::default_min_frequency")]
    pub min_frequency: u64,
}

impl VocabularyConfig {
    fn default_max_size() -> usize {
        5000
    }

    fn default_min_frequency() -> u64 {
        5
    }
}

impl Default for VocabularyConfig {
    fn default() -> Self {
        VocabularyConfig {
            max_size: Self::default_max_size(),
            min_frequency: Self::default_min_frequency(),
        }
    }
}

/// Vocabularies fitted on a training partition.
///
/// Categorical-set columns use the pruned [`VocabularyConfig`]; plain
/// categorical columns keep every value seen at fit time. Unseen categorical
/// values encode as missing; out-of-vocabulary tokens are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    pub columns: Vec<RawColumn>,
    pub vocabularies: Vec<Option<Vocabulary>>,
}

impl Encoder {
    pub fn fit(train: &RawDataset, config: &VocabularyConfig) -> Result<Self> {
        if config.max_size == 0 || config.min_frequency == 0 {
            return Err(Error::Config(
                "vocabulary max_size and min_frequency must be at least 1".into(),
            ));
        }
        let vocabularies = train
            .columns
            .iter()
            .enumerate()
            .map(|(c, column)| match column.kind {
                FeatureKind::Numerical => None,
                FeatureKind::Categorical => Some(Vocabulary::build(
                    train.rows.iter().map(|r| match &r[c] {
                        RawValue::Categorical(s) => vec![s.as_str()],
                        _ => vec![],
                    }),
                    usize::MAX,
                    1,
                )),
                FeatureKind::CategoricalSet => Some(Vocabulary::build(
                    train.rows.iter().map(|r| match &r[c] {
                        RawValue::Tokens(t) => t.iter().map(String::as_str).collect(),
                        _ => vec![],
                    }),
                    config.max_size,
                    config.min_frequency,
                )),
            })
            .collect();
        Ok(Encoder {
            columns: train.columns.clone(),
            vocabularies,
        })
    }

    pub fn encode(&self, raw: &RawDataset) -> Result<Dataset> {
        if raw.columns != self.columns {
            return Err(Error::Schema(
                "input columns differ from the columns the encoder was fitted on".into(),
            ));
        }
        let mut schema = Vec::with_capacity(self.columns.len());
        let mut columns = Vec::with_capacity(self.columns.len());
        for (c, spec) in self.columns.iter().enumerate() {
            let bad = |row: usize| {
                Error::Schema(format!(
                    "row {row}: column `{}` has the wrong type",
                    spec.name
                ))
            };
            match spec.kind {
                FeatureKind::Numerical => {
                    let mut values = Vec::with_capacity(raw.len());
                    for (i, row) in raw.rows.iter().enumerate() {
                        values.push(match &row[c] {
                            RawValue::Numerical(v) => *v,
                            RawValue::Missing => f64::NAN,
                            _ => return Err(bad(i)),
                        });
                    }
                    schema.push(FeatureSpec::numerical(&spec.name));
                    columns.push(Column::Numerical(values));
                }
                FeatureKind::Categorical => {
                    let vocab = self.vocabularies[c].clone().unwrap_or_default();
                    let mut values = Vec::with_capacity(raw.len());
                    for (i, row) in raw.rows.iter().enumerate() {
                        values.push(match &row[c] {
                            RawValue::Categorical(s) => vocab.id(s).unwrap_or(MISSING_CATEGORY),
                            RawValue::Missing => MISSING_CATEGORY,
                            _ => return Err(bad(i)),
                        });
                    }
                    schema.push(FeatureSpec::categorical(&spec.name, vocab));
                    columns.push(Column::Categorical(values));
                }
                FeatureKind::CategoricalSet => {
                    let vocab = self.vocabularies[c].clone().unwrap_or_default();
                    let mut values = SetColumn::new();
                    for (i, row) in raw.rows.iter().enumerate() {
                        match &row[c] {
                            RawValue::Tokens(t) => values.push(Some(&encode_set(t, &vocab))),
                            RawValue::Missing => values.push(None),
                            _ => return Err(bad(i)),
                        }
                    }
                    schema.push(FeatureSpec::categorical_set(&spec.name, vocab));
                    columns.push(Column::CategoricalSet(values));
                }
            }
        }
        Dataset::new(schema, columns, raw.labels.clone(), raw.weights.clone())
    }
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::from_parts(Vec::new(), Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_dedups_and_sorts() {
        assert_eq!(
            tokenize("blue red blue green"),
            set(&["blue", "green", "red"])
        );
        assert!(tokenize("").is_empty());
        assert!(tokenize(" \t\n").is_empty());
        assert_eq!(tokenize("Red red"), set(&["Red", "red"]));
    }

    #[test]
    fn tokenize_matches_whitespace_regex_oracle() {
        // Reference: split on \s+ for ASCII whitespace, drop empties, build a set.
        let text = "a\tb  c";
        let mut oracle: Vec<String> = text
            .split([' ', '\t', '\n', '\r', '\x0c'])
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        oracle.sort();
        oracle.dedup();
        assert_eq!(tokenize(text), oracle);
        assert_eq!(oracle, set(&["a", "b", "c"]));
    }

    #[test]
    fn vocabulary_min_frequency() {
        let corpus = vec![set(&["a", "b"]), set(&["a"]), set(&["a", "c"])];
        let vocab = Vocabulary::build(&corpus, 10, 2);
        assert_eq!(vocab.terms(), &set(&["a"])[..]);
        assert_eq!(vocab.frequencies(), &[3]);
    }

    #[test]
    fn vocabulary_truncation_by_frequency() {
        let corpus = vec![
            set(&["x", "y"]),
            set(&["x", "y"]),
            set(&["x", "y"]),
            set(&["z"]),
        ];
        // Oracle: count, sort by (-freq, term), take 2.
        let mut counts: Vec<(i64, &str)> = vec![(-3, "x"), (-3, "y"), (-1, "z")];
        counts.sort();
        let expected: Vec<String> = counts.iter().take(2).map(|c| c.1.to_string()).collect();
        let vocab = Vocabulary::build(&corpus, 2, 1);
        assert_eq!(vocab.terms(), &expected[..]);
        assert_eq!(vocab.id("y"), Some(1));
        assert_eq!(vocab.id("z"), None);
    }

    #[test]
    fn vocabulary_counts_documents_not_occurrences() {
        let corpus = vec![vec!["a", "a", "a"], vec!["b"], vec!["b"]];
        let vocab = Vocabulary::build(&corpus, 10, 1);
        assert_eq!(vocab.terms(), &set(&["b", "a"])[..]);
    }

    #[test]
    fn vocabulary_defaults() {
        let config = VocabularyConfig::default();
        assert_eq!(config.max_size, 5000);
        assert_eq!(config.min_frequency, 5);
    }

    #[test]
    fn vocabulary_empty_when_nothing_qualifies() {
        let corpus = vec![set(&["a"])];
        assert!(Vocabulary::build(&corpus, 10, 2).is_empty());
    }

    #[test]
    fn encode_drops_oov_and_sorts() {
        let vocab = Vocabulary::from_terms(["a", "b"]);
        assert_eq!(encode_set(&set(&["a", "z"]), &vocab), vec![0]);
        assert!(encode_set::<String>(&[], &vocab).is_empty());
        assert_eq!(encode_set(&set(&["b", "a"]), &vocab), vec![0, 1]);
    }

    #[test]
    fn encoder_distinguishes_empty_and_missing() {
        let raw = RawDataset {
            columns: vec![RawColumn {
                name: "t".into(),
                kind: FeatureKind::CategoricalSet,
            }],
            rows: vec![
                vec![RawValue::Tokens(set(&["a", "b"]))],
                vec![RawValue::Tokens(set(&["zzz"]))],
                vec![RawValue::Missing],
            ],
            labels: vec![0, 1, 0],
            weights: None,
        };
        let enc = Encoder::fit(
            &raw.select(&[0, 2]),
            &VocabularyConfig {
                max_size: 10,
                min_frequency: 1,
            },
        )
        .unwrap();
        let ds = enc.encode(&raw).unwrap();
        assert_eq!(ds.row(0).categorical_set(0), Some(&[0u32, 1][..]));
        assert_eq!(ds.row(1).categorical_set(0), Some(&[][..]));
        assert_eq!(ds.row(2).categorical_set(0), None);
        assert_eq!(ds.values(2), vec![FeatureValue::Missing]);
    }

    #[test]
    fn dataset_rejects_non_canonical_sets() {
        let vocab = Vocabulary::from_terms(["a", "b"]);
        let mut col = SetColumn::new();
        col.push(Some(&[0, 1]));
        let ok = Dataset::new(
            vec![FeatureSpec::categorical_set("t", vocab.clone())],
            vec![Column::CategoricalSet(col)],
            vec![1],
            None,
        );
        assert!(ok.is_ok());
        let mut col = SetColumn::new();
        col.push(Some(&[0, 5]));
        let err = Dataset::new(
            vec![FeatureSpec::categorical_set("t", vocab)],
            vec![Column::CategoricalSet(col)],
            vec![1],
            None,
        );
        assert!(matches!(err, Err(Error::Schema(_))));
    }

    #[test]
    fn dataset_rejects_non_binary_labels() {
        let err = Dataset::new(vec![], vec![], vec![0, 2], None);
        assert!(matches!(err, Err(Error::Schema(_))));
    }

    #[test]
    fn vocabulary_serde_rebuilds_index() {
        let vocab = Vocabulary::build(&[set(&["b", "a"]), set(&["a"])], 10, 1);
        let json = serde_json::to_string(&vocab).unwrap();
        let back: Vocabulary = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vocab);
        assert_eq!(back.id("b"), Some(1));
    }

    proptest! {
        #[test]
        fn vocabulary_is_deterministic_and_ordered(
            docs in prop::collection::vec(prop::collection::vec("[a-f]{1,2}", 0..6), 0..30),
            max_size in 1usize..20,
            min_frequency in 1u64..4,
        ) {
            let v1 = Vocabulary::build(&docs, max_size, min_frequency);
            let v2 = Vocabulary::build(&docs, max_size, min_frequency);
            prop_assert_eq!(&v1, &v2);
            prop_assert!(v1.len() <= max_size);
            prop_assert!(v1.frequencies().iter().all(|&f| f >= min_frequency));
            prop_assert!(v1.frequencies().windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn encoding_canonical_ids_is_idempotent(
            docs in prop::collection::vec(prop::collection::vec("[a-h]", 0..8), 1..10),
        ) {
            let vocab = Vocabulary::build(&docs, 100, 1);
            for doc in &docs {
                let ids = encode_set(doc, &vocab);
                let terms: Vec<&str> = ids.iter().map(|&i| vocab.term(i).unwrap()).collect();
                prop_assert_eq!(encode_set(&terms, &vocab), ids);
            }
        }
    }
}
