//! Method specifications and fitted preprocessing pipelines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Encoder, RawDataset, VocabularyConfig};
use crate::error::{Error, Result};
use crate::train::{train, Algorithm, TrainConfig};
use crate::transforms::{FittedChain, TransformKind, TransformParams, TransformSpec};
use crate::tree::DecisionForest;

/// A learning algorithm plus the transformations applied to categorical-set
/// columns. An empty chain trains on the sets directly with the greedy mask
/// splitter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub algorithm: Algorithm,
    #[serde(default, alias = "transform")]
    pub transforms: Vec<TransformKind>,
    #[serde(default)]
    pub params: TransformParams,
}

impl MethodSpec {
    pub fn greedy_mask(algorithm: Algorithm) -> Self {
        MethodSpec {
            algorithm,
            transforms: Vec::new(),
            params: TransformParams::default(),
        }
    }

    pub fn with_transforms(algorithm: Algorithm, transforms: &[TransformKind]) -> Self {
        MethodSpec {
            algorithm,
            transforms: transforms.to_vec(),
            params: TransformParams::default(),
        }
    }

    /// Display name such as `RF GreedyMask`, `MART BagOfWords`,
    /// `RF CatCart MaxHash` or `RF MaxHash+TargetMean`.
    pub fn label(&self) -> String {
        let algorithm = match self.algorithm {
            Algorithm::RandomForest => "RF",
            Algorithm::Mart => "MART",
        };
        let rest = match self.transforms.as_slice() {
            [] => "GreedyMask".to_owned(),
            [TransformKind::MaxHash] => "CatCart MaxHash".to_owned(),
            chain => chain.iter().map(|t| t.name()).collect::<Vec<_>>().join("+"),
        };
        format!("{algorithm} {rest}")
    }

    pub fn transform_specs(&self) -> Result<Vec<TransformSpec>> {
        self.transforms
            .iter()
            .map(|&k| TransformSpec::new(k, &self.params))
            .collect()
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    /// Parses labels like `rf`, `mart:maxhash+targetmean` or `RF BagOfWords`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (algorithm, rest) = s
            .split_once([':', ' '])
            .map_or((s, ""), |(a, r)| (a, r.trim()));
        let algorithm = match algorithm.to_ascii_lowercase().as_str() {
            "rf" | "random_forest" => Algorithm::RandomForest,
            "mart" => Algorithm::Mart,
            other => return Err(Error::Config(format!("unknown algorithm `{other}`"))),
        };
        let rest = rest
            .strip_prefix("CatCart ")
            .or_else(|| rest.strip_prefix("catcart "))
            .unwrap_or(rest);
        let transforms = if rest.is_empty() || rest.eq_ignore_ascii_case("greedymask") {
            Vec::new()
        } else {
            rest.split('+')
                .map(|t| t.trim().parse())
                .collect::<Result<_>>()?
        };
        Ok(MethodSpec {
            algorithm,
            transforms,
            params: TransformParams::default(),
        })
    }
}

/// Vocabulary encoder and transform chain fitted on one training partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub encoder: Encoder,
    pub chain: FittedChain,
}

impl Pipeline {
    pub fn fit(
        train: &RawDataset,
        vocabulary: &VocabularyConfig,
        method: &MethodSpec,
    ) -> Result<(Self, Dataset)> {
        let encoder = Encoder::fit(train, vocabulary)?;
        let encoded = encoder.encode(train)?;
        let (chain, transformed) = FittedChain::fit(&encoded, &method.transform_specs()?)?;
        Ok((Pipeline { encoder, chain }, transformed))
    }

    /// Encodes and transforms rows with the fitted state only.
    pub fn apply(&self, raw: &RawDataset) -> Result<Dataset> {
        let encoded = self.encoder.encode(raw)?;
        self.chain.apply(&encoded)
    }
}

/// Fits the pipeline and trains a forest on `train`.
pub fn fit_method(
    train_data: &RawDataset,
    vocabulary: &VocabularyConfig,
    method: &MethodSpec,
    config: &TrainConfig,
) -> Result<(Pipeline, DecisionForest)> {
    if config.algorithm != method.algorithm {
        return Err(Error::Config(format!(
            "method `{}` does not match the training algorithm",
            method.label()
        )));
    }
    let (pipeline, dataset) = Pipeline::fit(train_data, vocabulary, method)?;
    let forest = train(&dataset, config)?;
    Ok((pipeline, forest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_naming_convention() {
        use TransformKind::*;
        assert_eq!(
            MethodSpec::greedy_mask(Algorithm::RandomForest).label(),
            "RF GreedyMask"
        );
        assert_eq!(
            MethodSpec::with_transforms(Algorithm::Mart, &[BagOfWords]).label(),
            "MART BagOfWords"
        );
        assert_eq!(
            MethodSpec::with_transforms(Algorithm::RandomForest, &[MaxHash]).label(),
            "RF CatCart MaxHash"
        );
        assert_eq!(
            MethodSpec::with_transforms(Algorithm::RandomForest, &[MaxHash, TargetMean]).label(),
            "RF MaxHash+TargetMean"
        );
    }

    #[test]
    fn labels_parse_back() {
        for label in [
            "RF GreedyMask",
            "MART BagOfWords",
            "RF CatCart MaxHash",
            "RF MaxHash+TargetMean",
            "MART MaxHash+OneHot",
        ] {
            let m: MethodSpec = label.parse().unwrap();
            assert_eq!(m.label(), label);
        }
        assert_eq!("rf".parse::<MethodSpec>().unwrap().label(), "RF GreedyMask");
        assert!("svm".parse::<MethodSpec>().is_err());
    }

    #[test]
    fn pipeline_apply_matches_fit_output() {
        let raw = RawDataset::from_texts(&["a b", "b c", "c a", "a"], vec![1, 0, 0, 1]);
        let vocab = VocabularyConfig {
            max_size: 10,
            min_frequency: 1,
        };
        let method = MethodSpec::with_transforms(
            Algorithm::RandomForest,
            &[TransformKind::MaxHash, TransformKind::TargetMean],
        );
        let (p, fitted) = Pipeline::fit(&raw, &vocab, &method).unwrap();
        assert_eq!(p.apply(&raw).unwrap(), fitted);
    }
}
