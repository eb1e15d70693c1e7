//! Implementations of the command-line subcommands.
//!
//! Every command returns its primary output instead of printing it, so the
//! binary stays a thin argument parser.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{load_data, DataFormat, RunConfig};
use crate::dataset::CsvSchema;
use crate::dataset::{RawDataset, Vocabulary};
use crate::error::{Error, Result};
use crate::evaluation::{cross_validate, reports_csv, reports_table, EvaluationReport};
use crate::inference::{
    benchmark_inference, predict_dataset, BenchmarkProtocol, CompiledForest, Evaluator, TimingRow,
};
use crate::model::Model;
use crate::pipeline::fit_method;

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// SHA-256 of the resolved configuration serialized as JSON.
pub fn config_hash(config: &RunConfig) -> Result<String> {
    let json = serde_json::to_vec(config)?;
    Ok(hex::encode(Sha256::digest(json)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub load_seconds: f64,
    pub fit_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainMetadata {
    pub method: String,
    pub seed: u64,
    pub config_sha256: String,
    pub num_examples: usize,
    pub num_trees: usize,
    pub timings: Timings,
}

#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub model_path: PathBuf,
    pub vocabulary_path: PathBuf,
    pub metadata_path: PathBuf,
    pub metadata: TrainMetadata,
}

/// Fits the pipeline and forest on the whole dataset and writes
/// `model.json`, `vocabulary.json` and `metadata.json`.
pub fn cmd_train(config: &RunConfig) -> Result<TrainOutput> {
    let train_config = config.train_config();
    let start = Instant::now();
    let data = config.data.load()?;
    let load_seconds = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let (pipeline, forest) = fit_method(&data, &config.vocabulary, &config.method, &train_config)?;
    let fit_seconds = start.elapsed().as_secs_f64();

    create_dir(&config.output_dir)?;
    let model = Model::new(config.method.label(), pipeline, forest);
    let model_path = config.output_dir.join("model.json");
    model.save(&model_path)?;

    let vocabularies: Vec<(&str, &Vocabulary)> = model
        .pipeline
        .encoder
        .columns
        .iter()
        .zip(&model.pipeline.encoder.vocabularies)
        .filter_map(|(c, v)| v.as_ref().map(|v| (c.name.as_str(), v)))
        .collect();
    let vocabulary_path = config.output_dir.join("vocabulary.json");
    write(
        &vocabulary_path,
        serde_json::to_string_pretty(&vocabularies)?,
    )?;

    let metadata = TrainMetadata {
        method: model.method.clone(),
        seed: train_config.seed,
        config_sha256: config_hash(config)?,
        num_examples: data.len(),
        num_trees: model.forest.trees.len(),
        timings: Timings {
            load_seconds,
            fit_seconds,
        },
    };
    let metadata_path = config.output_dir.join("metadata.json");
    write(&metadata_path, serde_json::to_string_pretty(&metadata)?)?;
    Ok(TrainOutput {
        model_path,
        vocabulary_path,
        metadata_path,
        metadata,
    })
}

#[derive(Debug, Clone)]
pub struct EvaluateOutput {
    pub report: EvaluationReport,
    pub csv_path: PathBuf,
    pub table_path: PathBuf,
    pub model_paths: Vec<PathBuf>,
}

/// Cross-validates the configured method and writes `report.csv`,
/// `report.txt` and one `fold_<i>.model.json` per fold.
pub fn cmd_evaluate(config: &RunConfig) -> Result<EvaluateOutput> {
    let data = config.data.load()?;
    let cv = cross_validate(
        &data,
        &config.method,
        &config.train_config(),
        &config.vocabulary,
        &config.evaluation,
    )?;
    create_dir(&config.output_dir)?;
    let mut model_paths = Vec::new();
    for (i, fold) in cv.folds.iter().enumerate() {
        let path = config.output_dir.join(format!("fold_{i}.model.json"));
        Model::new(
            config.method.label(),
            fold.pipeline.clone(),
            fold.forest.clone(),
        )
        .save(&path)?;
        model_paths.push(path);
    }
    let reports = [cv.report.clone()];
    let csv_path = config.output_dir.join("report.csv");
    write(&csv_path, reports_csv(&reports))?;
    let table_path = config.output_dir.join("report.txt");
    write(&table_path, reports_table(&reports))?;
    Ok(EvaluateOutput {
        report: cv.report,
        csv_path,
        table_path,
        model_paths,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub sampling_rate: f64,
    pub report: EvaluationReport,
}

pub const SWEEP_CSV_HEADER: &str = "sampling_rate,mean_auc,std_auc,fold_aucs";

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = format!("{SWEEP_CSV_HEADER}\n");
    for p in points {
        let folds = p
            .report
            .fold_aucs
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{}\n",
            p.sampling_rate, p.report.mean_auc, p.report.std_auc, folds
        ));
    }
    out
}

/// Cross-validates once per sampling rate of the sweep grid with the
/// vocabulary capped at the sweep size; writes `sweep.csv`.
pub fn cmd_sweep(config: &RunConfig) -> Result<(Vec<SweepPoint>, PathBuf)> {
    let data = config.data.load()?;
    let mut vocabulary = config.vocabulary;
    vocabulary.max_size = config.sweep.vocabulary_max_size;
    let mut points = Vec::with_capacity(config.sweep.grid.len());
    for &p in &config.sweep.grid {
        let mut train = config.train_config();
        train.sampling_rate = p;
        let cv = cross_validate(
            &data,
            &config.method,
            &train,
            &vocabulary,
            &config.evaluation,
        )?;
        points.push(SweepPoint {
            sampling_rate: p,
            report: cv.report,
        });
    }
    create_dir(&config.output_dir)?;
    let path = config.output_dir.join("sweep.csv");
    write(&path, sweep_csv(&points))?;
    Ok((points, path))
}

pub const TIMING_CSV_HEADER: &str = "model,evaluator,µs_per_example,examples,runs";

pub fn timing_csv(rows: &[TimingRow]) -> String {
    let mut out = format!("{TIMING_CSV_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.4},{},{}\n",
            r.model, r.evaluator, r.us_per_example, r.examples, r.runs
        ));
    }
    out
}

/// Input rows for `bench` and `predict`.
#[derive(Debug, Clone)]
pub struct InputSpec<'a> {
    pub path: &'a Path,
    pub format: InputFormat,
    pub csv: Option<&'a CsvSchema>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One unlabeled document per line.
    Lines,
    /// `<label>\t<text>` lines.
    Text,
    Csv,
}

pub fn load_input(input: &InputSpec<'_>) -> Result<RawDataset> {
    match input.format {
        InputFormat::Text => load_data(input.path, DataFormat::Text, None),
        InputFormat::Csv => load_data(input.path, DataFormat::Csv, input.csv),
        InputFormat::Lines => {
            let text = if input.path == Path::new("-") {
                std::io::read_to_string(std::io::stdin()).map_err(|e| Error::io("<stdin>", e))?
            } else {
                fs::read_to_string(input.path).map_err(|e| Error::io(input.path, e))?
            };
            let lines: Vec<&str> = text.lines().collect();
            let n = lines.len();
            Ok(RawDataset::from_texts(&lines, vec![0; n]))
        }
    }
}

/// Times both evaluators on the preprocessed input; preprocessing is not
/// timed. Runs on the calling thread.
pub fn cmd_bench(
    model_path: &Path,
    input: &InputSpec<'_>,
    protocol: BenchmarkProtocol,
) -> Result<Vec<TimingRow>> {
    let model = Model::load(model_path)?;
    let raw = load_input(input)?;
    let data = model.pipeline.apply(&raw)?;
    let compiled = CompiledForest::compile_with_fallback(&model.forest);
    let name = model_path.file_stem().map_or_else(
        || model.method.clone(),
        |s| s.to_string_lossy().into_owned(),
    );
    benchmark_inference(&name, &model.forest, &compiled, &data, protocol)
}

/// One probability per input row.
pub fn cmd_predict(
    model_path: &Path,
    input: &InputSpec<'_>,
    evaluator: Evaluator,
) -> Result<Vec<f64>> {
    let model = Model::load(model_path)?;
    let raw = load_input(input)?;
    let data = model.pipeline.apply(&raw)?;
    model.forest.check_schema(data.schema())?;
    let compiled =
        (evaluator == Evaluator::Qs).then(|| CompiledForest::compile_with_fallback(&model.forest));
    Ok(predict_dataset(
        &model.forest,
        compiled.as_ref(),
        &data,
        evaluator,
    ))
}
