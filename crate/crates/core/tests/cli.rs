use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use setforest::commands::{SWEEP_CSV_HEADER, TIMING_CSV_HEADER};
use setforest::evaluation::REPORT_CSV_HEADER;
use setforest::synthetic::{planted_corpus, to_tsv, PlantedCorpusConfig};

fn setforest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setforest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Writes a small corpus and a config next to it; returns the config path.
fn workspace(dir: &Path, extra: &str) -> String {
    let corpus = PlantedCorpusConfig {
        num_examples: 300,
        vocabulary_size: 60,
        num_signal_terms: 3,
        ..PlantedCorpusConfig::default()
    };
    let (texts, labels) = planted_corpus(&corpus);
    fs::write(dir.join("corpus.tsv"), to_tsv(&texts, &labels)).unwrap();
    let config = format!(
        r#"
output_dir = "out"
[data]
path = "corpus.tsv"
[method]
algorithm = "mart"
[train]
num_trees = 15
[vocabulary]
min_frequency = 2
{extra}
"#
    );
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&setforest(&["--help"])), 0);
    assert_eq!(code(&setforest(&["train", "--help"])), 0);
    assert_eq!(code(&setforest(&[])), 1);
    assert_eq!(code(&setforest(&["frobnicate"])), 1);
    assert_eq!(code(&setforest(&["train", "--config"])), 1);
}

#[test]
fn config_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(
        &bad,
        "[data]\npath = \"x.tsv\"\n[method]\nalgorithm = \"mart\"\nbogus = 1\n",
    )
    .unwrap();
    let out = setforest(&["train", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stderr));

    let missing = dir.path().join("missing.toml");
    fs::write(
        &missing,
        "[data]\npath = \"nowhere.tsv\"\n[method]\nalgorithm = \"mart\"\n",
    )
    .unwrap();
    assert_eq!(
        code(&setforest(&[
            "train",
            "--config",
            missing.to_str().unwrap()
        ])),
        2
    );

    let config = workspace(dir.path(), "");
    fs::write(dir.path().join("corpus.tsv"), "1\ta b\nx\tc d\n").unwrap();
    assert_eq!(code(&setforest(&["train", "--config", &config])), 2);
}

#[test]
fn train_then_predict_with_both_evaluators() {
    let dir = tempfile::tempdir().unwrap();
    let config = workspace(dir.path(), "");
    let out = setforest(&["train", "--config", &config, "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let model = dir.path().join("out/model.json");
    assert!(model.is_file());
    assert!(dir.path().join("out/metadata.json").is_file());

    let docs = dir.path().join("docs.txt");
    fs::write(&docs, "w010 w020 w030\n\nw999\nw010 w050 w020 w011\n").unwrap();
    let predict = |evaluator: &str| {
        let out = setforest(&[
            "predict",
            "--model",
            model.to_str().unwrap(),
            "--input",
            docs.to_str().unwrap(),
            "--evaluator",
            evaluator,
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let qs = predict("qs");
    assert_eq!(qs, predict("topdown"));
    let scores: Vec<f64> = qs.lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(scores.len(), 4);
    assert!(scores.iter().all(|p| (0.0..=1.0).contains(p)));

    let mut child = Command::new(env!("CARGO_BIN_EXE_setforest"))
        .args(["predict", "--model", model.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"w010 w020 w030\n\nw999\nw010 w050 w020 w011\n")
        .unwrap();
    let piped = child.wait_with_output().unwrap();
    assert_eq!(stdout(&piped), qs);

    let bench = setforest(&[
        "bench",
        "--model",
        model.to_str().unwrap(),
        "--data",
        dir.path().join("corpus.tsv").to_str().unwrap(),
        "--warmup",
        "0",
        "--runs",
        "1",
    ]);
    assert_eq!(code(&bench), 0);
    let text = stdout(&bench);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], TIMING_CSV_HEADER);
    assert_eq!(lines.len(), 3);
}

#[test]
fn evaluate_and_sweep_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let config = workspace(dir.path(), "[evaluation]\nfolds = 3\n");
    let out = setforest(&["evaluate", "--config", &config, "--trees", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.path().join("out/report.csv")).unwrap();
    assert_eq!(report.lines().next(), Some(REPORT_CSV_HEADER));
    assert!(report
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("MART GreedyMask,3,"));
    for i in 0..3 {
        assert!(dir
            .path()
            .join(format!("out/fold_{i}.model.json"))
            .is_file());
    }

    let out = setforest(&[
        "sweep",
        "--config",
        &config,
        "--trees",
        "3",
        "--grid",
        "0.2,1.0",
        "--vocab-size",
        "40",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let sweep = fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let lines: Vec<&str> = sweep.lines().collect();
    assert_eq!(lines[0], SWEEP_CSV_HEADER);
    assert!(
        lines[1].starts_with("0.2,") && lines[2].starts_with("1,"),
        "{sweep}"
    );

    assert_eq!(
        code(&setforest(&["sweep", "--config", &config, "--grid", "0"])),
        1
    );
}

#[test]
fn bundled_configs_load_and_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut names = Vec::new();
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let config = setforest::config::RunConfig::load(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(config.data.path.starts_with(&dir));
        names.push(path.file_name().unwrap().to_string_lossy().into_owned());
    }
    assert!(names.len() >= 5, "{names:?}");

    let out_dir = tempfile::tempdir().unwrap();
    let out = setforest(&[
        "evaluate",
        "--config",
        dir.join("mixed_csv.toml").to_str().unwrap(),
        "--trees",
        "5",
        "--folds",
        "3",
        "--output",
        out_dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.path().join("report.csv").is_file());
}
