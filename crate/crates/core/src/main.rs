use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use setforest::commands::{
    cmd_bench, cmd_evaluate, cmd_predict, cmd_sweep, cmd_train, sweep_csv, timing_csv, InputFormat,
    InputSpec,
};
use setforest::config::RunConfig;
use setforest::evaluation::reports_table;
use setforest::inference::{BenchmarkProtocol, Evaluator};
use setforest::{Error, Result};

#[derive(Parser)]
#[command(
    name = "setforest",
    version,
    about = "Decision forests on categorical-set features"
)]
struct Cli {
    /// Worker threads for training and cross-validation (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Run configuration (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// Overrides `train.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `train.num_trees`.
    #[arg(long)]
    trees: Option<usize>,
    /// Overrides `evaluation.folds`.
    #[arg(long)]
    folds: Option<usize>,
    /// Overrides `output_dir`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// One unlabeled document per line.
    Lines,
    /// `<label>\t<text>` lines.
    Text,
    /// CSV; the schema comes from `--config`.
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvaluatorArg {
    Qs,
    Topdown,
}

#[derive(Subcommand)]
enum Command {
    /// Train on the whole dataset and write the model.
    Train(RunArgs),
    /// Cross-validate and write per-fold models and reports.
    Evaluate(RunArgs),
    /// Cross-validate over a grid of sampling rates.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated sampling rates.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// Vocabulary cap for every sweep point.
        #[arg(long)]
        vocab_size: Option<usize>,
    },
    /// Time the compiled and top-down evaluators (single thread).
    Bench {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Config holding the CSV schema.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write the timing CSV here.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        warmup: usize,
        #[arg(long, default_value_t = 100)]
        runs: usize,
    },
    /// Print one probability per input row.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Input file, or `-` for standard input.
        #[arg(long, default_value = "-")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "lines")]
        format: Format,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "qs")]
        evaluator: EvaluatorArg,
    },
}

fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let mut config = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.train.seed = Some(seed);
    }
    if let Some(trees) = args.trees {
        config.train.num_trees = Some(trees);
    }
    if let Some(folds) = args.folds {
        config.evaluation.folds = folds;
    }
    if let Some(output) = &args.output {
        config.output_dir = output.clone();
    }
    config.validate()?;
    Ok(config)
}

fn input_format(format: Format) -> InputFormat {
    match format {
        Format::Lines => InputFormat::Lines,
        Format::Text => InputFormat::Text,
        Format::Csv => InputFormat::Csv,
    }
}

fn set_threads(threads: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<()> {
    let threads = if matches!(cli.command, Command::Bench { .. }) {
        1
    } else {
        cli.threads
    };
    set_threads(threads)?;
    match cli.command {
        Command::Train(args) => {
            let out = cmd_train(&load_config(&args)?)?;
            println!("wrote {}", out.model_path.display());
        }
        Command::Evaluate(args) => {
            let out = cmd_evaluate(&load_config(&args)?)?;
            print!("{}", reports_table(&[out.report]));
            println!("wrote {}", out.csv_path.display());
        }
        Command::Sweep {
            run,
            grid,
            vocab_size,
        } => {
            let mut config = load_config(&run)?;
            if let Some(grid) = grid {
                config.sweep.grid = grid;
            }
            if let Some(size) = vocab_size {
                config.sweep.vocabulary_max_size = size;
            }
            config.validate()?;
            let (points, path) = cmd_sweep(&config)?;
            print!("{}", sweep_csv(&points));
            println!("wrote {}", path.display());
        }
        Command::Bench {
            model,
            data,
            format,
            config,
            output,
            warmup,
            runs,
        } => {
            let config = config.map(RunConfig::load).transpose()?;
            let input = InputSpec {
                path: &data,
                format: input_format(format),
                csv: config.as_ref().and_then(|c| c.data.csv.as_ref()),
            };
            let protocol = BenchmarkProtocol {
                warmup_runs: warmup,
                timed_runs: runs,
            };
            let csv = timing_csv(&cmd_bench(&model, &input, protocol)?);
            print!("{csv}");
            if let Some(path) = output {
                std::fs::write(&path, csv).map_err(|e| Error::Io { path, source: e })?;
            }
        }
        Command::Predict {
            model,
            input,
            format,
            config,
            evaluator,
        } => {
            let config = config.map(RunConfig::load).transpose()?;
            let spec = InputSpec {
                path: &input,
                format: input_format(format),
                csv: config.as_ref().and_then(|c| c.data.csv.as_ref()),
            };
            let evaluator = match evaluator {
                EvaluatorArg::Qs => Evaluator::Qs,
                EvaluatorArg::Topdown => Evaluator::TopDown,
            };
            for score in cmd_predict(&model, &spec, evaluator)? {
                println!("{score}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
