//! `svmchip` command-line tool.
//!
//! Exit codes: 0 success, 1 invalid input data, 2 usage error (bad flags,
//! unreadable or unwritable files, bad profiles), 3 internal failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "svmchip", version, about = "Linear SVM accelerator simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Engine {
    /// Three blocks: SVs summation, distance, decision.
    Full,
    /// Precomputed z: distance and decision only.
    Precomputed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify each instance of an SVM-Light example file.
    Classify {
        /// SVM-Light model file.
        #[arg(long)]
        model: PathBuf,
        /// Example file, one instance per line (`-` for stdin).
        #[arg(long)]
        instances: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        threshold: f32,
        #[arg(long, value_enum, default_value_t = Engine::Full)]
        engine: Engine,
    },
    /// Run instances through a cascade; positives finalize at the first stage that reports them.
    Cascade {
        /// Stage model files in cascade order.
        #[arg(long = "stage", required = true)]
        stages: Vec<PathBuf>,
        #[arg(long)]
        instances: PathBuf,
        /// One threshold for all stages, or one per stage in order.
        #[arg(long = "threshold", allow_negative_numbers = true)]
        thresholds: Vec<f32>,
    },
    /// Predicted latency per target, speedups and published reference figures.
    Bench {
        /// Model dimensions: support vectors and features.
        #[arg(long, num_args = 2, value_names = ["N_SV", "N_FEATURES"], conflicts_with = "model", required_unless_present = "model")]
        dims: Option<Vec<usize>>,
        /// Take the dimensions from a model file instead.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Calibration profile files overriding the defaults of their target.
        #[arg(long = "profile")]
        profiles: Vec<PathBuf>,
        /// Number of cascade stages (each with the model's feature count).
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        stages: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write the SoC data-file triple `<out>.svs.bin`, `<out>.par.bin`, `<out>.x.bin`.
    Convert {
        #[arg(long)]
        model: PathBuf,
        /// Example file; its first instance is exported.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Accuracy, sensitivity and specificity over a labeled example file.
    Evaluate {
        /// Single model (equivalent to a one-stage cascade).
        #[arg(long, conflicts_with = "stages", required_unless_present = "stages")]
        model: Option<PathBuf>,
        /// Cascade stage model files in order.
        #[arg(long = "stage")]
        stages: Vec<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "threshold", allow_negative_numbers = true)]
        thresholds: Vec<f32>,
    },
    /// Write a deterministic synthetic model file.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_sv: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n_features: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write this many instances labeled by the generated model.
        #[arg(long, requires = "examples_out")]
        examples: Option<usize>,
        #[arg(long)]
        examples_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify {
            model,
            instances,
            threshold,
            engine,
        } => commands::classify(&model, &instances, threshold, engine),
        Command::Cascade {
            stages,
            instances,
            thresholds,
        } => commands::cascade(&stages, &instances, &thresholds),
        Command::Bench {
            dims,
            model,
            profiles,
            stages,
            format,
        } => commands::bench(
            dims.as_deref(),
            model.as_deref(),
            &profiles,
            stages as usize,
            format,
        ),
        Command::Convert {
            model,
            instance,
            out,
        } => commands::convert(&model, &instance, &out),
        Command::Evaluate {
            model,
            stages,
            data,
            thresholds,
        } => {
            let stages = model.map_or(stages, |m| vec![m]);
            commands::evaluate(&stages, &data, &thresholds)
        }
        Command::Gen {
            n_sv,
            n_features,
            seed,
            out,
            examples,
            examples_out,
        } => commands::gen(
            n_sv as usize,
            n_features as usize,
            seed,
            &out,
            examples.zip(examples_out),
        ),
    };
    match result {
        Ok(()) | Err(commands::CliError::Closed) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("svmchip: {e}");
            ExitCode::from(e.code())
        }
    }
}
