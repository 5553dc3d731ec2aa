use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dst_fusion::evidence::{BuildMode, BuildPolicy, DEFAULT_THETA_FLOOR};
use dst_fusion::exec::Execution;
use dst_fusion::pipeline::{
    emit_report, evaluate_with, generate_fixture, load_labels, load_scores, render_table,
    to_canonical_json, FixtureSpec, PipelineError, ScoreFormat,
};

#[derive(Parser)]
#[command(
    name = "dst-fuse",
    version,
    about = "Dempster-Shafer fusion of classifier scores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse per-model score files and report accuracies.
    Fuse(FuseArgs),
    /// Write a seeded synthetic fixture.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Literal,
    ResidualTheta,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(clap::Args)]
struct FuseArgs {
    #[arg(long, num_args = 1.., required = true)]
    scores: Vec<PathBuf>,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long, value_enum, default_value = "literal")]
    policy: PolicyArg,
    #[arg(long, default_value_t = DEFAULT_THETA_FLOOR)]
    theta_floor: f64,
    /// Include one record per sample in the JSON report.
    #[arg(long)]
    per_sample: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    report_format: ReportFormat,
}

#[derive(clap::Args)]
struct SynthArgs {
    #[arg(long)]
    classes: usize,
    #[arg(long)]
    models: usize,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn fuse(args: FuseArgs) -> Result<(), PipelineError> {
    let format = match args.format {
        FormatArg::Csv => ScoreFormat::Csv,
        FormatArg::Jsonl => ScoreFormat::Jsonl,
    };
    let mode = match args.policy {
        PolicyArg::Literal => BuildMode::Literal,
        PolicyArg::ResidualTheta => BuildMode::ResidualTheta,
    };
    let policy = BuildPolicy::new(mode, args.theta_floor)?;
    let models = args
        .scores
        .iter()
        .map(|p| load_scores(p, format))
        .collect::<Result<Vec<_>, _>>()?;
    let labels = load_labels(&args.labels)?;
    let report = evaluate_with(&models, &labels, &policy, Execution::from_env())?;

    match (args.report_format, &args.out) {
        (ReportFormat::Json, Some(path)) => emit_report(&report, path, args.per_sample),
        (ReportFormat::Table, Some(path)) => {
            std::fs::write(path, render_table(&report)).map_err(|e| PipelineError::Io {
                path: path.clone(),
                source: e,
            })
        }
        (format, None) => {
            let text = match format {
                ReportFormat::Json => to_canonical_json(&report, args.per_sample),
                ReportFormat::Table => render_table(&report),
            };
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| PipelineError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })
        }
    }
}

fn synth(args: SynthArgs) -> Result<(), PipelineError> {
    let spec = FixtureSpec {
        classes: args.classes,
        models: args.models,
        samples: args.samples,
        seed: args.seed,
    };
    let files = generate_fixture(spec, &args.out)?;
    eprintln!(
        "{}: wrote {} score files and {}",
        spec.name(),
        files.score_files.len(),
        files.labels_file.display()
    );
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
    let result = match cli.command {
        Command::Fuse(args) => fuse(args),
        Command::Synth(args) => synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
