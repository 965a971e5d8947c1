//! `gaussmap` command line: fit, transform, inspect, generate and error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gaussmap::io::{read_csv, read_model, write_embedding_csv, write_grid_csv, write_model};
use gaussmap::svg::write_svg_heatmap;
use gaussmap::{
    grid_report, reconstruction_error, s_curve, Error, Field, TrainConfig, TrainReport, Trainer,
};

pub const DEFAULT_SEED: u64 = 42;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gaussmap", version, about = "Interpretable non-linear dimensionality reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a model and write it with the training-set embedding.
    Fit(FitArgs),
    /// Embed new points with a trained model.
    Transform(TransformArgs),
    /// Evaluate an interpretability field over a grid in the reduced space.
    Inspect(InspectArgs),
    /// Write a synthetic dataset.
    Generate(GenerateArgs),
    /// Print the distance reconstruction error of an embedding.
    Error(ErrorArgs),
}

#[derive(Debug, Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out_model: PathBuf,
    #[arg(long)]
    out_embedding: PathBuf,
    /// Run report JSON; defaults to the model path with a `.report.json` suffix.
    #[arg(long)]
    out_report: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    units: usize,
    #[arg(long, default_value_t = 2)]
    output_dim: usize,
    #[arg(long, default_value_t = 2000)]
    epochs: usize,
    #[arg(long, default_value_t = 100)]
    patience: usize,
    #[arg(long, default_value_t = 1e-6)]
    min_improvement: f64,
    /// Use only k-nearest-neighbour pairs in the loss.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1e-2)]
    lr: f64,
    #[arg(long)]
    optimize_centers: bool,
    #[arg(long, default_value_t = 1e-3)]
    sigma_floor: f64,
    /// Half-width of the uniform matrix initialization.
    #[arg(long)]
    init_scale: Option<f64>,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct InspectArgs {
    #[arg(long)]
    model: PathBuf,
    /// Embedding CSV to grid over.
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    embedding: Option<PathBuf>,
    /// Dataset CSV, embedded with the model first.
    #[arg(long)]
    input: Option<PathBuf>,
    /// influence:J, variance or norm
    #[arg(long)]
    field: String,
    #[arg(long, default_value_t = 100)]
    resolution: usize,
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Shape {
    SCurve,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "s-curve")]
    shape: Shape,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    out: PathBuf,
    /// Optional single-column CSV with each point's curve parameter.
    #[arg(long)]
    out_color: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ErrorArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
}

#[derive(Debug, Serialize)]
struct RunReport<'a> {
    config: &'a TrainConfig,
    #[serde(flatten)]
    training: &'a TrainReport,
    reconstruction_error: f64,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_USAGE,
        Error::Numerical(_) => EXIT_NUMERICAL,
        _ => EXIT_DATA,
    }
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run(command: Command) -> gaussmap::Result<()> {
    match command {
        Command::Fit(args) => fit(args),
        Command::Transform(args) => transform(args),
        Command::Inspect(args) => inspect(args),
        Command::Generate(args) => generate(args),
        Command::Error(args) => {
            let data = read_csv(&args.input)?;
            let embedding = read_csv(&args.embedding)?;
            println!("{:.6}", reconstruction_error(&data, &embedding)?);
            Ok(())
        }
    }
}

fn default_report_path(model: &Path) -> PathBuf {
    let stem = model.file_stem().unwrap_or_default().to_string_lossy();
    model.with_file_name(format!("{stem}.report.json"))
}

fn fit(args: FitArgs) -> gaussmap::Result<()> {
    let data = read_csv(&args.input)?;
    let config = TrainConfig {
        num_units: args.units,
        output_dim: args.output_dim,
        k_neighbors: args.k,
        max_epochs: args.epochs,
        patience: args.patience,
        min_improvement: args.min_improvement,
        learning_rate: args.lr,
        optimize_centers: args.optimize_centers,
        seed: args.seed,
        sigma_floor: args.sigma_floor,
        matrix_init_scale: args.init_scale,
        ..TrainConfig::default()
    };
    let (model, report) = Trainer::new(data.clone(), config.clone())?.finish()?;
    let embedding = model.transform_batch(&data)?;
    let error = reconstruction_error(&data, &embedding)?;

    write_model(&model, &args.out_model)?;
    write_embedding_csv(&embedding, &args.out_embedding)?;
    let report_path = args
        .out_report
        .unwrap_or_else(|| default_report_path(&args.out_model));
    let run_report = RunReport {
        config: &config,
        training: &report,
        reconstruction_error: error,
    };
    let mut json = serde_json::to_string_pretty(&run_report).expect("report is serializable");
    json.push('\n');
    std::fs::write(&report_path, json).map_err(|e| Error::Io {
        path: report_path.clone(),
        source: e,
    })?;

    println!(
        "epochs: {} ({:?}), best loss: {:.6}, reconstruction error: {:.6}",
        report.epochs_run,
        report.stop_reason,
        report.best_loss.unwrap_or(f64::NAN),
        error
    );
    Ok(())
}

fn transform(args: TransformArgs) -> gaussmap::Result<()> {
    let model = read_model(&args.model)?;
    let data = read_csv(&args.input)?;
    let embedding = model.transform_batch(&data)?;
    write_embedding_csv(&embedding, &args.out)
}

fn inspect(args: InspectArgs) -> gaussmap::Result<()> {
    let model = read_model(&args.model)?;
    let field: Field = args.field.parse()?;
    let embedding = match (&args.embedding, &args.input) {
        (Some(path), _) => read_csv(path)?,
        (None, Some(path)) => model.transform_batch(&read_csv(path)?)?,
        (None, None) => unreachable!("clap requires one of --embedding/--input"),
    };
    let report = grid_report(&model, &embedding, field, args.resolution, args.margin)?;
    write_grid_csv(&report, &args.out)?;
    if let Some(svg) = &args.svg {
        write_svg_heatmap(&report, &embedding, svg)?;
    }
    let (lo, hi) = report.range();
    println!("{field}: min {lo:.6}, max {hi:.6} over {} cells", report.values.len());
    Ok(())
}

fn generate(args: GenerateArgs) -> gaussmap::Result<()> {
    let curve = match args.shape {
        Shape::SCurve => s_curve(args.n, args.seed, args.noise)?,
    };
    write_embedding_csv(&curve.data, &args.out)?;
    if let Some(path) = &args.out_color {
        let colors = gaussmap::Points::from_flat(1, curve.color)?;
        write_embedding_csv(&colors, path)?;
    }
    Ok(())
}
