//! `btv`: total-variation priors for skewness, posterior fitting and
//! simulation studies from the command line.

mod commands;
mod dataset;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use btv_core::{PriorSpec, SkewFamily};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "btv",
    version,
    about = "Total-variation priors on skewness: fitting, prior exploration and simulation studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a skew-symmetric model to a one-column CSV by adaptive MCMC.
    Fit(FitArgs),
    /// Tabulate a prior density of λ on a uniform grid.
    PriorDensity(PriorDensityArgs),
    /// Find Beta hyperparameters matching two quantiles of the perturbation measure.
    Elicit(ElicitArgs),
    /// Draw a sample from a skew-symmetric distribution.
    Sample(SampleArgs),
    /// Tabulate standardized densities at given percentages of relocated mass.
    Shapes(ShapesArgs),
    /// Run a replicated simulation study described by a TOML file.
    Study(StudyArgs),
}

/// Where the primary output goes and where its manifest is written.
#[derive(Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Manifest file; defaults to `<output>.manifest.json` when writing to a file.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// CSV file with one numeric column and an optional header row.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "skew-normal")]
    pub family: SkewFamily,
    /// btv:α,β | uniform-tv | jeffreys-tv | jeffreys | cs13:μ₀,σ₀,λ₀ | t:ν,scale
    #[arg(long, default_value = "jeffreys-tv")]
    pub prior: PriorSpec,
    /// Retained posterior draws.
    #[arg(long, default_value_t = 10_000)]
    pub retained: usize,
    #[arg(long, default_value_t = 10_000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 100)]
    pub thin: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Credible level of the reported intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Also report the maximum-likelihood fit.
    #[arg(long)]
    pub mle: bool,
    /// Also report bootstrap intervals for the MLE from this many resamples.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PriorDensityArgs {
    #[arg(long, default_value = "skew-normal")]
    pub family: SkewFamily,
    #[arg(long, default_value = "uniform-tv")]
    pub prior: PriorSpec,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ElicitArgs {
    #[arg(long, default_value_t = 0.05)]
    pub p_lo: f64,
    /// Target value of the perturbation measure at probability `p_lo`.
    #[arg(long, allow_hyphen_values = true)]
    pub q_lo: f64,
    #[arg(long, default_value_t = 0.95)]
    pub p_hi: f64,
    /// Target value of the perturbation measure at probability `p_hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub q_hi: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long, default_value = "skew-normal")]
    pub family: SkewFamily,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, short)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ShapesArgs {
    #[arg(long, default_value = "skew-normal")]
    pub family: SkewFamily,
    /// Percentages of the maximal relocated mass; negative values skew left.
    #[arg(long, value_delimiter = ',', default_value = "0,10,25,50,75,90", allow_hyphen_values = true)]
    pub masses: Vec<f64>,
    #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 60_001)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct StudyArgs {
    /// TOML study configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Directory receiving study.csv, study.json and study.manifest.json.
    #[arg(long)]
    pub output_dir: PathBuf,
    /// Worker threads; overrides the configuration file.
    #[arg(long, env = "BTV_THREADS")]
    pub threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(a) => commands::fit(&a),
        Command::PriorDensity(a) => commands::prior_density(&a),
        Command::Elicit(a) => commands::elicit(&a),
        Command::Sample(a) => commands::sample(&a),
        Command::Shapes(a) => commands::shapes(&a),
        Command::Study(a) => commands::study(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("btv: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
