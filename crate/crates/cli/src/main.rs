use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use psisolve_cli::{resolve_seed, run, CliConfig, Command, OutputFormat, DEFAULT_GRID, EXIT_INPUT, SEED_ENV};

#[derive(Parser)]
#[command(name = "psisolve", version, about = "Weighted generalized psi-estimators as points of sign change")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct Common {
    /// Family spec, e.g. `quantile:alpha=0.3` (see `list-families`).
    #[arg(long, global = true)]
    psi: Option<String>,
    /// Data file, `-` for standard input.
    #[arg(long, global = true)]
    data: Option<String>,
    /// Weights file, one weight per data point.
    #[arg(long, global = true)]
    weights: Option<String>,
    /// Atoms of a discrete distribution, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    atoms: Option<String>,
    /// Probabilities matching `--atoms`.
    #[arg(long, global = true)]
    probs: Option<String>,
    /// Width of the returned bracket.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Grid size of the verification checks.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Read column K (0-based) of a CSV file.
    #[arg(long = "csv-col", global = true, value_name = "K")]
    csv_col: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate a weighted sample.
    Estimate,
    /// Check existence conditions of a family.
    Verify,
    /// Point of sign change of a psi-expectation.
    Expectation,
    /// Re-run a classical counterexample, or `all` of them.
    Reproduce { id: String },
    /// Describe the available families.
    ListFamilies,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn config(cli: Cli) -> Result<CliConfig, psisolve_cli::CliError> {
    let (command, target) = match cli.command {
        Cmd::Estimate => (Command::Estimate, None),
        Cmd::Verify => (Command::Verify, None),
        Cmd::Expectation => (Command::Expectation, None),
        Cmd::Reproduce { id } => (Command::Reproduce, Some(id)),
        Cmd::ListFamilies => (Command::ListFamilies, None),
    };
    let c = cli.common;
    let env = std::env::var(SEED_ENV).ok();
    let mut config = CliConfig::new(command);
    config.target = target;
    config.family_spec = c.psi;
    config.data_path = c.data;
    config.weights_path = c.weights;
    config.atoms = c.atoms;
    config.probs = c.probs;
    config.csv_col = c.csv_col;
    config.seed = resolve_seed(c.seed, env.as_deref())?;
    config.grid_count = c.grid;
    if let Some(tol) = c.tol {
        config.tolerance = tol;
    }
    config.format = match c.format {
        Format::Json => OutputFormat::Json,
        Format::Table => OutputFormat::Table,
    };
    Ok(config)
}

fn main() -> ExitCode {
    let out = match config(Cli::parse()) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("{}", e.to_json());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.status as u8)
}
