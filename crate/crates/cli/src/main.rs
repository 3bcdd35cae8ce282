use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use treemc::data::synth;
use treemc_cli::config::{ExperimentConfig, MissingValueMode, SamplerKind};
use treemc_cli::result::{emit_results, RunResult};
use treemc_cli::run_experiment;
use treemc_cli::table::{compare_table, compare_table_csv};

/// Bayesian classification-tree samplers and their benchmark harness.
#[derive(Parser)]
#[command(name = "treemc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one sampler with k-fold cross-validation and emit a JSON result.
    Run(RunArgs),
    /// Render stored results as a side-by-side accuracy table.
    Table(TableArgs),
    /// Generate one of the bundled synthetic benchmark datasets.
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Mcmc,
    #[value(name = "smc-ea")]
    SmcEa,
}

#[derive(Clone, Copy, ValueEnum)]
enum MissingArg {
    Drop,
    Impute,
}

#[derive(Args)]
struct RunArgs {
    /// CSV file with one label column.
    #[arg(long, env = "TREEMC_DATASET")]
    dataset: PathBuf,

    /// Name of the label column (its zero-based index for headerless files).
    #[arg(long = "label-col", env = "TREEMC_LABEL_COL")]
    label_col: String,

    /// Treat the first row as data instead of headers.
    #[arg(long = "no-header", env = "TREEMC_NO_HEADER")]
    no_header: bool,

    #[arg(long, value_enum, env = "TREEMC_SAMPLER")]
    sampler: SamplerArg,

    /// Chains (mcmc) or particles (smc-ea).
    #[arg(long, env = "TREEMC_UNITS")]
    units: usize,

    #[arg(long, env = "TREEMC_ITERATIONS")]
    iterations: usize,

    /// Depth-prior normalization constant.
    #[arg(long, default_value_t = 1.0, env = "TREEMC_A")]
    a: f64,

    /// Depth-prior penalty exponent.
    #[arg(long, default_value_t = 2.0, env = "TREEMC_BETA")]
    beta: f64,

    #[arg(long = "max-depth", default_value_t = 15, env = "TREEMC_MAX_DEPTH")]
    max_depth: usize,

    /// Fraction of each chain discarded as burn-in (mcmc only).
    #[arg(long = "burn-in", default_value_t = 0.2, env = "TREEMC_BURN_IN")]
    burn_in: f64,

    #[arg(long, default_value_t = 5, env = "TREEMC_FOLDS")]
    folds: usize,

    #[arg(long, default_value_t = 0, env = "TREEMC_SEED")]
    seed: u64,

    /// How to handle missing feature cells ("" or "?").
    #[arg(long, value_enum, default_value = "impute", env = "TREEMC_MISSING")]
    missing: MissingArg,

    /// Where to write the JSON result (stdout when omitted).
    #[arg(long, env = "TREEMC_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// JSON result files produced by `run`.
    #[arg(long, num_args = 1.., required = true, env = "TREEMC_INPUTS")]
    inputs: Vec<PathBuf>,

    /// Also write the table as CSV to this path.
    #[arg(long, env = "TREEMC_CSV")]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    Scadi,
    Lung,
}

#[derive(Args)]
struct SynthArgs {
    /// Which benchmark shape to generate.
    #[arg(long, value_enum, env = "TREEMC_KIND")]
    kind: SynthKind,

    #[arg(long, default_value_t = 1, env = "TREEMC_SEED")]
    seed: u64,

    #[arg(long, env = "TREEMC_OUT")]
    out: PathBuf,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Table(args) => table(args),
        Command::Synth(args) => synth_cmd(args),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let config = ExperimentConfig {
        dataset: args.dataset,
        label_column: args.label_col,
        has_headers: !args.no_header,
        missing: match args.missing {
            MissingArg::Drop => MissingValueMode::Drop,
            MissingArg::Impute => MissingValueMode::Impute,
        },
        sampler: match args.sampler {
            SamplerArg::Mcmc => SamplerKind::Mcmc,
            SamplerArg::SmcEa => SamplerKind::SmcEa,
        },
        units: args.units,
        iterations: args.iterations,
        a: args.a,
        beta: args.beta,
        max_depth: args.max_depth,
        burn_in_fraction: args.burn_in,
        folds: args.folds,
        seed: args.seed,
    };
    let result = run_experiment(&config)?;

    let summary = format!(
        "{} units={} iterations={} folds={} seed={}: mean accuracy {:.1}% (map tree {:.1}%)",
        config.sampler,
        config.units,
        config.iterations,
        config.folds,
        config.seed,
        result.mean_accuracy * 100.0,
        result.mean_accuracy_map_tree * 100.0,
    );
    eprintln!("{summary}");
    eprintln!("wall clock: {:.2}s", result.wall_clock_seconds);

    match args.out {
        Some(path) => {
            emit_results(&result, &path)?;
            println!("{}", path.display());
        }
        None => {
            let json = result.to_json()?;
            std::io::stdout().write_all(json.as_bytes())?;
        }
    }
    Ok(())
}

fn table(args: TableArgs) -> Result<()> {
    let results: Vec<RunResult> = args
        .inputs
        .iter()
        .map(RunResult::load)
        .collect::<Result<_>>()?;
    print!("{}", compare_table(&results));
    if let Some(path) = args.csv {
        std::fs::write(&path, compare_table_csv(&results))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn synth_cmd(args: SynthArgs) -> Result<()> {
    let table = match args.kind {
        SynthKind::Scadi => synth::scadi_like(args.seed),
        SynthKind::Lung => synth::lung_cancer_like(args.seed),
    };
    table
        .write_csv(&args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "wrote {} rows x {} columns to {}",
        table.rows.len(),
        table.headers.len(),
        args.out.display()
    );
    Ok(())
}
