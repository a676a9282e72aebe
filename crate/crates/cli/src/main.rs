use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use welfare_cli::commands::{
    cmd_compare, cmd_converge, cmd_exact, cmd_indices, cmd_simulate, CliError,
};
use welfare_cli::config::RunConfig;

/// Welfare analysis of two-tier voting systems.
#[derive(Parser)]
#[command(name = "welfare-order", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory for JSON/CSV artifacts.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Worker threads (0 or absent: library default); affects speed only,
    /// never results. Env fallback: WELFARE_ORDER_THREADS.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
    /// Override the configured sample count.
    #[arg(long, global = true, value_name = "M")]
    samples: Option<u64>,
    /// Override the configured seed.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Proportionality indices and asymptotic limits.
    Indices,
    /// Monte Carlo run with JSON summary and optional samples CSV.
    Simulate,
    /// Exact enumeration for discrete margins.
    Exact,
    /// Dominance comparison of two allocations.
    Compare,
    /// Convergence sweep over society sizes.
    Converge,
}

fn thread_count(cli_threads: Option<usize>) -> Result<Option<usize>, CliError> {
    if cli_threads.is_some() {
        return Ok(cli_threads);
    }
    match env::var("WELFARE_ORDER_THREADS") {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Config(format!("WELFARE_ORDER_THREADS must be an integer, got {raw:?}"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = thread_count(cli.threads)? {
        if threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
        }
    }
    let path = cli
        .config
        .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if let Some(samples) = cli.samples {
        cfg.samples = samples;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", cli.out.display())))?;
    match cli.command {
        Command::Indices => cmd_indices(&cfg, &cli.out),
        Command::Simulate => cmd_simulate(&cfg, &cli.out),
        Command::Exact => cmd_exact(&cfg, &cli.out),
        Command::Compare => cmd_compare(&cfg, &cli.out),
        Command::Converge => cmd_converge(&cfg, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
