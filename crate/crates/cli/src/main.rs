use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use normsim_cli::config::parse_config;
use normsim_cli::run::{run_experiment_to_dir, run_gen_net, ALL_KINDS};
use normsim_cli::CliError;
use normsim_core::experiments::{ExperimentKind, RunSummary};

/// Deterministic, seedable simulator of social-norm emergence on networked
/// agent populations.
#[derive(Parser)]
#[command(name = "normsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Sectioned key-value config file (`section.key = value` lines);
    /// omitted keys use the documented defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSVs, plot data, and the echoed config.
    #[arg(long, default_value = ".", global = true)]
    out: PathBuf,

    /// Override experiment.base_seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for replications; defaults to all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Print per-condition summaries as experiments finish.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Generate one synthetic network and write it as an edge list.
    GenNet,
    /// Centrality-seeded emergence: top, middle, and bottom slices.
    KeyFew,
    /// Sticky-agent conditions against a paired baseline.
    Stickiness,
    /// Threshold cascade sweep under random shocks.
    ContextSweep,
    /// Power-law topology against a complete clique.
    CliqueCompare,
    /// Run every experiment.
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("normsim: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?,
        None => String::new(),
    };
    fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", cli.out.display())))?;

    let kinds: &[ExperimentKind] = match cli.command {
        Command::GenNet => {
            let mut spec = parse_config(&text, ExperimentKind::KeyFew)?;
            if let Some(seed) = cli.seed {
                spec.base_seed = seed;
            }
            run_gen_net(&spec, &cli.out)?;
            if cli.verbose {
                println!("wrote network.edges ({} nodes)", spec.population);
            }
            return Ok(());
        }
        Command::KeyFew => &[ExperimentKind::KeyFew],
        Command::Stickiness => &[ExperimentKind::Stickiness],
        Command::ContextSweep => &[ExperimentKind::ContextSweep],
        Command::CliqueCompare => &[ExperimentKind::CliqueCompare],
        Command::All => &ALL_KINDS,
    };

    for &kind in kinds {
        let mut spec = parse_config(&text, kind)?;
        if let Some(seed) = cli.seed {
            spec.base_seed = seed;
        }
        let summaries = run_experiment_to_dir(&spec, &cli.out, cli.workers)?;
        if cli.verbose {
            report(kind, &summaries);
        }
    }
    Ok(())
}

fn report(kind: ExperimentKind, summaries: &[RunSummary]) {
    println!("{}:", kind.name());
    for s in summaries {
        match s.mean_iterations {
            Some(mean) => println!(
                "  {:24} mean_iterations={:.1} rate={:.2}",
                s.label, mean, s.emergence_rate
            ),
            None => println!("  {:24} no emerged runs", s.label),
        }
    }
}
