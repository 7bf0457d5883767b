use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eqkit_cli::report::AnalysisOutcome;
use eqkit_cli::{available_csvs, emit_csv, parse_config, registry, run, CliError};

/// Strategic-form game analysis: equilibria, structure checks, efficiency.
#[derive(Parser)]
#[command(name = "eqkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses described by a TOML config file.
    Run {
        /// Path to the run configuration.
        config: PathBuf,
        /// Output directory (overrides the config's `out_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed override for every sampled computation.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the registered games.
    ListGames,
    /// Show a game's parameters and capabilities.
    Describe {
        /// Registered game name.
        game: String,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> Result<ExitCode, CliError> {
    match Cli::parse().command {
        Command::Run { config, out, seed } => run_command(config, out, seed),
        Command::ListGames => {
            for (name, description) in registry::list() {
                println!("{name:<24} {description}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Describe { game } => {
            println!("{game}");
            println!("{}", registry::describe(&game)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_command(
    config_path: PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
) -> Result<ExitCode, CliError> {
    let text = std::fs::read_to_string(&config_path)?;
    let mut config = parse_config(&text)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = &out {
        config.out_dir = Some(out.display().to_string());
    }
    let out_dir = PathBuf::from(config.out_dir.clone().unwrap_or_else(|| "eqkit-out".into()));

    let report = run(&config)?;

    std::fs::create_dir_all(&out_dir)?;
    let report_path = out_dir.join("report.json");
    std::fs::write(&report_path, report.to_json())?;

    for kind in available_csvs(&report) {
        let path = emit_csv(&report, kind, &out_dir)?;
        println!("wrote {}", path.display());
    }
    println!("wrote {}", report_path.display());

    for record in &report.analyses {
        match &record.outcome {
            AnalysisOutcome::Ok { .. } => println!("{:<20} ok", record.analysis),
            AnalysisOutcome::Error { message } => {
                println!("{:<20} error: {message}", record.analysis)
            }
            AnalysisOutcome::Skipped { reason } => {
                println!("{:<20} {reason}", record.analysis)
            }
        }
    }

    Ok(if report.all_completed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
