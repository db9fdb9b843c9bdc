use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(name = "relprobe", version, about = "Build semantic-relation probes and score agent responses")]
struct Cli {
    /// Run configuration (TOML)
    #[arg(short, long, global = true, default_value = "relprobe.toml")]
    config: PathBuf,

    /// Override the worker thread count from the config (0 = all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest tuples, augment, expand relatum sets and generate probes
    Build,
    /// Check every response file against the probe set
    Validate,
    /// Score every agent and store per-agent results
    Evaluate,
    /// Write tables, figure data and statistics from stored results
    Report,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let responses = !matches!(cli.command, Command::Build);
    let result = commands::run(&cli.config, cli.threads, responses, |cfg, threads| match cli.command {
        Command::Build => commands::build(cfg),
        Command::Validate => commands::validate(cfg),
        Command::Evaluate => commands::evaluate(cfg, threads),
        Command::Report => commands::report(cfg),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            if let relprobe::Error::Schema { errors, .. } = &e {
                for line in errors {
                    eprintln!("  {line}");
                }
            }
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
