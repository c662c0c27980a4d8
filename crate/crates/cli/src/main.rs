use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use onebit_cli::config::{ChshConfig, MeasureConfig, PropsConfig, QkdConfig, QrngConfig, TeleportConfig};
use onebit_cli::{execute, parse_document, replay, CliError, ExperimentConfig, Verdict};

/// Seeded experiments on one-bit quantum systems. Results go to stdout as
/// a JSON document; a human summary goes to stderr.
#[derive(Parser)]
#[command(name = "onebit", version)]
struct Cli {
    /// Worker threads for sampling; never changes any reported number.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sampled CHSH experiment on a two-system state.
    Chsh(ChshConfig),
    /// Teleport random or fixed inputs through a shared pair.
    Teleport(TeleportConfig),
    /// Entanglement-based key distribution with a Bell-test check.
    Qkd(QkdConfig),
    /// Random bits from complementary measurements.
    Qrng(QrngConfig),
    /// Build the state fixed by a complete set of propositions.
    StateFromProps(PropsConfig),
    /// Repeated measurement of a prepared single system.
    Measure(MeasureConfig),
    /// Run an experiment described by a TOML or JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Re-run a result document and compare every result bit-for-bit.
    Replay {
        /// Result document, or `-` for stdin.
        document: PathBuf,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let config = match cli.command {
        Command::Chsh(c) => ExperimentConfig::Chsh(c),
        Command::Teleport(c) => ExperimentConfig::Teleport(c),
        Command::Qkd(c) => ExperimentConfig::Qkd(c),
        Command::Qrng(c) => ExperimentConfig::Qrng(c),
        Command::StateFromProps(c) => ExperimentConfig::StateFromProps(c),
        Command::Measure(c) => ExperimentConfig::Measure(c),
        Command::Run { config } => ExperimentConfig::from_file(&config)?,
        Command::Replay { document } => {
            let text = if document.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(&document)?
            };
            let doc = parse_document(&text)?;
            let verdict = replay(&doc)?;
            println!("{}", serde_json::to_string_pretty(&verdict).expect("verdict serializes"));
            return Ok(match verdict {
                Verdict::Pass => {
                    eprintln!("replay: pass ({})", doc.config.name());
                    ExitCode::SUCCESS
                }
                Verdict::Fail { field, reported, recomputed } => {
                    eprintln!("replay: FAIL at {field}: reported {reported}, recomputed {recomputed}");
                    ExitCode::from(1)
                }
            });
        }
    };
    let (doc, summary) = execute(&config, cli.jobs)?;
    print!("{}", doc.to_json());
    eprintln!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("onebit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
