use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fclt::harness::{self, RunOptions, CONFIG_SCHEMA, EXIT_CRITERION, EXPERIMENTS};

#[derive(Parser)]
#[command(name = "fclt", version, about = "Heavy-tailed linear process experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: config output_dir, else results/<experiment>).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Write per-replica paths under <out>/paths/.
        #[arg(long)]
        dump_paths: bool,
    },
    /// List registered experiments and the config schema.
    List,
    /// Run the deterministic checks.
    Selftest,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, workers, dump_paths } => {
            let outcome = harness::run(&config, &RunOptions { out, workers, dump_paths });
            if let Some(out) = &outcome.output {
                for c in &out.criteria {
                    println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
                for note in &out.notes {
                    println!("note: {note}");
                }
            }
            if outcome.exit_code == 0 || outcome.exit_code == EXIT_CRITERION {
                println!("{}", outcome.message);
                if let Some(dir) = &outcome.out_dir {
                    println!("outputs in {}", dir.display());
                }
            } else {
                eprintln!("error: {}", outcome.message);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Command::List => {
            for e in EXPERIMENTS {
                println!("{}", e.name);
                println!("    {}", e.description);
                if !e.thresholds.is_empty() {
                    println!("    thresholds: {}", e.thresholds.join(", "));
                }
            }
            println!();
            println!("{CONFIG_SCHEMA}");
            ExitCode::SUCCESS
        }
        Command::Selftest => {
            let checks = harness::selftest();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CRITERION as u8)
            }
        }
    }
}
