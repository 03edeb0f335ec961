//! `bitmix` command-line front end.
//!
//! Exit codes: 0 success, 1 data or runtime failure, 2 usage error.

mod cmd;
mod manifest;
mod pairs;
mod synthetic;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "bitmix",
    version,
    about = "Cover/stego patch-swap augmentation for steganalysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Embed simulated ±1 payloads into a directory of PGM covers.
    Simulate(cmd::simulate::Args),
    /// Assemble augmented mini-batches from cover/stego pairs into BMIX files.
    Augment(cmd::augment::Args),
    /// Histogram of the swap ratio lambda for one or more gamma values.
    LambdaDist(cmd::lambda_dist::Args),
    /// Detection error P_E and AUC from a score,truth CSV.
    Metrics(cmd::metrics::Args),
    /// Where modifications surviving a swap lie, over draws in a lambda band.
    Heatmap(cmd::heatmap::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Simulate(args) => cmd::simulate::run(args, &argv),
        Command::Augment(args) => cmd::augment::run(args, &argv),
        Command::LambdaDist(args) => cmd::lambda_dist::run(args, &argv),
        Command::Metrics(args) => cmd::metrics::run(args, &argv),
        Command::Heatmap(args) => cmd::heatmap::run(args, &argv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
