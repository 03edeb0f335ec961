use std::path::PathBuf;

use anyhow::Result;
use bitmix::batch_io::{format_sig9, write_csv_histogram, write_csv_histograms_long};
use bitmix::rng::{substream, Purpose};
use bitmix::stats::{lambda_distribution, DEFAULT_BINS};

use super::{ensure_dir, parse, write_file};
use crate::manifest::Recorder;
use crate::synthetic::SourceArgs;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma-separated gamma values.
    #[arg(long, value_delimiter = ',', default_value = "1,0.75,0.5,0.25", value_parser = parse::gamma)]
    pub gamma: Vec<f64>,
    /// Draws per gamma value.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_BINS as u64, value_parser = clap::value_parser!(u64).range(2..))]
    pub bins: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args, argv: &[String]) -> Result<()> {
    let mut recorder = Recorder::start(Some(args.seed));
    let mut pool = args.source.build(args.seed, &mut recorder)?;
    ensure_dir(&args.out)?;

    let mut all = Vec::with_capacity(args.gamma.len());
    for (k, &gamma) in args.gamma.iter().enumerate() {
        let mut rng = substream(args.seed, Purpose::Sample, k as u64);
        let hist = lambda_distribution(
            &mut pool,
            gamma,
            args.samples as usize,
            args.bins as usize,
            &mut rng,
        )?;
        let mut csv = Vec::new();
        write_csv_histogram(&hist, &mut csv)?;
        let path = args
            .out
            .join(format!("lambda_gamma_{}.csv", format_sig9(gamma)));
        write_file(&path, &csv)?;
        recorder.output(path);
        println!(
            "gamma={} P(lambda<0.1)={:.4}",
            format_sig9(gamma),
            hist.mass_below(0.1)?
        );
        all.push((gamma, hist));
    }

    let mut csv = Vec::new();
    write_csv_histograms_long(&all, &mut csv)?;
    let path = args.out.join("lambda_long.csv");
    write_file(&path, &csv)?;
    recorder.output(path);
    recorder.finish(&args.out, argv)?;
    Ok(())
}
