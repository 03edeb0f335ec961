use std::path::PathBuf;

use anyhow::{anyhow, Result};
use bitmix::batch_io::write_csv_heatmap;
use bitmix::rng::{substream, Purpose};
use bitmix::save_pgm;
use bitmix::stats::{modified_pixel_heatmap, StatsError};

use super::{ensure_dir, parse, write_file};
use crate::manifest::Recorder;
use crate::synthetic::SourceArgs;

/// Outer frame width as a fraction of each side, used for the summary line.
const FRAME_MARGIN: f64 = 0.125;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1.0, value_parser = parse::gamma)]
    pub gamma: f64,
    /// Accepted lambda range, inclusive.
    #[arg(long, default_value = "0.85:0.95", value_parser = parse::band)]
    pub band: (f64, f64),
    /// Number of (pair, box) draws; only those in the band are accumulated.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args, argv: &[String]) -> Result<()> {
    let mut recorder = Recorder::start(Some(args.seed));
    let mut pool = args.source.build(args.seed, &mut recorder)?;
    let mut rng = substream(args.seed, Purpose::Sample, 0);
    let map = match modified_pixel_heatmap(
        &mut pool,
        args.gamma,
        args.band,
        args.samples as usize,
        &mut rng,
    ) {
        Err(StatsError::NoSamplesInBand { draws }) => {
            return Err(anyhow!(
                "0 of {draws} draws had lambda in [{}, {}]; widen the band or raise --samples",
                args.band.0,
                args.band.1
            ))
        }
        other => other?,
    };

    ensure_dir(&args.out)?;
    let mut csv = Vec::new();
    write_csv_heatmap(&map, &mut csv)?;
    let csv_path = args.out.join("heatmap.csv");
    write_file(&csv_path, &csv)?;
    let pgm_path = args.out.join("heatmap.pgm");
    write_file(&pgm_path, &save_pgm(&map.to_pgm_image()))?;
    recorder.output(csv_path);
    recorder.output(pgm_path);
    recorder.finish(&args.out, argv)?;

    let (outer, inner) = map.frame_means(FRAME_MARGIN);
    println!(
        "accepted {} of {} draws; mean density outer frame {outer:.6}, interior {inner:.6}",
        map.accepted(),
        args.samples
    );
    Ok(())
}
