use std::path::PathBuf;

use anyhow::{bail, Result};
use bitmix::augment::{assemble_batch_with_keys, LabelConvention};
use bitmix::batch_io::encode_batch;
use bitmix::rng::{key_for_name, substream, Purpose};
use bitmix::{Method, MixConfig, StegoPair};
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{ensure_dir, parse, write_file};
use crate::manifest::Recorder;
use crate::pairs::load_pairs;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory of <name>.cover.pgm / <name>.stego.pgm pairs.
    pub pairs_dir: PathBuf,
    /// Maximum box area fraction.
    #[arg(long, default_value_t = 0.25, value_parser = parse::gamma)]
    pub gamma: f64,
    /// bitmix, cutmix, mixup or none.
    #[arg(long, default_value = "bitmix")]
    pub method: Method,
    /// Pairs per batch; each container holds twice as many images.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub batch_size: u32,
    /// Share of each batch's pairs that are mixed.
    #[arg(long, default_value_t = 0.5, value_parser = parse::unit)]
    pub apply_fraction: f64,
    /// Fixed MixUp weight instead of drawing it per pair.
    #[arg(long, value_parser = parse::unit)]
    pub mixup_coef: Option<f64>,
    /// Label the stego class 1 instead of the cover class.
    #[arg(long)]
    pub stego_positive: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for batch_NNNN.bmix files.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args, argv: &[String]) -> Result<()> {
    let mut recorder = Recorder::start(Some(args.seed));
    let mut pairs = load_pairs(&args.pairs_dir)?;

    let dims = pairs[0].pair.dimensions();
    let offenders: Vec<String> = pairs
        .iter()
        .filter(|p| p.pair.dimensions() != dims)
        .map(|p| {
            let (w, h) = p.pair.dimensions();
            format!("{}: {w}x{h}", p.name)
        })
        .collect();
    if !offenders.is_empty() {
        bail!(
            "pairs must share one size ({}: {}x{}); differing:\n  {}",
            pairs[0].name,
            dims.0,
            dims.1,
            offenders.join("\n  ")
        );
    }
    for p in &pairs {
        recorder.input(&p.cover_path);
        recorder.input(&p.stego_path);
    }

    pairs.shuffle(&mut substream(args.seed, Purpose::Shuffle, 0));

    let config = MixConfig {
        apply_fraction: args.apply_fraction,
        mixup_coefficient: args.mixup_coef,
        labels: if args.stego_positive {
            LabelConvention::StegoPositive
        } else {
            LabelConvention::CoverPositive
        },
        ..MixConfig::new(args.method, args.gamma, args.seed)
    };
    config.validate()?;

    let chunks: Vec<&[crate::pairs::NamedPair]> = pairs.chunks(args.batch_size as usize).collect();
    let encoded: Vec<Result<Vec<u8>>> = chunks
        .par_iter()
        .map(|chunk| {
            let batch_pairs: Vec<StegoPair> = chunk.iter().map(|p| p.pair.clone()).collect();
            let keys: Vec<u64> = chunk.iter().map(|p| key_for_name(&p.name)).collect();
            let batch = assemble_batch_with_keys(&batch_pairs, &keys, &config)?;
            Ok(encode_batch(&batch)?)
        })
        .collect();

    ensure_dir(&args.out)?;
    for (i, bytes) in encoded.into_iter().enumerate() {
        let path = args.out.join(format!("batch_{i:04}.bmix"));
        write_file(&path, &bytes?)?;
        recorder.output(path);
    }
    recorder.finish(&args.out, argv)?;
    println!(
        "wrote {} batch(es) from {} pair(s), method {}",
        chunks.len(),
        pairs.len(),
        args.method
    );
    Ok(())
}
