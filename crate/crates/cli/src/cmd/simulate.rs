use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Result};
use bitmix::image::read_pgm_file;
use bitmix::rng::{key_for_name, substream, Purpose};
use bitmix::stego_sim::{
    bpp_to_change_rate, embed_adaptive, embed_uniform, EmbedMode, EmbedSpec, SimError,
};
use bitmix::{save_pgm, StegoPair};
use clap::ArgGroup;
use rayon::prelude::*;

use super::{ensure_dir, parse, write_file};
use crate::manifest::Recorder;
use crate::pairs::{files_with_suffix, COVER_SUFFIX, STEGO_SUFFIX};
use crate::synthetic::ModeArg;

const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, clap::Args)]
#[command(group(ArgGroup::new("payload").required(true).args(["bpp", "change_rate"])))]
pub struct Args {
    /// Directory of 8-bit binary PGM covers.
    pub covers_dir: PathBuf,
    /// Where <name>.cover.pgm / <name>.stego.pgm are written.
    pub out_dir: PathBuf,
    /// Payload in bits per pixel, converted to a change rate.
    #[arg(long, value_parser = parse::bpp)]
    pub bpp: Option<f64>,
    /// Expected fraction of pixels changed.
    #[arg(long, value_parser = parse::change_rate)]
    pub change_rate: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Uniform)]
    pub mode: ModeArg,
    /// Odd window side for the adaptive cost map.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn simulate_one(path: &Path, name: &str, spec: &EmbedSpec, seed: u64) -> Result<StegoPair> {
    let cover = read_pgm_file(path)?;
    let mut rng = substream(seed, Purpose::Embed, key_for_name(name));
    for _ in 0..MAX_ATTEMPTS {
        let result = match spec.mode() {
            EmbedMode::Uniform => embed_uniform(&cover, spec, &mut rng),
            EmbedMode::Adaptive { .. } => embed_adaptive(&cover, spec, &mut rng),
        };
        match result {
            Err(SimError::DegenerateOutput) => continue,
            other => return Ok(other?),
        }
    }
    Err(SimError::DegenerateOutput.into())
}

pub fn run(args: Args, argv: &[String]) -> Result<()> {
    let mut recorder = Recorder::start(Some(args.seed));
    let rate = match (args.bpp, args.change_rate) {
        (Some(bpp), None) => bpp_to_change_rate(bpp)?,
        (None, Some(rate)) => rate,
        _ => unreachable!("clap enforces exactly one payload flag"),
    };
    let mode = match args.mode {
        ModeArg::Uniform => EmbedMode::Uniform,
        ModeArg::Adaptive => EmbedMode::Adaptive {
            window: args.window,
        },
    };
    let spec = EmbedSpec::new(rate, mode, args.seed)?;

    let covers = files_with_suffix(&args.covers_dir, ".pgm")?;
    if covers.is_empty() {
        bail!("no .pgm files in {}", args.covers_dir.display());
    }
    ensure_dir(&args.out_dir)?;

    let names: Vec<String> = covers
        .iter()
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    let results: Vec<Result<StegoPair>> = covers
        .par_iter()
        .zip(names.par_iter())
        .map(|(path, name)| simulate_one(path, name, &spec, args.seed))
        .collect();

    let mut failures = Vec::new();
    let mut changed = 0usize;
    let mut pixels = 0usize;
    for ((path, name), result) in covers.iter().zip(&names).zip(results) {
        recorder.input(path);
        match result {
            Ok(pair) => {
                let cover_out = args.out_dir.join(format!("{name}{COVER_SUFFIX}"));
                let stego_out = args.out_dir.join(format!("{name}{STEGO_SUFFIX}"));
                write_file(&cover_out, &save_pgm(pair.cover()))?;
                write_file(&stego_out, &save_pgm(pair.stego()))?;
                recorder.output(cover_out);
                recorder.output(stego_out);
                changed += pair.modified();
                pixels += pair.cover().len();
            }
            Err(e) => failures.push(format!("{}: {e:#}", path.display())),
        }
    }
    let done = covers.len() - failures.len();
    recorder.finish(&args.out_dir, argv)?;
    if done > 0 {
        println!(
            "simulated {done} pair(s), change rate {rate:.6}, realized {:.6}",
            changed as f64 / pixels as f64
        );
    }
    if !failures.is_empty() {
        return Err(anyhow!(
            "{} cover(s) failed:\n  {}",
            failures.len(),
            failures.join("\n  ")
        ));
    }
    Ok(())
}
