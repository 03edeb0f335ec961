//! Pair sources shared by `lambda-dist` and `heatmap`: a pairs directory or
//! a pool of simulated pairs.

use std::path::PathBuf;

use anyhow::{bail, Result};
use bitmix::stats::{CoverKind, PairPool, SyntheticSpec};
use bitmix::stego_sim::EmbedMode;
use clap::{Args, ValueEnum};

use crate::manifest::Recorder;
use crate::pairs::load_pairs;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Uniform,
    Adaptive,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CoverArg {
    Textured,
    Clustered,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Directory of <name>.cover.pgm / <name>.stego.pgm pairs.
    #[arg(required_unless_present = "synthetic", conflicts_with = "synthetic")]
    pub pairs_dir: Option<PathBuf>,
    /// Simulate pairs at this change rate instead of reading a directory.
    #[arg(long, value_name = "RHO")]
    pub synthetic: Option<f64>,
    /// Side of the simulated images.
    #[arg(long, default_value_t = 256, requires = "synthetic")]
    pub size: usize,
    /// Number of simulated pairs in the pool.
    #[arg(long, default_value_t = 16, requires = "synthetic")]
    pub pairs: usize,
    /// Embedding mode for simulated pairs.
    #[arg(long, value_enum, default_value_t = ModeArg::Uniform, requires = "synthetic")]
    pub mode: ModeArg,
    /// Odd window side for adaptive embedding.
    #[arg(long, default_value_t = 3, requires = "synthetic")]
    pub window: usize,
    /// Synthetic cover model: texture everywhere, or one textured patch.
    #[arg(long, value_enum, default_value_t = CoverArg::Textured, requires = "synthetic")]
    pub cover: CoverArg,
    /// Side of the textured patch for clustered covers.
    #[arg(long, default_value_t = 48, requires = "synthetic")]
    pub patch: usize,
}

impl SourceArgs {
    pub fn build(&self, seed: u64, recorder: &mut Recorder) -> Result<PairPool> {
        if let Some(rate) = self.synthetic {
            if self.pairs == 0 {
                bail!("--pairs must be at least 1");
            }
            let spec = SyntheticSpec {
                width: self.size,
                height: self.size,
                count: self.pairs,
                change_rate: rate,
                mode: match self.mode {
                    ModeArg::Uniform => EmbedMode::Uniform,
                    ModeArg::Adaptive => EmbedMode::Adaptive {
                        window: self.window,
                    },
                },
                cover: match self.cover {
                    CoverArg::Textured => CoverKind::Textured,
                    CoverArg::Clustered => CoverKind::Clustered { patch: self.patch },
                },
                seed,
            };
            return Ok(spec.pool()?);
        }
        let dir = self.pairs_dir.as_ref().expect("clap requires a source");
        let pairs = load_pairs(dir)?;
        let mut loaded = Vec::with_capacity(pairs.len());
        for p in pairs {
            recorder.input(&p.cover_path);
            recorder.input(&p.stego_path);
            loaded.push(p.pair);
        }
        Ok(PairPool::new(loaded)?)
    }
}
