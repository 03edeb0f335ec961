//! BitMix: cover/stego patch swapping with embedding-adaptive soft labels
//! for training spatial-domain steganalysis detectors.
//!
//! - [`image`]: 8-bit rasters, binary PGM, the D4 symmetries, pixel diffs.
//! - [`stego_sim`]: simulated ±1 embedding that produces cover/stego pairs.
//! - [`augment`]: box sampling, BitMix/CutMix/MixUp and the batch assembler.
//! - [`stats`]: swap-ratio histograms, modification heatmaps, P_E and AUC.
//! - [`batch_io`]: the BMIX container and CSV output.
//! - [`rng`]: seeded, named substreams.

pub mod augment;
pub mod batch_io;
pub mod image;
pub mod rng;
pub mod stats;
pub mod stego_sim;

pub use augment::{
    assemble_batch, bitmix_pair, cutmix_labels, mixup_pair, sample_bbox, AugmentedBatch, BBox,
    Method, MixConfig, MixedPair,
};
pub use image::{apply_d4, diff_count, diff_mask, load_pgm, save_pgm, D4Transform, GrayImage};
pub use stego_sim::{EmbedSpec, StegoPair};
