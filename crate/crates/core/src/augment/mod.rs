//! Cover/stego pair mixing.
//!
//! A box is sampled with area fraction `γ′ ~ Unif(0, γ)`, the box region is
//! swapped between cover `C` and stego `S`, and each result is labelled by
//! the share of the embedding changes it inherits:
//!
//! ```text
//! C_S = M⊙S + (1−M)⊙C        S_C = M⊙C + (1−M)⊙S
//! λ   = |changes inside M| / |changes|,   y(C_S) = λ,   y(S_C) = 1 − λ
//! ```
//!
//! CutMix and MixUp baselines and the mini-batch assembler live here too.

mod batch;
mod bbox;
mod mix;

pub use batch::{
    assemble_batch, assemble_batch_with_keys, AugmentedBatch, LabelConvention, Method, MixConfig,
    Provenance,
};
pub use bbox::{bbox_with_area_fraction, sample_bbox, BBox};
pub use mix::{
    bitmix_pair, cutmix_labels, cutmix_pair, mixup_pair, modified_in_box, swap_patch, swap_ratio,
    MixedPair, PixelKind, Raster,
};

pub(crate) use bbox::check_gamma;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AugmentError {
    #[error("maximum mix ratio {0} outside (0, 1]")]
    InvalidGamma(f64),
    #[error("apply fraction {0} outside [0, 1]")]
    InvalidApplyFraction(f64),
    #[error("mix coefficient {0} outside [0, 1]")]
    InvalidCoefficient(f64),
    #[error("box {bbox:?} does not fit a {width}x{height} image")]
    BoxOutOfBounds {
        bbox: BBox,
        width: usize,
        height: usize,
    },
    #[error("cover and stego are identical; the swap ratio is undefined")]
    ZeroDenominator,
    #[error("batch has no pairs")]
    EmptyBatch,
    #[error("pair is {found:?}, batch expects {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("inconsistent batch layout: {0}")]
    Layout(String),
}
