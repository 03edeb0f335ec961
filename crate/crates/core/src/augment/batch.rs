use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{
    bitmix_pair, check_gamma, cutmix_pair, mixup_pair, sample_bbox, AugmentError, BBox, PixelKind,
    Raster,
};
use crate::image::D4Transform;
use crate::rng::{substream, Purpose};
use crate::stego_sim::StegoPair;

/// Augmentation applied to the selected pairs of a batch. The discriminant is
/// the on-disk method code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Method {
    None = 0,
    BitMix = 1,
    CutMix = 2,
    MixUp = 3,
}

impl Method {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Method::None),
            1 => Some(Method::BitMix),
            2 => Some(Method::CutMix),
            3 => Some(Method::MixUp),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::None => "none",
            Method::BitMix => "bitmix",
            Method::CutMix => "cutmix",
            Method::MixUp => "mixup",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Method::None),
            "bitmix" => Ok(Method::BitMix),
            "cutmix" => Ok(Method::CutMix),
            "mixup" => Ok(Method::MixUp),
            other => Err(format!("unknown method '{other}'")),
        }
    }
}

/// Which class is the positive (label 1) target.
///
/// `CoverPositive` initialises covers to 1 and stegos to 0 and writes
/// `(λ, 1−λ)` for a mixed pair. `StegoPositive` complements every label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LabelConvention {
    #[default]
    CoverPositive,
    StegoPositive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixConfig {
    /// Maximum box area fraction, in `(0, 1]`.
    pub gamma: f64,
    pub method: Method,
    /// Fraction of pairs (taken from the front of the batch) to augment.
    pub apply_fraction: f64,
    pub seed: u64,
    /// Fixed MixUp weight; `None` draws it from `Unif(0, γ)` per pair.
    pub mixup_coefficient: Option<f64>,
    pub labels: LabelConvention,
}

impl MixConfig {
    pub fn new(method: Method, gamma: f64, seed: u64) -> Self {
        Self {
            gamma,
            method,
            apply_fraction: 0.5,
            seed,
            mixup_coefficient: None,
            labels: LabelConvention::CoverPositive,
        }
    }

    pub fn validate(&self) -> Result<(), AugmentError> {
        check_gamma(self.gamma)?;
        if !(0.0..=1.0).contains(&self.apply_fraction) {
            return Err(AugmentError::InvalidApplyFraction(self.apply_fraction));
        }
        if let Some(c) = self.mixup_coefficient {
            if !(0.0..=1.0).contains(&c) {
                return Err(AugmentError::InvalidCoefficient(c));
            }
        }
        Ok(())
    }

    /// Number of pairs augmented in a batch of `pairs`.
    pub fn augmented_count(&self, pairs: usize) -> usize {
        if self.method == Method::None {
            0
        } else {
            ((self.apply_fraction * pairs as f64).floor() as usize).min(pairs)
        }
    }
}

/// Per-pair record of what was done.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub transform: D4Transform,
    pub method: Method,
    /// Empty for unaugmented and MixUp pairs.
    pub bbox: BBox,
    /// Swap ratio, area fraction or MixUp weight; 0 when unaugmented.
    pub lambda: f32,
}

/// `2N` images and labels, cover side first: pair `i` sits at `i` and `N+i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedBatch {
    width: usize,
    height: usize,
    items: Vec<Raster>,
    labels: Vec<f32>,
    provenance: Vec<Provenance>,
}

impl AugmentedBatch {
    /// Checks layout invariants: `2N` items of one size, `2N` labels in
    /// `[0, 1]`, `N ≥ 1` provenance records.
    pub fn from_parts(
        width: usize,
        height: usize,
        items: Vec<Raster>,
        labels: Vec<f32>,
        provenance: Vec<Provenance>,
    ) -> Result<Self, AugmentError> {
        let n = provenance.len();
        if n == 0 {
            return Err(AugmentError::EmptyBatch);
        }
        if items.len() != 2 * n || labels.len() != 2 * n {
            return Err(AugmentError::Layout(format!(
                "{} items and {} labels for {n} pairs",
                items.len(),
                labels.len()
            )));
        }
        if let Some(item) = items.iter().find(|r| r.dimensions() != (width, height)) {
            return Err(AugmentError::DimensionMismatch {
                expected: (width, height),
                found: item.dimensions(),
            });
        }
        if let Some(&l) = labels.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(AugmentError::Layout(format!("label {l} outside [0, 1]")));
        }
        Ok(Self {
            width,
            height,
            items,
            labels,
            provenance,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pair_count(&self) -> usize {
        self.provenance.len()
    }

    pub fn items(&self) -> &[Raster] {
        &self.items
    }

    pub fn labels(&self) -> &[f32] {
        &self.labels
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Cover-side and stego-side item of pair `i`.
    pub fn pair(&self, i: usize) -> (&Raster, &Raster) {
        (&self.items[i], &self.items[self.pair_count() + i])
    }

    pub fn pair_labels(&self, i: usize) -> (f32, f32) {
        (self.labels[i], self.labels[self.pair_count() + i])
    }

    /// The common pixel kind, or `None` when items disagree.
    pub fn pixel_kind(&self) -> Option<PixelKind> {
        let first = self.items[0].kind();
        self.items
            .iter()
            .all(|r| r.kind() == first)
            .then_some(first)
    }
}

struct PairOutput {
    cover_side: Raster,
    stego_side: Raster,
    label_cs: f32,
    label_sc: f32,
    provenance: Provenance,
}

fn augment_one(
    pair: &StegoPair,
    key: u64,
    augment: bool,
    config: &MixConfig,
) -> Result<PairOutput, AugmentError> {
    let (w, h) = pair.dimensions();
    let mut transform_rng = substream(config.seed, Purpose::Transform, key);
    let choices: &[D4Transform] = if w == h {
        &D4Transform::ALL
    } else {
        &D4Transform::SHAPE_PRESERVING
    };
    let transform = choices[transform_rng.gen_range(0..choices.len())];
    let pair = pair.apply_d4(transform);
    let (w, h) = pair.dimensions();

    let method = if augment { config.method } else { Method::None };
    let mut mix_rng = substream(config.seed, Purpose::Mix, key);
    let mixed = match method {
        Method::None => None,
        Method::BitMix => Some(bitmix_pair(
            &pair,
            sample_bbox(w, h, config.gamma, &mut mix_rng)?,
        )?),
        Method::CutMix => Some(cutmix_pair(
            &pair,
            sample_bbox(w, h, config.gamma, &mut mix_rng)?,
        )?),
        Method::MixUp => {
            let coefficient = config
                .mixup_coefficient
                .unwrap_or_else(|| mix_rng.gen::<f64>() * config.gamma);
            Some(mixup_pair(&pair, coefficient)?)
        }
    };

    let out = match mixed {
        None => {
            let (cover, stego) = pair.into_parts();
            PairOutput {
                cover_side: Raster::Gray(cover),
                stego_side: Raster::Gray(stego),
                label_cs: 1.0,
                label_sc: 0.0,
                provenance: Provenance {
                    transform,
                    method: Method::None,
                    bbox: BBox::default(),
                    lambda: 0.0,
                },
            }
        }
        Some(mixed) => {
            let label_cs = mixed.label_cs() as f32;
            let provenance = Provenance {
                transform,
                method,
                bbox: mixed.bbox(),
                lambda: mixed.lambda() as f32,
            };
            let (cs, sc) = mixed.into_images();
            PairOutput {
                cover_side: cs,
                stego_side: sc,
                label_cs,
                label_sc: 1.0 - label_cs,
                provenance,
            }
        }
    };
    Ok(match config.labels {
        LabelConvention::CoverPositive => out,
        LabelConvention::StegoPositive => PairOutput {
            label_cs: out.label_sc,
            label_sc: out.label_cs,
            ..out
        },
    })
}

/// Builds one mini-batch from `pairs`, drawing per-pair randomness from
/// substreams indexed by position.
pub fn assemble_batch(
    pairs: &[StegoPair],
    config: &MixConfig,
) -> Result<AugmentedBatch, AugmentError> {
    let keys: Vec<u64> = (0..pairs.len() as u64).collect();
    assemble_batch_with_keys(pairs, &keys, config)
}

/// Like [`assemble_batch`], with an explicit substream key per pair.
///
/// Each pair gets one D4 element applied jointly to cover and stego; the
/// first `⌊apply_fraction·N⌋` pairs are then mixed with a fresh box (or
/// weight). Callers shuffle pair order upstream so the augmented half varies.
pub fn assemble_batch_with_keys(
    pairs: &[StegoPair],
    keys: &[u64],
    config: &MixConfig,
) -> Result<AugmentedBatch, AugmentError> {
    config.validate()?;
    if pairs.is_empty() {
        return Err(AugmentError::EmptyBatch);
    }
    if keys.len() != pairs.len() {
        return Err(AugmentError::Layout(format!(
            "{} keys for {} pairs",
            keys.len(),
            pairs.len()
        )));
    }
    let dims = pairs[0].dimensions();
    if let Some(p) = pairs.iter().find(|p| p.dimensions() != dims) {
        return Err(AugmentError::DimensionMismatch {
            expected: dims,
            found: p.dimensions(),
        });
    }

    let n = pairs.len();
    let augmented = config.augmented_count(n);
    let mut cover_side = Vec::with_capacity(n);
    let mut stego_side = Vec::with_capacity(n);
    let mut cover_labels = Vec::with_capacity(n);
    let mut stego_labels = Vec::with_capacity(n);
    let mut provenance = Vec::with_capacity(n);
    for (i, (pair, &key)) in pairs.iter().zip(keys).enumerate() {
        let out = augment_one(pair, key, i < augmented, config)?;
        cover_side.push(out.cover_side);
        stego_side.push(out.stego_side);
        cover_labels.push(out.label_cs);
        stego_labels.push(out.label_sc);
        provenance.push(out.provenance);
    }

    let mut items = cover_side;
    items.append(&mut stego_side);
    if config.method == Method::MixUp {
        // one pixel type per container
        for item in &mut items {
            *item = item.to_float();
        }
    }
    let mut labels = cover_labels;
    labels.append(&mut stego_labels);
    let (w, h) = items[0].dimensions();
    AugmentedBatch::from_parts(w, h, items, labels, provenance)
}
