//! Swap-ratio distributions, spatial heatmaps of surviving modifications, and
//! detection metrics.

mod heatmap;
mod histogram;
mod metrics;
mod source;

pub use heatmap::Heatmap;
pub use histogram::{ks_distance, tv_distance, Histogram};
pub use metrics::{auc, p_e, roc_curve, MetricsSummary, ScoredSample, Truth};
pub use source::{CoverKind, IndexedPair, PairPool, PairSource, SyntheticSpec};

use rand::RngCore;
use thiserror::Error;

use crate::augment::{sample_bbox, AugmentError};
use crate::image::ImageError;
use crate::stego_sim::SimError;

/// Default bin count for swap-ratio histograms.
pub const DEFAULT_BINS: usize = 50;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pair source is empty")]
    EmptySource,
    #[error("no sample fell in the lambda band after {draws} draws")]
    NoSamplesInBand { draws: usize },
    #[error("both cover and stego samples are required")]
    SingleClass,
    #[error("score {0} is not finite")]
    NonFiniteScore(f64),
    #[error("histograms have different bin edges")]
    BinMismatch,
    #[error("source yields {found:?} images, expected {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Histogram of the swap ratio `λ` over `n_samples` random (pair, box)
/// draws, in `bins` equal-width bins over `[0, 1]`.
pub fn lambda_distribution<S: PairSource + ?Sized>(
    source: &mut S,
    gamma: f64,
    n_samples: usize,
    bins: usize,
    rng: &mut dyn RngCore,
) -> Result<Histogram, StatsError> {
    if n_samples == 0 {
        return Err(StatsError::InvalidArgument(
            "need at least one sample".into(),
        ));
    }
    if bins < 2 {
        return Err(StatsError::InvalidArgument("need at least two bins".into()));
    }
    let mut hist = Histogram::unit_interval(bins)?;
    for _ in 0..n_samples {
        let pair = source.next_pair(rng)?;
        let (w, h) = pair.dimensions();
        let bbox = sample_bbox(w, h, gamma, rng)?;
        let (inside, total) = pair.swap_ratio(bbox);
        hist.record(inside as f64 / total as f64)?;
    }
    Ok(hist)
}

/// Accumulates where the modifications surviving in `S_C` lie, over the
/// draws whose `λ` falls in `[lo, hi]`.
pub fn modified_pixel_heatmap<S: PairSource + ?Sized>(
    source: &mut S,
    gamma: f64,
    band: (f64, f64),
    n_samples: usize,
    rng: &mut dyn RngCore,
) -> Result<Heatmap, StatsError> {
    let (lo, hi) = band;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(StatsError::InvalidArgument(format!(
            "band [{lo}, {hi}] must satisfy 0 <= lo < hi <= 1"
        )));
    }
    let mut heatmap: Option<Heatmap> = None;
    for _ in 0..n_samples {
        let pair = source.next_pair(rng)?;
        let (w, h) = pair.dimensions();
        let map = heatmap.get_or_insert_with(|| Heatmap::new(w, h));
        let bbox = sample_bbox(w, h, gamma, rng)?;
        let (inside, total) = pair.swap_ratio(bbox);
        let lambda = inside as f64 / total as f64;
        if lambda >= lo && lambda <= hi {
            map.accumulate_surviving(pair, bbox)?;
        }
    }
    match heatmap {
        Some(map) if map.accepted() > 0 => Ok(map),
        _ => Err(StatsError::NoSamplesInBand { draws: n_samples }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{bbox_with_area_fraction, bitmix_pair};
    use crate::image::{diff_mask, GrayImage};
    use crate::stego_sim::StegoPair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single_change_pool(size: usize, at: (usize, usize)) -> PairPool {
        let cover = GrayImage::filled(size, size, 100).unwrap();
        let mut stego = cover.clone();
        stego.set(at.0, at.1, 101);
        PairPool::new(vec![StegoPair::new(cover, stego).unwrap()]).unwrap()
    }

    #[test]
    fn totals_match_requests() {
        let mut pool = SyntheticSpec::uniform(32, 4, 0.1, 1).pool().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = lambda_distribution(&mut pool, 0.5, 777, 20, &mut rng).unwrap();
        assert_eq!(h.total(), 777);
        assert_eq!(h.bins(), 20);
        let one = lambda_distribution(&mut pool, 0.5, 1, 20, &mut rng).unwrap();
        assert_eq!(one.total(), 1);
        assert!(lambda_distribution(&mut pool, 0.5, 0, 20, &mut rng).is_err());
        assert!(lambda_distribution(&mut pool, 0.5, 5, 1, &mut rng).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let mut pool = SyntheticSpec::uniform(32, 4, 0.1, 1).pool().unwrap();
        let a = lambda_distribution(&mut pool, 0.5, 500, 10, &mut ChaCha8Rng::seed_from_u64(3))
            .unwrap();
        let b = lambda_distribution(&mut pool, 0.5, 500, 10, &mut ChaCha8Rng::seed_from_u64(3))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_cluster_gives_zero_one_spikes() {
        // one modified pixel in the corner: λ is 0 or 1, and it is 1 exactly
        // when the box covers (0, 0)
        let mut pool = single_change_pool(20, (0, 0));
        let seed = 4;
        let h = lambda_distribution(
            &mut pool,
            0.05,
            2000,
            10,
            &mut ChaCha8Rng::seed_from_u64(seed),
        )
        .unwrap();
        let mut replay = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = 0;
        for _ in 0..2000 {
            let b = sample_bbox(20, 20, 0.05, &mut replay).unwrap();
            hits += usize::from(b.contains(0, 0));
        }
        assert_eq!(h.counts()[9] as usize, hits);
        assert_eq!(h.counts()[0] as usize, 2000 - hits);
        assert!(h.counts()[1..9].iter().all(|&c| c == 0));
        assert!(hits > 0);
    }

    #[test]
    fn uniform_embedding_tail_is_thin() {
        let mut pool = SyntheticSpec::uniform(64, 8, 0.1, 5).pool().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let h = lambda_distribution(&mut pool, 0.25, 10_000, 20, &mut rng).unwrap();
        let tail = 1.0 - h.mass_below(0.3).unwrap();
        assert!(tail < 1e-3, "tail {tail}");
    }

    #[test]
    fn fixed_pair_fixed_box_heatmap() {
        let mut pool = SyntheticSpec::uniform(24, 1, 0.2, 7).pool().unwrap();
        let pair = pool.pairs()[0].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bbox = bbox_with_area_fraction(24, 24, 0.3, &mut rng);
        let mut map = Heatmap::new(24, 24);
        map.accumulate_surviving(&pair, bbox).unwrap();
        let sc = bitmix_pair(pair.pair(), bbox).unwrap();
        let mask = diff_mask(pair.pair().cover(), sc.image_sc().as_gray().unwrap()).unwrap();
        let expected: Vec<u64> = mask.pixels().iter().map(|&m| m as u64).collect();
        assert_eq!(map.counts(), expected.as_slice());
        // and through the sampling entry point, with a band accepting anything
        let m = modified_pixel_heatmap(&mut pool, 0.5, (0.0, 1.0), 3, &mut rng).unwrap();
        assert_eq!(m.accepted(), 3);
    }

    #[test]
    fn empty_band_reports() {
        let mut pool = single_change_pool(16, (8, 8));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // λ is always 0 or 1 here
        assert_eq!(
            modified_pixel_heatmap(&mut pool, 0.5, (0.2, 0.8), 50, &mut rng),
            Err(StatsError::NoSamplesInBand { draws: 50 })
        );
        assert!(modified_pixel_heatmap(&mut pool, 0.5, (0.8, 0.2), 50, &mut rng).is_err());
    }

    #[test]
    fn heatmap_merge_matches_single_run_counts() {
        let mut pool = SyntheticSpec::uniform(16, 3, 0.2, 8).pool().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut a = modified_pixel_heatmap(&mut pool, 1.0, (0.0, 1.0), 10, &mut rng).unwrap();
        let b = modified_pixel_heatmap(&mut pool, 1.0, (0.0, 1.0), 15, &mut rng).unwrap();
        a.merge(&b).unwrap();
        assert_eq!(a.accepted(), 25);
    }
}
