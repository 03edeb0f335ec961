//! Pair sources for distribution studies.

use rand::{Rng, RngCore};

use super::StatsError;
use crate::augment::BBox;
use crate::rng::{substream, Purpose};
use crate::stego_sim::{covers, embed, EmbedMode, EmbedSpec, SimError, StegoPair};

/// A pair with a summed-area table of its modification mask, so in-box
/// change counts cost O(1).
#[derive(Debug, Clone)]
pub struct IndexedPair {
    pair: StegoPair,
    table: Vec<u32>,
    changed: Vec<(u32, u32)>,
}

impl IndexedPair {
    pub fn new(pair: StegoPair) -> Self {
        let (w, h) = pair.dimensions();
        let stride = w + 1;
        let mut table = vec![0u32; stride * (h + 1)];
        let mut changed = Vec::with_capacity(pair.modified());
        for y in 0..h {
            let (c, s) = (pair.cover().row(y), pair.stego().row(y));
            let mut run = 0u32;
            for x in 0..w {
                if c[x] != s[x] {
                    run += 1;
                    changed.push((x as u32, y as u32));
                }
                table[(y + 1) * stride + x + 1] = table[y * stride + x + 1] + run;
            }
        }
        Self {
            pair,
            table,
            changed,
        }
    }

    pub fn pair(&self) -> &StegoPair {
        &self.pair
    }

    pub fn dimensions(&self) -> (usize, usize) {
        self.pair.dimensions()
    }

    /// Coordinates of every modified pixel, in raster order.
    pub fn changed(&self) -> &[(u32, u32)] {
        &self.changed
    }

    /// Modified pixels inside `bbox`, which must fit the image.
    pub fn count_in(&self, bbox: BBox) -> usize {
        let stride = self.pair.dimensions().0 + 1;
        let (x0, y0) = (bbox.x, bbox.y);
        let (x1, y1) = (bbox.x + bbox.width, bbox.y + bbox.height);
        (self.table[y1 * stride + x1] + self.table[y0 * stride + x0]
            - self.table[y0 * stride + x1]
            - self.table[y1 * stride + x0]) as usize
    }

    /// `(inside, total)` for the swap ratio of `bbox`.
    pub fn swap_ratio(&self, bbox: BBox) -> (usize, usize) {
        (self.count_in(bbox), self.pair.modified())
    }
}

/// Yields pairs for sampling. Implementations draw any randomness they need
/// from the caller's generator.
pub trait PairSource {
    fn next_pair(&mut self, rng: &mut dyn RngCore) -> Result<&IndexedPair, StatsError>;
}

/// Fixed set of pairs, sampled uniformly with replacement.
#[derive(Debug, Clone)]
pub struct PairPool {
    pairs: Vec<IndexedPair>,
}

impl PairPool {
    pub fn new(pairs: Vec<StegoPair>) -> Result<Self, StatsError> {
        if pairs.is_empty() {
            return Err(StatsError::EmptySource);
        }
        Ok(Self {
            pairs: pairs.into_iter().map(IndexedPair::new).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[IndexedPair] {
        &self.pairs
    }
}

impl PairSource for PairPool {
    fn next_pair(&mut self, rng: &mut dyn RngCore) -> Result<&IndexedPair, StatsError> {
        let i = if self.pairs.len() == 1 {
            0
        } else {
            rng.gen_range(0..self.pairs.len())
        };
        Ok(&self.pairs[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoverKind {
    /// Noise over a smooth undulation, texture everywhere.
    Textured,
    /// Flat background with one textured square of the given side.
    Clustered { patch: usize },
}

/// Recipe for a pool of simulated pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub width: usize,
    pub height: usize,
    pub count: usize,
    pub change_rate: f64,
    pub mode: EmbedMode,
    pub cover: CoverKind,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn uniform(size: usize, count: usize, change_rate: f64, seed: u64) -> Self {
        Self {
            width: size,
            height: size,
            count,
            change_rate,
            mode: EmbedMode::Uniform,
            cover: CoverKind::Textured,
            seed,
        }
    }

    /// Generates pair `index`; a degenerate embedding is retried on the next
    /// attempt substream.
    pub fn generate(&self, index: u64) -> Result<StegoPair, StatsError> {
        let mut cover_rng = substream(self.seed, Purpose::Cover, index);
        let cover = match self.cover {
            CoverKind::Textured => covers::textured_cover(self.width, self.height, &mut cover_rng),
            CoverKind::Clustered { patch } => {
                covers::clustered_texture_cover(self.width, self.height, patch, &mut cover_rng)
            }
        }?;
        for attempt in 0..64u64 {
            let seed = substream(self.seed, Purpose::Embed, index)
                .next_u64()
                .wrapping_add(attempt);
            let spec = EmbedSpec::new(self.change_rate, self.mode, seed)?;
            match embed(&cover, &spec) {
                Err(SimError::DegenerateOutput) => continue,
                other => return Ok(other?),
            }
        }
        Err(SimError::DegenerateOutput.into())
    }

    pub fn pool(&self) -> Result<PairPool, StatsError> {
        let pairs = (0..self.count as u64)
            .map(|i| self.generate(i))
            .collect::<Result<Vec<_>, _>>()?;
        PairPool::new(pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{bitmix_pair, sample_bbox};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table_count_matches_bitmix() {
        let spec = SyntheticSpec::uniform(40, 4, 0.1, 3);
        let pool = spec.pool().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for p in pool.pairs() {
            assert_eq!(p.changed().len(), p.pair().modified());
            for _ in 0..200 {
                let b = sample_bbox(40, 40, 1.0, &mut rng).unwrap();
                let direct = bitmix_pair(p.pair(), b).unwrap().lambda_ratio();
                assert_eq!(p.swap_ratio(b), direct);
            }
        }
    }

    #[test]
    fn empty_pool_rejected() {
        assert!(matches!(
            PairPool::new(vec![]),
            Err(StatsError::EmptySource)
        ));
    }

    #[test]
    fn synthetic_pools_are_deterministic() {
        let spec = SyntheticSpec::uniform(16, 3, 0.05, 9);
        let a = spec.pool().unwrap();
        let b = spec.pool().unwrap();
        for (x, y) in a.pairs().iter().zip(b.pairs()) {
            assert_eq!(x.pair(), y.pair());
        }
    }

    #[test]
    fn clustered_adaptive_pairs_change_inside_patch() {
        let spec = SyntheticSpec {
            mode: EmbedMode::Adaptive { window: 3 },
            cover: CoverKind::Clustered { patch: 12 },
            ..SyntheticSpec::uniform(64, 2, 0.01, 4)
        };
        for p in spec.pool().unwrap().pairs() {
            let xs: Vec<u32> = p.changed().iter().map(|c| c.0).collect();
            let spread = xs.iter().max().unwrap() - xs.iter().min().unwrap();
            assert!(spread < 14, "spread {spread}");
        }
    }
}
