use super::source::IndexedPair;
use super::StatsError;
use crate::augment::BBox;
use crate::image::GrayImage;

/// Per-pixel accumulation of modification indicators over accepted samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    width: usize,
    height: usize,
    counts: Vec<u64>,
    accepted: u64,
}

impl Heatmap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            counts: vec![0; width * height],
            accepted: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn check_dimensions(&self, dims: (usize, usize)) -> Result<(), StatsError> {
        if dims != (self.width, self.height) {
            return Err(StatsError::DimensionMismatch {
                expected: (self.width, self.height),
                found: dims,
            });
        }
        Ok(())
    }

    /// Adds a binary mask as one accepted sample.
    pub fn accumulate_mask(&mut self, mask: &GrayImage) -> Result<(), StatsError> {
        self.check_dimensions(mask.dimensions())?;
        for (c, &m) in self.counts.iter_mut().zip(mask.pixels()) {
            *c += u64::from(m != 0);
        }
        self.accepted += 1;
        Ok(())
    }

    /// Adds the modifications that stay in the stego-side output when `bbox`
    /// is swapped, i.e. every change outside the box.
    pub fn accumulate_surviving(
        &mut self,
        pair: &IndexedPair,
        bbox: BBox,
    ) -> Result<(), StatsError> {
        self.check_dimensions(pair.dimensions())?;
        for &(x, y) in pair.changed() {
            let (x, y) = (x as usize, y as usize);
            if !bbox.contains(x, y) {
                self.counts[y * self.width + x] += 1;
            }
        }
        self.accepted += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &Heatmap) -> Result<(), StatsError> {
        self.check_dimensions((other.width, other.height))?;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.accepted += other.accepted;
        Ok(())
    }

    /// Mean modification indicator per pixel over accepted samples.
    pub fn density(&self) -> Vec<f64> {
        let n = self.accepted.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Mean density in the border frame and in the interior. The frame is
    /// every pixel within `margin_fraction·W` (resp. `·H`) of an edge.
    pub fn frame_means(&self, margin_fraction: f64) -> (f64, f64) {
        let mx = (self.width as f64 * margin_fraction).round() as usize;
        let my = (self.height as f64 * margin_fraction).round() as usize;
        let density = self.density();
        let (mut outer, mut n_outer, mut inner, mut n_inner) = (0.0, 0usize, 0.0, 0usize);
        for y in 0..self.height {
            for x in 0..self.width {
                let d = density[y * self.width + x];
                let in_frame = x < mx
                    || y < my
                    || x >= self.width - mx.min(self.width)
                    || y >= self.height - my.min(self.height);
                if in_frame {
                    outer += d;
                    n_outer += 1;
                } else {
                    inner += d;
                    n_inner += 1;
                }
            }
        }
        (
            if n_outer > 0 {
                outer / n_outer as f64
            } else {
                0.0
            },
            if n_inner > 0 {
                inner / n_inner as f64
            } else {
                0.0
            },
        )
    }

    /// Density rescaled so the maximum maps to 255.
    pub fn to_pgm_image(&self) -> GrayImage {
        let max = self.counts.iter().copied().max().unwrap_or(0);
        let pixels = self
            .counts
            .iter()
            .map(|&c| {
                if max == 0 {
                    0
                } else {
                    ((c as f64 * 255.0 / max as f64).round()) as u8
                }
            })
            .collect();
        GrayImage::new(self.width, self.height, pixels).expect("heatmap dimensions are non-zero")
    }
}
