use rand::Rng;

use super::AugmentError;
use crate::image::D4Transform;

/// Axis-aligned swap region covering `[x, x+width) × [y, y+height)`.
/// Zero width or height is a legitimate, empty box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BBox {
    pub x: usize,
    pub y: usize,
    pub width: usize,
    pub height: usize,
}

impl BBox {
    pub fn new(x: usize, y: usize, width: usize, height: usize) -> Self {
        Self {
            x,
            y,
            width,
            height,
        }
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.area() == 0
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.x.checked_add(self.width).is_some_and(|r| r <= width)
            && self.y.checked_add(self.height).is_some_and(|b| b <= height)
    }

    pub(crate) fn check_fits(&self, width: usize, height: usize) -> Result<(), AugmentError> {
        if self.fits(width, height) {
            Ok(())
        } else {
            Err(AugmentError::BoxOutOfBounds {
                bbox: *self,
                width,
                height,
            })
        }
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.x + self.width && y >= self.y && y < self.y + self.height
    }

    pub fn area_fraction(&self, width: usize, height: usize) -> f64 {
        self.area() as f64 / (width * height) as f64
    }

    /// The same region after transforming a `width`×`height` raster.
    pub fn transform(&self, t: D4Transform, width: usize, height: usize) -> BBox {
        let mut b = *self;
        let (mut w, mut h) = (width, height);
        for _ in 0..t.quarter_turns() {
            // clockwise: (u, v) -> (h - v, u) on continuous coordinates
            b = BBox::new(h - b.y - b.height, b.x, b.height, b.width);
            (w, h) = (h, w);
        }
        if t.is_flipped() {
            b.x = w - b.x - b.width;
        }
        b
    }
}

pub(crate) fn check_gamma(gamma: f64) -> Result<(), AugmentError> {
    if gamma > 0.0 && gamma <= 1.0 {
        Ok(())
    } else {
        Err(AugmentError::InvalidGamma(gamma))
    }
}

/// Draws `γ′ ~ Unif(0, γ)` and places a box whose area fraction is `γ′`,
/// up to rounding of the sides.
pub fn sample_bbox(
    width: usize,
    height: usize,
    gamma: f64,
    rng: &mut (impl Rng + ?Sized),
) -> Result<BBox, AugmentError> {
    check_gamma(gamma)?;
    let fraction = rng.gen::<f64>() * gamma;
    Ok(bbox_with_area_fraction(width, height, fraction, rng))
}

/// Box with sides `round(W·√f)` × `round(H·√f)` at a uniformly random
/// integer position. `fraction` is clamped to `[0, 1]`.
pub fn bbox_with_area_fraction(
    width: usize,
    height: usize,
    fraction: f64,
    rng: &mut (impl Rng + ?Sized),
) -> BBox {
    let scale = fraction.clamp(0.0, 1.0).sqrt();
    let bw = ((width as f64 * scale).round() as usize).min(width);
    let bh = ((height as f64 * scale).round() as usize).min(height);
    let x = rng.gen_range(0..=width - bw);
    let y = rng.gen_range(0..=height - bh);
    BBox::new(x, y, bw, bh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_fraction_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let b = bbox_with_area_fraction(256, 256, 0.0, &mut rng);
        assert_eq!((b.width, b.height), (0, 0));
        assert!(b.fits(256, 256));
    }

    #[test]
    fn quarter_fraction_is_half_sides() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let b = bbox_with_area_fraction(256, 256, 0.25, &mut rng);
        assert_eq!((b.width, b.height), (128, 128));
        assert_eq!(b.area_fraction(256, 256), 0.25);
    }

    #[test]
    fn rejects_bad_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for g in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(
                sample_bbox(8, 8, g, &mut rng),
                Err(AugmentError::InvalidGamma(_))
            ));
        }
        assert!(sample_bbox(8, 8, 1.0, &mut rng).is_ok());
    }

    #[test]
    fn sampled_boxes_fit_and_respect_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let (w, h) = (rng.gen_range(1..300), rng.gen_range(1..300));
            let gamma = rng.gen_range(0.01..=1.0);
            let b = sample_bbox(w, h, gamma, &mut rng).unwrap();
            assert!(b.fits(w, h));
            // rounding slack of one row and one column
            let bound = gamma * (w * h) as f64 + (w + h) as f64 + 1.0;
            assert!((b.area() as f64) <= bound);
        }
    }

    #[test]
    fn transform_matches_pixelwise_membership() {
        let (w, h) = (7, 4);
        let b = BBox::new(1, 2, 3, 2);
        for t in D4Transform::ALL {
            let tb = b.transform(t, w, h);
            let (ow, oh) = t.output_dimensions(w, h);
            assert!(tb.fits(ow, oh));
            for y in 0..h {
                for x in 0..w {
                    let (nx, ny) = t.map_point(x, y, w, h);
                    assert_eq!(b.contains(x, y), tb.contains(nx, ny), "{t:?}");
                }
            }
        }
    }
}
