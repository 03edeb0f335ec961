//! Synthetic cover generators for tests, benchmarks and `--synthetic` runs.

use rand::Rng;

use crate::image::{GrayImage, ImageError};

fn clamp_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Smooth random undulation plus fine-grained noise everywhere.
pub fn textured_cover(
    width: usize,
    height: usize,
    rng: &mut impl Rng,
) -> Result<GrayImage, ImageError> {
    let (fx, fy) = (rng.gen_range(0.03..0.2), rng.gen_range(0.03..0.2));
    let (phx, phy) = (
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let amplitude = rng.gen_range(20.0..70.0);
    let noise = rng.gen_range(8.0..30.0);
    let base = rng.gen_range(90.0..166.0);
    GrayImage::from_fn(width, height, |x, y| {
        let wave = (x as f64 * fx + phx).sin() * (y as f64 * fy + phy).cos();
        clamp_u8(base + amplitude * wave + rng.gen_range(-noise..noise))
    })
}

/// Noise on the left half, a constant on the right half.
pub fn half_textured_cover(
    width: usize,
    height: usize,
    rng: &mut impl Rng,
) -> Result<GrayImage, ImageError> {
    let split = width / 2;
    GrayImage::from_fn(width, height, |x, _| {
        if x < split {
            rng.gen_range(40..=215)
        } else {
            128
        }
    })
}

/// Flat background with one noisy square patch of side `patch`; adaptive
/// embedding then clusters all changes there. The patch may hang over the
/// border and is clipped, so every pixel is equally likely to be textured.
pub fn clustered_texture_cover(
    width: usize,
    height: usize,
    patch: usize,
    rng: &mut impl Rng,
) -> Result<GrayImage, ImageError> {
    let pw = patch.clamp(1, width.max(1)) as isize;
    let ph = patch.clamp(1, height.max(1)) as isize;
    let x0 = rng.gen_range(1 - pw..width.max(1) as isize);
    let y0 = rng.gen_range(1 - ph..height.max(1) as isize);
    let background = rng.gen_range(60u8..=190);
    GrayImage::from_fn(width, height, |x, y| {
        let (x, y) = (x as isize, y as isize);
        if (x0..x0 + pw).contains(&x) && (y0..y0 + ph).contains(&y) {
            rng.gen_range(30..=225)
        } else {
            background
        }
    })
}
