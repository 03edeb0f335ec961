//! Simulated ±1 embedding for producing cover/stego pairs.
//!
//! The simulator only decides *where* pixels change, which is all the
//! swap-ratio statistics depend on. No message is encoded.

mod capacity;
pub mod covers;

pub use capacity::{bpp_to_change_rate, ternary_entropy, MAX_PAYLOAD_BPP};

use rand::Rng;
use thiserror::Error;

use crate::image::{diff_count, GrayImage, ImageError};
use crate::rng::StreamRng;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("payload {0} bpp outside (0, log2 3)")]
    OutOfRange(f64),
    #[error("change rate {0} outside (0, 1)")]
    InvalidChangeRate(f64),
    #[error("adaptive window {0} must be odd and at least 3")]
    InvalidWindow(usize),
    #[error("embedder called with the wrong mode")]
    ModeMismatch,
    #[error("cover has zero local variance everywhere")]
    FlatImage,
    #[error("embedding modified no pixels; re-seed and retry")]
    DegenerateOutput,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PairError {
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error("stego is identical to its cover")]
    Identical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EmbedMode {
    Uniform,
    /// Change probability proportional to local variance over an odd window.
    Adaptive {
        window: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedSpec {
    change_rate: f64,
    mode: EmbedMode,
    seed: u64,
}

impl EmbedSpec {
    pub fn new(change_rate: f64, mode: EmbedMode, seed: u64) -> Result<Self, SimError> {
        if !(change_rate > 0.0 && change_rate < 1.0) {
            return Err(SimError::InvalidChangeRate(change_rate));
        }
        if let EmbedMode::Adaptive { window } = mode {
            if window < 3 || window.is_multiple_of(2) {
                return Err(SimError::InvalidWindow(window));
            }
        }
        Ok(Self {
            change_rate,
            mode,
            seed,
        })
    }

    pub fn uniform(change_rate: f64, seed: u64) -> Result<Self, SimError> {
        Self::new(change_rate, EmbedMode::Uniform, seed)
    }

    pub fn adaptive(change_rate: f64, window: usize, seed: u64) -> Result<Self, SimError> {
        Self::new(change_rate, EmbedMode::Adaptive { window }, seed)
    }

    pub fn change_rate(&self) -> f64 {
        self.change_rate
    }

    pub fn mode(&self) -> EmbedMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self) -> StreamRng {
        crate::rng::substream(self.seed, crate::rng::Purpose::Embed, 0)
    }
}

/// A cover and its stego counterpart: same dimensions, at least one
/// differing pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct StegoPair {
    cover: GrayImage,
    stego: GrayImage,
    modified: usize,
}

impl StegoPair {
    pub fn new(cover: GrayImage, stego: GrayImage) -> Result<Self, PairError> {
        let modified = diff_count(&cover, &stego)?;
        if modified == 0 {
            return Err(PairError::Identical);
        }
        Ok(Self {
            cover,
            stego,
            modified,
        })
    }

    pub fn cover(&self) -> &GrayImage {
        &self.cover
    }

    pub fn stego(&self) -> &GrayImage {
        &self.stego
    }

    pub fn dimensions(&self) -> (usize, usize) {
        self.cover.dimensions()
    }

    /// Total number of modified pixels, `diff_count(cover, stego)`.
    pub fn modified(&self) -> usize {
        self.modified
    }

    pub fn into_parts(self) -> (GrayImage, GrayImage) {
        (self.cover, self.stego)
    }

    /// Applies the same symmetry to both images.
    pub fn apply_d4(&self, transform: crate::image::D4Transform) -> StegoPair {
        StegoPair {
            cover: self.cover.apply_d4(transform),
            stego: self.stego.apply_d4(transform),
            modified: self.modified,
        }
    }
}

#[inline]
fn nudge(value: u8, up: bool) -> u8 {
    match value {
        0 => 1,
        255 => 254,
        v if up => v + 1,
        v => v - 1,
    }
}

fn embed_with_probabilities(
    cover: &GrayImage,
    rng: &mut impl Rng,
    mut probability: impl FnMut(usize) -> f64,
) -> Result<StegoPair, SimError> {
    let mut stego = cover.clone();
    let mut changed = 0usize;
    for (i, px) in stego.pixels_mut().iter_mut().enumerate() {
        let p = probability(i);
        if rng.gen::<f64>() < p {
            *px = nudge(*px, rng.gen());
            changed += 1;
        }
    }
    if changed == 0 {
        return Err(SimError::DegenerateOutput);
    }
    Ok(StegoPair {
        cover: cover.clone(),
        stego,
        modified: changed,
    })
}

/// Modifies every pixel independently with probability `change_rate`.
pub fn embed_uniform(
    cover: &GrayImage,
    spec: &EmbedSpec,
    rng: &mut impl Rng,
) -> Result<StegoPair, SimError> {
    if spec.mode != EmbedMode::Uniform {
        return Err(SimError::ModeMismatch);
    }
    let rate = spec.change_rate;
    embed_with_probabilities(cover, rng, |_| rate)
}

/// Modifies pixels with probability proportional to local variance, scaled so
/// that the expected number of changes is `change_rate·W·H` (as far as
/// clipping at 1 allows).
pub fn embed_adaptive(
    cover: &GrayImage,
    spec: &EmbedSpec,
    rng: &mut impl Rng,
) -> Result<StegoPair, SimError> {
    let EmbedMode::Adaptive { window } = spec.mode else {
        return Err(SimError::ModeMismatch);
    };
    let probabilities = change_probabilities(cover, window, spec.change_rate)?;
    embed_with_probabilities(cover, rng, |i| probabilities[i])
}

/// Dispatches on the spec's mode, drawing from the spec's own seed.
pub fn embed(cover: &GrayImage, spec: &EmbedSpec) -> Result<StegoPair, SimError> {
    let mut rng = spec.rng();
    match spec.mode {
        EmbedMode::Uniform => embed_uniform(cover, spec, &mut rng),
        EmbedMode::Adaptive { .. } => embed_adaptive(cover, spec, &mut rng),
    }
}

fn mirror(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m >= n as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

/// Population variance of every `window`×`window` neighbourhood, with
/// mirrored borders (the edge pixel is not repeated).
pub fn local_variance(cover: &GrayImage, window: usize) -> Vec<f64> {
    let (w, h) = cover.dimensions();
    let r = (window / 2) as isize;
    let (pw, ph) = (w + window - 1, h + window - 1);
    // summed-area tables over the mirrored image, one extra leading row/col
    let mut sum = vec![0u64; (pw + 1) * (ph + 1)];
    let mut sq = vec![0u64; (pw + 1) * (ph + 1)];
    for py in 0..ph {
        let sy = mirror(py as isize - r, h);
        let mut row_sum = 0u64;
        let mut row_sq = 0u64;
        for px in 0..pw {
            let v = u64::from(cover.get(mirror(px as isize - r, w), sy));
            row_sum += v;
            row_sq += v * v;
            let idx = (py + 1) * (pw + 1) + px + 1;
            sum[idx] = sum[idx - (pw + 1)] + row_sum;
            sq[idx] = sq[idx - (pw + 1)] + row_sq;
        }
    }
    let n = (window * window) as i128;
    let rect = |t: &[u64], x: usize, y: usize| -> i128 {
        let (x1, y1) = (x + window, y + window);
        t[y1 * (pw + 1) + x1] as i128 - t[y * (pw + 1) + x1] as i128 - t[y1 * (pw + 1) + x] as i128
            + t[y * (pw + 1) + x] as i128
    };
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let s = rect(&sum, x, y);
            let q = rect(&sq, x, y);
            // n²·var, exact in integers
            let scaled = n * q - s * s;
            out.push(scaled as f64 / (n * n) as f64);
        }
    }
    out
}

/// Per-pixel change probabilities for the adaptive simulator.
pub fn change_probabilities(
    cover: &GrayImage,
    window: usize,
    change_rate: f64,
) -> Result<Vec<f64>, SimError> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(SimError::InvalidWindow(window));
    }
    let variance = local_variance(cover, window);
    if variance.iter().all(|&v| v == 0.0) {
        return Err(SimError::FlatImage);
    }
    let target = change_rate * cover.len() as f64;
    let mut probs = vec![0.0; variance.len()];
    let mut saturated = vec![false; variance.len()];
    // water-filling: rescale the unsaturated mass until nothing new clips
    loop {
        let fixed = saturated.iter().filter(|&&s| s).count() as f64;
        let free_mass: f64 = variance
            .iter()
            .zip(&saturated)
            .filter(|(_, &s)| !s)
            .map(|(v, _)| v)
            .sum();
        if free_mass <= 0.0 {
            break;
        }
        let scale = (target - fixed).max(0.0) / free_mass;
        let mut clipped_any = false;
        for ((p, &v), s) in probs.iter_mut().zip(&variance).zip(saturated.iter_mut()) {
            if *s {
                *p = 1.0;
                continue;
            }
            let raw = v * scale;
            if raw >= 1.0 {
                *p = 1.0;
                *s = true;
                clipped_any = true;
            } else {
                *p = raw;
            }
        }
        if !clipped_any {
            break;
        }
    }
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::diff_mask;
    use crate::rng::{substream, Purpose};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spec_validation() {
        assert!(EmbedSpec::uniform(0.0, 1).is_err());
        assert!(EmbedSpec::uniform(1.0, 1).is_err());
        assert!(EmbedSpec::uniform(f64::NAN, 1).is_err());
        assert_eq!(
            EmbedSpec::adaptive(0.1, 4, 1),
            Err(SimError::InvalidWindow(4))
        );
        assert_eq!(
            EmbedSpec::adaptive(0.1, 1, 1),
            Err(SimError::InvalidWindow(1))
        );
        assert!(EmbedSpec::adaptive(0.1, 5, 1).is_ok());
    }

    #[test]
    fn pair_validation() {
        let a = GrayImage::filled(2, 2, 3).unwrap();
        assert_eq!(
            StegoPair::new(a.clone(), a.clone()),
            Err(PairError::Identical)
        );
        let b = GrayImage::filled(4, 1, 3).unwrap();
        assert!(matches!(
            StegoPair::new(a.clone(), b),
            Err(PairError::Image(ImageError::DimensionMismatch(..)))
        ));
        let mut c = a.clone();
        c.set(0, 0, 4);
        assert_eq!(StegoPair::new(a, c).unwrap().modified(), 1);
    }

    #[test]
    fn uniform_changes_are_unit_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cover = covers::textured_cover(32, 32, &mut rng).unwrap();
        let spec = EmbedSpec::uniform(0.3, 9).unwrap();
        let pair = embed(&cover, &spec).unwrap();
        for (c, s) in pair.cover().pixels().iter().zip(pair.stego().pixels()) {
            assert!((*c as i16 - *s as i16).abs() <= 1);
        }
        assert_eq!(
            pair.modified(),
            diff_count(pair.cover(), pair.stego()).unwrap()
        );
    }

    #[test]
    fn boundary_values_are_pushed_inwards() {
        let zeros = GrayImage::filled(16, 16, 0).unwrap();
        let spec = EmbedSpec::uniform(0.5, 3).unwrap();
        let pair = embed(&zeros, &spec).unwrap();
        assert!(pair.stego().pixels().iter().all(|&v| v <= 1));
        let full = GrayImage::filled(16, 16, 255).unwrap();
        let pair = embed(&full, &spec).unwrap();
        assert!(pair.stego().pixels().iter().all(|&v| v >= 254));
    }

    #[test]
    fn same_seed_same_stego() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cover = covers::textured_cover(24, 24, &mut rng).unwrap();
        for spec in [
            EmbedSpec::uniform(0.1, 77).unwrap(),
            EmbedSpec::adaptive(0.1, 3, 77).unwrap(),
        ] {
            assert_eq!(embed(&cover, &spec).unwrap(), embed(&cover, &spec).unwrap());
        }
    }

    #[test]
    fn mode_mismatch() {
        let cover = GrayImage::filled(4, 4, 100).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let adaptive = EmbedSpec::adaptive(0.1, 3, 0).unwrap();
        assert_eq!(
            embed_uniform(&cover, &adaptive, &mut rng),
            Err(SimError::ModeMismatch)
        );
        let uniform = EmbedSpec::uniform(0.1, 0).unwrap();
        assert_eq!(
            embed_adaptive(&cover, &uniform, &mut rng),
            Err(SimError::ModeMismatch)
        );
    }

    #[test]
    fn uniform_count_matches_binomial() {
        // 4x4, rho = 0.5: mean 8, sd of the mean over 1000 trials = 2/sqrt(1000)
        let cover = GrayImage::filled(4, 4, 128).unwrap();
        let spec = EmbedSpec::uniform(0.5, 0).unwrap();
        let mut total = 0usize;
        let mut trials = 0usize;
        for t in 0..1000 {
            let mut rng = substream(5, Purpose::Embed, t);
            match embed_uniform(&cover, &spec, &mut rng) {
                Ok(pair) => total += pair.modified(),
                Err(SimError::DegenerateOutput) => {}
                Err(e) => panic!("{e}"),
            }
            trials += 1;
        }
        let mean = total as f64 / trials as f64;
        let sigma = (16.0f64 * 0.25).sqrt() / (trials as f64).sqrt();
        assert!((mean - 8.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn uniform_positions_pass_chi_square() {
        // pool ~10^4 modifications on a 64x64 cover into a 4x4 grid of cells
        let cover = GrayImage::filled(64, 64, 128).unwrap();
        let spec = EmbedSpec::uniform(0.1, 0).unwrap();
        let mut cells = [0f64; 16];
        let mut pooled = 0;
        let mut t = 0;
        while pooled < 10_000 {
            let mut rng = substream(6, Purpose::Embed, t);
            t += 1;
            let pair = embed_uniform(&cover, &spec, &mut rng).unwrap();
            let mask = diff_mask(pair.cover(), pair.stego()).unwrap();
            for y in 0..64 {
                for x in 0..64 {
                    if mask.get(x, y) == 1 {
                        cells[(y / 16) * 4 + x / 16] += 1.0;
                        pooled += 1;
                    }
                }
            }
        }
        let expected = pooled as f64 / 16.0;
        let chi2: f64 = cells
            .iter()
            .map(|c| (c - expected).powi(2) / expected)
            .sum();
        // chi-square critical value, 15 degrees of freedom, alpha = 0.01
        assert!(chi2 < 30.578, "chi2 {chi2}");
    }

    #[test]
    fn constant_cover_is_flat() {
        let cover = GrayImage::filled(10, 10, 90).unwrap();
        let spec = EmbedSpec::adaptive(0.1, 3, 0).unwrap();
        assert_eq!(embed(&cover, &spec), Err(SimError::FlatImage));
    }

    #[test]
    fn local_variance_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cover = GrayImage::from_fn(7, 5, |_, _| rng.gen()).unwrap();
        for window in [3, 5, 9] {
            let fast = local_variance(&cover, window);
            let r = (window / 2) as isize;
            for y in 0..5 {
                for x in 0..7 {
                    let mut vals = Vec::new();
                    for dy in -r..=r {
                        for dx in -r..=r {
                            vals.push(
                                cover.get(mirror(x as isize + dx, 7), mirror(y as isize + dy, 5))
                                    as f64,
                            );
                        }
                    }
                    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                    let var =
                        vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64;
                    assert!((fast[y * 7 + x] - var).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn mirror_reflects_without_repeating_edge() {
        assert_eq!(mirror(-1, 5), 1);
        assert_eq!(mirror(-2, 5), 2);
        assert_eq!(mirror(5, 5), 3);
        assert_eq!(mirror(6, 5), 2);
        assert_eq!(mirror(3, 1), 0);
        assert_eq!(mirror(-3, 2), 1);
    }

    #[test]
    fn adaptive_prefers_texture() {
        let mut in_textured = 0usize;
        let mut total = 0usize;
        for seed in 0..100 {
            let mut rng = substream(seed, Purpose::Cover, 0);
            let cover = covers::half_textured_cover(64, 64, &mut rng).unwrap();
            let spec = EmbedSpec::adaptive(0.05, 3, seed).unwrap();
            let pair = embed(&cover, &spec).unwrap();
            let mask = diff_mask(pair.cover(), pair.stego()).unwrap();
            for y in 0..64 {
                for x in 0..64 {
                    if mask.get(x, y) == 1 {
                        total += 1;
                        in_textured += usize::from(x < 32);
                    }
                }
            }
        }
        let share = in_textured as f64 / total as f64;
        assert!(share >= 0.9, "textured share {share}");
    }

    #[test]
    fn adaptive_expected_changes_match_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cover = covers::textured_cover(64, 64, &mut rng).unwrap();
        let rate = 0.05;
        let probs = change_probabilities(&cover, 3, rate).unwrap();
        assert!(probs.iter().all(|&p| (0.0..=1.0).contains(&p)));
        let expected: f64 = probs.iter().sum();
        assert!((expected - rate * 4096.0).abs() < 1e-6 * 4096.0);

        let spec = EmbedSpec::adaptive(rate, 3, 0).unwrap();
        let mut total = 0usize;
        for seed in 0..1000 {
            let mut rng = substream(seed, Purpose::Embed, 0);
            total += embed_adaptive(&cover, &spec, &mut rng).unwrap().modified();
        }
        let mean = total as f64 / 1000.0;
        let target = rate * 4096.0;
        assert!((mean - target).abs() < 0.05 * target, "mean {mean}");
    }

    #[test]
    fn water_filling_saturates_then_redistributes() {
        // a few very busy pixels would exceed probability 1 without clipping
        let mut cover = GrayImage::filled(20, 20, 100).unwrap();
        cover.set(3, 3, 255);
        cover.set(15, 12, 0);
        let probs = change_probabilities(&cover, 3, 0.2).unwrap();
        let nonzero = probs.iter().filter(|&&p| p > 0.0).count();
        let sum: f64 = probs.iter().sum();
        assert!(probs.iter().all(|&p| p <= 1.0));
        // only 18 pixels see any variance; all of them saturate
        assert_eq!(nonzero, 18);
        assert!((sum - 18.0).abs() < 1e-9);
    }
}
