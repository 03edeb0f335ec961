//! Single-channel rasters, binary PGM I/O, the D4 symmetries and pixel
//! difference accounting.

mod d4;
mod pgm;

pub use d4::D4Transform;
pub use pgm::{load_pgm, read_pgm_file, save_pgm, write_pgm_file};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImageError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("unsupported maxval {0} (only 8-bit images are supported)")]
    UnsupportedMaxval(u32),
    #[error("invalid raster: {width}x{height} with {len} pixels")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
}

/// Row-major single-channel raster. `width` and `height` are both at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<T> {
    width: usize,
    height: usize,
    pixels: Vec<T>,
}

/// 8-bit grayscale image, the carrier of covers and stegos.
pub type GrayImage = Image<u8>;

/// Floating point raster, produced only by interpolating augmentations.
pub type FloatImage = Image<f32>;

impl<T: Copy> Image<T> {
    pub fn new(width: usize, height: usize, pixels: Vec<T>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || width.checked_mul(height) != Some(pixels.len()) {
            return Err(ImageError::InvalidDimensions {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image filled with a single value.
    pub fn filled(width: usize, height: usize, value: T) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self, ImageError> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[T] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [T] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<T> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        self.pixels[y * self.width + x] = value;
    }

    pub fn row(&self, y: usize) -> &[T] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Image<U> {
        Image {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().copied().map(f).collect(),
        }
    }

    pub fn apply_d4(&self, transform: D4Transform) -> Self {
        apply_d4(self, transform)
    }
}

impl GrayImage {
    pub fn to_float(&self) -> FloatImage {
        self.map(f32::from)
    }
}

fn ensure_same_dimensions<T, U>(a: &Image<T>, b: &Image<U>) -> Result<(), ImageError> {
    if a.width != b.width || a.height != b.height {
        return Err(ImageError::DimensionMismatch(
            (a.width, a.height),
            (b.width, b.height),
        ));
    }
    Ok(())
}

/// Applies one of the eight pixel-preserving symmetries. Quarter turns swap
/// width and height.
pub fn apply_d4<T: Copy>(img: &Image<T>, transform: D4Transform) -> Image<T> {
    let (w, h) = (img.width, img.height);
    if transform == D4Transform::Identity {
        return img.clone();
    }
    let (out_w, out_h) = transform.output_dimensions(w, h);
    let mut pixels = vec![img.pixels[0]; w * h];
    for y in 0..h {
        let row = img.row(y);
        for (x, &value) in row.iter().enumerate() {
            let (nx, ny) = transform.map_point(x, y, w, h);
            pixels[ny * out_w + nx] = value;
        }
    }
    Image {
        width: out_w,
        height: out_h,
        pixels,
    }
}

/// Number of positions where `a` and `b` differ.
pub fn diff_count<T: Copy + PartialEq>(a: &Image<T>, b: &Image<T>) -> Result<usize, ImageError> {
    ensure_same_dimensions(a, b)?;
    Ok(a.pixels
        .iter()
        .zip(&b.pixels)
        .filter(|(p, q)| p != q)
        .count())
}

/// Binary raster with 1 wherever `a` and `b` differ.
pub fn diff_mask<T: Copy + PartialEq>(a: &Image<T>, b: &Image<T>) -> Result<Image<u8>, ImageError> {
    ensure_same_dimensions(a, b)?;
    Ok(Image {
        width: a.width,
        height: a.height,
        pixels: a
            .pixels
            .iter()
            .zip(&b.pixels)
            .map(|(p, q)| u8::from(p != q))
            .collect(),
    })
}
