//! Binary PGM (P5) reader and canonical writer.

use std::fs;
use std::io;
use std::path::Path;

use super::{GrayImage, ImageError};

struct HeaderCursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn read_number(&mut self, what: &str) -> Result<u32, ImageError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ImageError::MalformedHeader(format!("missing {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ImageError::MalformedHeader(format!("{what} out of range")))
    }
}

/// Parses a binary PGM. Pixel values are returned verbatim; a maxval below
/// 255 does not rescale.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(ImageError::MalformedHeader("expected magic P5".into()));
    }
    let mut cur = HeaderCursor {
        data: bytes,
        pos: 2,
    };
    if !cur
        .data
        .get(cur.pos)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(ImageError::MalformedHeader("expected magic P5".into()));
    }
    let width = cur.read_number("width")? as usize;
    let height = cur.read_number("height")? as usize;
    let maxval = cur.read_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ImageError::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 {
        return Err(ImageError::MalformedHeader(
            "maxval must be positive".into(),
        ));
    }
    if maxval > 255 {
        return Err(ImageError::UnsupportedMaxval(maxval));
    }
    // exactly one whitespace byte separates the header from the raster
    match cur.data.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(ImageError::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| ImageError::MalformedHeader("dimensions overflow".into()))?;
    let raster = &bytes[cur.pos..];
    if raster.len() < expected {
        return Err(ImageError::TruncatedData {
            expected,
            found: raster.len(),
        });
    }
    GrayImage::new(width, height, raster[..expected].to_vec())
}

/// Canonical form: `P5\n<W> <H>\n255\n` followed by the raw raster.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

#[derive(Debug, thiserror::Error)]
pub enum PgmFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Image(#[from] ImageError),
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> Result<GrayImage, PgmFileError> {
    Ok(load_pgm(&fs::read(path)?)?)
}

pub fn write_pgm_file(path: impl AsRef<Path>, img: &GrayImage) -> io::Result<()> {
    fs::write(path, save_pgm(img))
}
