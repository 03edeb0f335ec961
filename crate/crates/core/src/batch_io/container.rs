//! The BMIX batch container.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "BMIX"
//! 4       2     version (u16 LE) = 1
//! 6       2     flags (u16 LE), bit 0: pixels are f32 LE, else u8
//! 8       4     image_count (u32 LE) = 2N
//! 12      4     width (u32 LE)
//! 16      4     height (u32 LE)
//! 20      ...   image_count rasters, row-major
//!         4·2N  labels, f32 LE
//!         22·N  provenance per pair: d4 code u8, method code u8,
//!               bbox x, y, w, h as u32 LE, lambda f32 LE
//! ```
//!
//! Items are ordered cover side `0..N` then stego side `0..N`. No padding,
//! no compression.

use std::io::{self, Read, Write};

use super::BatchIoError;
use crate::augment::{AugmentedBatch, BBox, Method, PixelKind, Provenance, Raster};
use crate::image::{D4Transform, Image};

pub const MAGIC: [u8; 4] = *b"BMIX";
pub const VERSION: u16 = 1;
pub const FLAG_FLOAT_PIXELS: u16 = 1;
pub const HEADER_LEN: usize = 20;
pub const PROVENANCE_LEN: usize = 22;

/// Byte length of a container holding `pairs` pairs of `width`×`height`.
pub fn container_len(pairs: usize, width: usize, height: usize, kind: PixelKind) -> usize {
    let px = match kind {
        PixelKind::Integer8 => 1,
        PixelKind::Float32 => 4,
    };
    HEADER_LEN + 2 * pairs * (width * height * px + 4) + pairs * PROVENANCE_LEN
}

fn to_u32(v: usize, what: &str) -> Result<u32, BatchIoError> {
    u32::try_from(v).map_err(|_| BatchIoError::Malformed(format!("{what} {v} exceeds u32")))
}

/// Serializes `batch`, returning the number of bytes written.
pub fn write_batch<W: Write>(batch: &AugmentedBatch, sink: &mut W) -> Result<usize, BatchIoError> {
    let kind = batch.pixel_kind().ok_or(BatchIoError::MixedPixelKinds)?;
    let flags = match kind {
        PixelKind::Integer8 => 0,
        PixelKind::Float32 => FLAG_FLOAT_PIXELS,
    };
    let count = batch.items().len();
    let mut buf = Vec::with_capacity(container_len(
        batch.pair_count(),
        batch.width(),
        batch.height(),
        kind,
    ));
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&flags.to_le_bytes());
    buf.extend_from_slice(&to_u32(count, "image count")?.to_le_bytes());
    buf.extend_from_slice(&to_u32(batch.width(), "width")?.to_le_bytes());
    buf.extend_from_slice(&to_u32(batch.height(), "height")?.to_le_bytes());
    for item in batch.items() {
        match item {
            Raster::Gray(img) => buf.extend_from_slice(img.pixels()),
            Raster::Float(img) => {
                for v in img.pixels() {
                    buf.extend_from_slice(&v.to_le_bytes());
                }
            }
        }
    }
    for label in batch.labels() {
        buf.extend_from_slice(&label.to_le_bytes());
    }
    for p in batch.provenance() {
        buf.push(p.transform.code());
        buf.push(p.method.code());
        for v in [p.bbox.x, p.bbox.y, p.bbox.width, p.bbox.height] {
            buf.extend_from_slice(&to_u32(v, "bbox field")?.to_le_bytes());
        }
        buf.extend_from_slice(&p.lambda.to_le_bytes());
    }
    sink.write_all(&buf)?;
    Ok(buf.len())
}

/// Serializes into a fresh buffer.
pub fn encode_batch(batch: &AugmentedBatch) -> Result<Vec<u8>, BatchIoError> {
    let mut out = Vec::new();
    write_batch(batch, &mut out)?;
    Ok(out)
}

fn read_exact<R: Read>(source: &mut R, buf: &mut [u8]) -> Result<(), BatchIoError> {
    source.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => BatchIoError::Truncated,
        _ => BatchIoError::Io(e),
    })
}

fn read_vec<R: Read>(source: &mut R, len: usize) -> Result<Vec<u8>, BatchIoError> {
    // read incrementally so a lying header cannot force a huge allocation
    let mut out = Vec::new();
    let got = source.by_ref().take(len as u64).read_to_end(&mut out)?;
    if got < len {
        return Err(BatchIoError::Truncated);
    }
    Ok(out)
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn f32_at(b: &[u8], at: usize) -> f32 {
    f32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Reads exactly one container from `source`.
pub fn read_batch<R: Read>(source: &mut R) -> Result<AugmentedBatch, BatchIoError> {
    let mut header = [0u8; HEADER_LEN];
    let mut magic = [0u8; 4];
    read_exact(source, &mut magic)?;
    if magic != MAGIC {
        return Err(BatchIoError::BadMagic(magic));
    }
    header[..4].copy_from_slice(&magic);
    read_exact(source, &mut header[4..])?;
    let version = u16_at(&header, 4);
    if version != VERSION {
        return Err(BatchIoError::UnsupportedVersion(version));
    }
    let flags = u16_at(&header, 6);
    if flags & !FLAG_FLOAT_PIXELS != 0 {
        return Err(BatchIoError::Malformed(format!(
            "unknown flag bits {flags:#06x}"
        )));
    }
    let kind = if flags & FLAG_FLOAT_PIXELS != 0 {
        PixelKind::Float32
    } else {
        PixelKind::Integer8
    };
    let count = u32_at(&header, 8) as usize;
    let width = u32_at(&header, 12) as usize;
    let height = u32_at(&header, 16) as usize;
    if count == 0 || !count.is_multiple_of(2) {
        return Err(BatchIoError::Malformed(format!(
            "image count {count} must be even and non-zero"
        )));
    }
    if width == 0 || height == 0 {
        return Err(BatchIoError::Malformed(format!(
            "zero dimension {width}x{height}"
        )));
    }
    let pairs = count / 2;
    let px_bytes = match kind {
        PixelKind::Integer8 => 1,
        PixelKind::Float32 => 4,
    };
    let plane = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(px_bytes))
        .ok_or_else(|| BatchIoError::Malformed("raster size overflows".into()))?;

    let mut items = Vec::with_capacity(count.min(1024));
    for _ in 0..count {
        let raw = read_vec(source, plane)?;
        let raster = match kind {
            PixelKind::Integer8 => Raster::Gray(Image::new(width, height, raw)?),
            PixelKind::Float32 => {
                let px = raw.chunks_exact(4).map(|c| f32_at(c, 0)).collect();
                Raster::Float(Image::new(width, height, px)?)
            }
        };
        items.push(raster);
    }

    let raw = read_vec(source, 4 * count)?;
    let mut labels = Vec::with_capacity(count);
    for c in raw.chunks_exact(4) {
        let label = f32_at(c, 0);
        if !(0.0..=1.0).contains(&label) {
            return Err(BatchIoError::LabelOutOfRange(label));
        }
        labels.push(label);
    }

    let raw = read_vec(source, PROVENANCE_LEN * pairs)?;
    let mut provenance = Vec::with_capacity(pairs);
    for rec in raw.chunks_exact(PROVENANCE_LEN) {
        let transform = D4Transform::from_code(rec[0])
            .ok_or_else(|| BatchIoError::Malformed(format!("unknown D4 code {}", rec[0])))?;
        let method = Method::from_code(rec[1])
            .ok_or_else(|| BatchIoError::Malformed(format!("unknown method code {}", rec[1])))?;
        let bbox = BBox::new(
            u32_at(rec, 2) as usize,
            u32_at(rec, 6) as usize,
            u32_at(rec, 10) as usize,
            u32_at(rec, 14) as usize,
        );
        if !bbox.fits(width, height) {
            return Err(BatchIoError::Malformed(format!(
                "box {bbox:?} exceeds {width}x{height}"
            )));
        }
        provenance.push(Provenance {
            transform,
            method,
            bbox,
            lambda: f32_at(rec, 18),
        });
    }
    Ok(AugmentedBatch::from_parts(
        width, height, items, labels, provenance,
    )?)
}

/// Decodes a buffer holding exactly one container.
pub fn decode_batch(bytes: &[u8]) -> Result<AugmentedBatch, BatchIoError> {
    let mut cursor = bytes;
    let batch = read_batch(&mut cursor)?;
    if !cursor.is_empty() {
        return Err(BatchIoError::TrailingData(cursor.len()));
    }
    Ok(batch)
}
