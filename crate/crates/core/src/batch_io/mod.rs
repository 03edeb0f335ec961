//! Serialization: the BMIX batch container and CSV emitters.

mod container;
mod csv;

pub use self::container::{
    container_len, decode_batch, encode_batch, read_batch, write_batch, FLAG_FLOAT_PIXELS,
    HEADER_LEN, MAGIC, PROVENANCE_LEN, VERSION,
};
pub use self::csv::{
    format_sig9, read_csv_histogram, write_csv_heatmap, write_csv_histogram,
    write_csv_histograms_long, write_csv_scores, HISTOGRAM_HEADER,
};

use thiserror::Error;

use crate::augment::AugmentError;
use crate::image::ImageError;

#[derive(Debug, Error)]
pub enum BatchIoError {
    #[error("bad magic {0:?}, expected \"BMIX\"")]
    BadMagic([u8; 4]),
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u16),
    #[error("container is truncated")]
    Truncated,
    #[error("label {0} outside [0, 1]")]
    LabelOutOfRange(f32),
    #[error("batch mixes 8-bit and float rasters")]
    MixedPixelKinds,
    #[error("{0} bytes after the end of the container")]
    TrailingData(usize),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Batch(#[from] AugmentError),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Csv(#[from] ::csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
