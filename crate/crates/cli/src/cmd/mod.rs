pub mod augment;
pub mod heatmap;
pub mod lambda_dist;
pub mod metrics;
pub mod simulate;

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

/// Argument parsers; a rejected value is a usage error (exit 2).
pub mod parse {
    use bitmix::stego_sim::MAX_PAYLOAD_BPP;

    fn number(s: &str) -> Result<f64, String> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| format!("'{s}' is not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("'{s}' is not finite"))
        }
    }

    pub fn gamma(s: &str) -> Result<f64, String> {
        let v = number(s)?;
        if v > 0.0 && v <= 1.0 {
            Ok(v)
        } else {
            Err(format!("gamma must be in (0, 1], got {v}"))
        }
    }

    pub fn unit(s: &str) -> Result<f64, String> {
        let v = number(s)?;
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(format!("value must be in [0, 1], got {v}"))
        }
    }

    pub fn change_rate(s: &str) -> Result<f64, String> {
        let v = number(s)?;
        if v > 0.0 && v <= 1.0 {
            Ok(v)
        } else {
            Err(format!("change rate must be in (0, 1], got {v}"))
        }
    }

    pub fn bpp(s: &str) -> Result<f64, String> {
        let v = number(s)?;
        if v > 0.0 && v <= MAX_PAYLOAD_BPP {
            Ok(v)
        } else {
            Err(format!(
                "payload must be in (0, {MAX_PAYLOAD_BPP:.4}] bpp, got {v}"
            ))
        }
    }

    pub fn band(s: &str) -> Result<(f64, f64), String> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("band '{s}' must look like lo:hi"))?;
        let (lo, hi) = (unit(lo)?, unit(hi)?);
        if lo < hi {
            Ok((lo, hi))
        } else {
            Err(format!("band needs lo < hi, got {lo}:{hi}"))
        }
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}
