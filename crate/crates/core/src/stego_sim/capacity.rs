//! Payload (bits per pixel) to change rate, through the ternary entropy bound
//! of ±1 embedding. This is the rate an optimal coder would need; practical
//! embedders change more pixels.

use super::SimError;

/// log2(3): the largest payload a ternary embedding can carry per pixel.
pub const MAX_PAYLOAD_BPP: f64 = 1.584_962_500_721_156_3;

/// `H3(ρ) = −ρ·log2(ρ/2) − (1−ρ)·log2(1−ρ)`, with `H3(0) = 0`.
pub fn ternary_entropy(rate: f64) -> f64 {
    let changed = if rate > 0.0 {
        -rate * (rate / 2.0).log2()
    } else {
        0.0
    };
    let kept = if rate < 1.0 {
        -(1.0 - rate) * (1.0 - rate).log2()
    } else {
        0.0
    };
    changed + kept
}

/// Unique `ρ ∈ (0, 2/3)` with `H3(ρ) = payload`, by bisection.
pub fn bpp_to_change_rate(payload: f64) -> Result<f64, SimError> {
    if !(payload > 0.0 && payload < MAX_PAYLOAD_BPP) {
        return Err(SimError::OutOfRange(payload));
    }
    // H3 is strictly increasing on [0, 2/3]
    let (mut lo, mut hi) = (0.0f64, 2.0 / 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ternary_entropy(mid) < payload {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
