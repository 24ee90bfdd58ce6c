//! BPSK modulation, branch combining and hard-decision detection.

use crate::error::{Error, Result};
use crate::linalg::inner;
use crate::selection::SelectionVector;
use num_complex::Complex64;

/// Maps a bit to a BPSK symbol: `0 -> +sqrt(sigma_x2)`, `1 -> -sqrt(sigma_x2)`.
#[inline]
pub fn bpsk_modulate(bit: u8, sigma_x2: f64) -> Complex64 {
    debug_assert!(bit <= 1, "bit must be 0 or 1");
    debug_assert!(sigma_x2 > 0.0);
    let amp = sigma_x2.sqrt();
    if bit == 0 {
        Complex64::new(amp, 0.0)
    } else {
        Complex64::new(-amp, 0.0)
    }
}

/// Received vector `y = h x + v`.
pub fn receive(
    channel_true: &[Complex64],
    symbol: Complex64,
    noise: &[Complex64],
) -> Result<Vec<Complex64>> {
    if channel_true.len() != noise.len() {
        return Err(Error::DimensionMismatch {
            expected: channel_true.len(),
            got: noise.len(),
        });
    }
    Ok(channel_true
        .iter()
        .zip(noise)
        .map(|(h, v)| h * symbol + v)
        .collect())
}

/// Weighted combining `w^H y`; both schemes reduce to this form.
pub fn combine_weights(weights: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if weights.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            got: y.len(),
        });
    }
    Ok(inner(weights, y))
}

/// Maximum ratio combining over all branches: `est^H y`.
pub fn combine_mrc(channel_est: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    combine_weights(channel_est, y)
}

/// Selection combining: `h_s^H y`; only supported branches contribute.
pub fn combine_selection(sel: &SelectionVector, y: &[Complex64]) -> Result<Complex64> {
    combine_weights(&sel.weights, y)
}

/// Hard decision: bit 0 for a non-negative real part, bit 1 otherwise.
/// The boundary at exactly zero resolves to bit 0.
#[inline]
pub fn bpsk_detect(combined: Complex64) -> u8 {
    if combined.re >= 0.0 {
        0
    } else {
        1
    }
}
