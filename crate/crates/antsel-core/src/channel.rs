//! Correlated Rayleigh channel generation with imperfect estimates.
//!
//! The receive-side correlation follows the exponential model: a Toeplitz
//! matrix with entries `phi^|i-j|`, applied to an i.i.d. CN(0,1) vector
//! through its Hermitian square root. Estimation error is modelled
//! statistically: the estimate mixes the true i.i.d. component with an
//! independent error vector, weighted by `sqrt(1-tau)` and `sqrt(tau)`.

use crate::error::{Error, Result};
use crate::linalg::{cholesky, hermitian_sqrt, ComplexMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

/// Domain separator baked into every derived seed.
const STREAM_TAG: [u8; 8] = *b"antsel.1";

/// Address of one deterministic random substream.
///
/// Identical `(master_seed, point_index, trial_index)` triples always produce
/// identical draw sequences; distinct triples key independent ChaCha streams.
/// This keeps Monte Carlo results independent of worker count and schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub point_index: u64,
    pub trial_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, point_index: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            point_index,
            trial_index,
        }
    }

    /// Instantiate the generator addressed by this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut seed = [0u8; 32];
        seed[0..8].copy_from_slice(&self.master_seed.to_le_bytes());
        seed[8..16].copy_from_slice(&self.point_index.to_le_bytes());
        seed[16..24].copy_from_slice(&self.trial_index.to_le_bytes());
        seed[24..32].copy_from_slice(&STREAM_TAG);
        ChaCha8Rng::from_seed(seed)
    }
}

/// Receive-side correlation model: coefficient, matrix and its square root.
///
/// The square root is computed once at construction and reused for every
/// realization drawn against the model.
#[derive(Debug, Clone)]
pub struct CorrelationModel {
    m: usize,
    phi: f64,
    corr: ComplexMatrix,
    corr_sqrt: ComplexMatrix,
}

impl CorrelationModel {
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn corr(&self) -> &ComplexMatrix {
        &self.corr
    }

    pub fn corr_sqrt(&self) -> &ComplexMatrix {
        &self.corr_sqrt
    }
}

/// One drawn channel: the i.i.d. component, the correlated truth and the
/// (possibly imperfect) correlated estimate.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h_iid: Vec<Complex64>,
    pub h_true: Vec<Complex64>,
    pub h_est: Vec<Complex64>,
    pub tau: f64,
}

/// Builds the exponential correlation model `corr[i][j] = phi^|i-j|`.
///
/// `phi` is restricted to real `[0, 1)`; that keeps the matrix symmetric real
/// positive definite so both the square root and downstream Cholesky
/// factorizations exist.
pub fn build_correlation(m: usize, phi: f64) -> Result<CorrelationModel> {
    if m == 0 {
        return Err(Error::InvalidParams("antenna count m must be >= 1".into()));
    }
    if !(0.0..1.0).contains(&phi) || !phi.is_finite() {
        return Err(Error::InvalidPhi(phi));
    }
    let corr = ComplexMatrix::from_fn(m, m, |i, j| {
        let d = i.abs_diff(j) as i32;
        Complex64::new(phi.powi(d), 0.0)
    });
    let corr_sqrt = hermitian_sqrt(&corr)?;
    Ok(CorrelationModel {
        m,
        phi,
        corr,
        corr_sqrt,
    })
}

#[inline]
fn sample_cn01(rng: &mut impl Rng) -> Complex64 {
    // CN(0,1): variance 1/2 per real and imaginary component.
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Draws a length-`m` i.i.d. CN(0,1) channel vector.
pub fn sample_iid_channel(m: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..m).map(|_| sample_cn01(rng)).collect()
}

/// Applies the correlation square root: returns `corr_sqrt * h_iid`.
pub fn apply_correlation(model: &CorrelationModel, h_iid: &[Complex64]) -> Result<Vec<Complex64>> {
    if h_iid.len() != model.m {
        return Err(Error::DimensionMismatch {
            expected: model.m,
            got: h_iid.len(),
        });
    }
    Ok(model.corr_sqrt.mul_vec(h_iid))
}

/// Mixes an independent error vector into the i.i.d. channel:
/// `sqrt(1-tau) * h_iid + sqrt(tau) * e_iid`.
///
/// `tau = 0` returns the input bit-exactly and draws nothing from the stream;
/// `tau = 1` returns a fresh CN(0, I) vector uncorrelated with the input.
/// Per-entry variance is 1 for every `tau`.
pub fn corrupt_estimate(h_iid: &[Complex64], tau: f64, rng: &mut impl Rng) -> Result<Vec<Complex64>> {
    if !(0.0..=1.0).contains(&tau) || !tau.is_finite() {
        return Err(Error::InvalidTau(tau));
    }
    if tau == 0.0 {
        return Ok(h_iid.to_vec());
    }
    let keep = (1.0 - tau).sqrt();
    let mix = tau.sqrt();
    Ok(h_iid
        .iter()
        .map(|h| keep * h + mix * sample_cn01(rng))
        .collect())
}

/// Draws a full channel realization: i.i.d. vector, estimation mix, then the
/// correlation square root applied to both, so that `h_est = corr_sqrt *
/// h_est_iid` and `h_true = corr_sqrt * h_iid`.
///
/// Draw order is fixed (channel first, then error vector) so a stream address
/// fully determines the realization.
pub fn sample_realization(
    model: &CorrelationModel,
    tau: f64,
    rng: &mut impl Rng,
) -> Result<ChannelRealization> {
    let h_iid = sample_iid_channel(model.m, rng);
    let h_est_iid = corrupt_estimate(&h_iid, tau, rng)?;
    let h_true = model.corr_sqrt.mul_vec(&h_iid);
    let h_est = model.corr_sqrt.mul_vec(&h_est_iid);
    Ok(ChannelRealization {
        h_iid,
        h_true,
        h_est,
        tau,
    })
}

/// Draws a length-`m` AWGN vector with per-entry variance `noise_var`.
pub fn sample_noise(m: usize, noise_var: f64, rng: &mut impl Rng) -> Result<Vec<Complex64>> {
    if noise_var <= 0.0 || !noise_var.is_finite() {
        return Err(Error::InvalidVariance(noise_var));
    }
    let scale = noise_var.sqrt();
    Ok((0..m).map(|_| scale * sample_cn01(rng)).collect())
}

/// Checks that the correlation matrix of a model is accepted by Cholesky,
/// i.e. is numerically positive definite.
pub fn correlation_is_positive_definite(model: &CorrelationModel) -> bool {
    cholesky(model.corr()).is_ok()
}
