//! Combining schemes behind a common trait, selected by name at runtime.
//!
//! Every scheme turns a per-coherence-block channel estimate into a length-M
//! combining vector; the receiver chain then applies `w^H y` uniformly. New
//! schemes register against [`SchemeRegistry`] without touching the harness.

use crate::error::{Error, Result};
use crate::selection::{build_problem, omp_select};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Canonical name of the OMP-based sparse selection scheme.
pub const OMP_SELECTION: &str = "omp-selection";
/// Canonical name of the maximum-ratio-combining baseline.
pub const MRC: &str = "mrc";

/// A receive combining strategy.
pub trait CombinerScheme: Send + Sync {
    /// Canonical scheme name, as used in configuration and CSV output.
    fn name(&self) -> &'static str;

    /// Computes combining weights for one coherence block from the channel
    /// estimate. Must not consume randomness: weights are a pure function of
    /// the estimate and the operating point.
    fn weights(
        &self,
        channel_est: &[Complex64],
        k_s: usize,
        sigma_x2: f64,
        sigma_v2: f64,
    ) -> Result<Vec<Complex64>>;
}

/// MRC baseline: every branch weighted by the conjugate channel estimate.
#[derive(Debug, Default, Clone, Copy)]
pub struct MrcScheme;

impl CombinerScheme for MrcScheme {
    fn name(&self) -> &'static str {
        MRC
    }

    fn weights(
        &self,
        channel_est: &[Complex64],
        _k_s: usize,
        _sigma_x2: f64,
        _sigma_v2: f64,
    ) -> Result<Vec<Complex64>> {
        Ok(channel_est.to_vec())
    }
}

/// Sparse selection combining: OMP on the whitened MSE problem, keeping
/// `k_s` of the `M` branches.
#[derive(Debug, Default, Clone, Copy)]
pub struct OmpSelectionScheme;

impl CombinerScheme for OmpSelectionScheme {
    fn name(&self) -> &'static str {
        OMP_SELECTION
    }

    fn weights(
        &self,
        channel_est: &[Complex64],
        k_s: usize,
        sigma_x2: f64,
        sigma_v2: f64,
    ) -> Result<Vec<Complex64>> {
        let problem = build_problem(channel_est, sigma_x2, sigma_v2)?;
        Ok(omp_select(&problem, k_s)?.weights)
    }
}

/// Name-indexed registry of combining schemes.
#[derive(Clone)]
pub struct SchemeRegistry {
    schemes: BTreeMap<&'static str, Arc<dyn CombinerScheme>>,
}

impl SchemeRegistry {
    pub fn empty() -> Self {
        Self {
            schemes: BTreeMap::new(),
        }
    }

    /// Registry with the built-in schemes.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Arc::new(OmpSelectionScheme));
        reg.register(Arc::new(MrcScheme));
        reg
    }

    pub fn register(&mut self, scheme: Arc<dyn CombinerScheme>) {
        self.schemes.insert(scheme.name(), scheme);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn CombinerScheme>> {
        self.schemes
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownScheme(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.schemes.keys().copied().collect()
    }
}

impl Default for SchemeRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
