//! Sparse receive-antenna selection combining for single-user massive MIMO
//! uplinks.
//!
//! The library models a single-antenna transmitter and an `M`-antenna base
//! station over a spatially correlated Rayleigh channel with statistically
//! modelled estimation error. Combining weights come from one of two
//! registered schemes: full maximum ratio combining, or sparse selection
//! combining that keeps only `K_s` branches by running orthogonal matching
//! pursuit on the whitened MSE problem. A seeded Monte Carlo harness turns
//! either scheme into reproducible BER curves over SNR, correlation,
//! estimation-error and sparsity sweeps.
//!
//! Modules:
//! - [`linalg`]: dense complex kernels (Cholesky, triangular solves,
//!   Hermitian square root, least squares).
//! - [`channel`]: exponential correlation model, channel/estimate/noise
//!   sampling, counter-addressed RNG streams.
//! - [`selection`]: the whitened selection problem, OMP solver and the
//!   exhaustive / direct-MSE test oracles.
//! - [`receiver`]: BPSK modulation, combining, hard detection.
//! - [`scheme`]: the combining-scheme trait and registry.
//! - [`harness`]: Monte Carlo BER points and sweeps, analytic MRC
//!   reference, OMP runtime measurement.

pub mod channel;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod receiver;
pub mod scheme;
pub mod selection;

pub use error::{Error, Result};
pub use harness::{
    analytic_mrc_ber, measure_omp_runtime, run_point, run_point_at, run_sweep, BerRecord,
    SimPoint, SweepAxis, SIGMA_X2,
};
pub use scheme::{CombinerScheme, SchemeRegistry, MRC, OMP_SELECTION};
pub use selection::{SelectionProblem, SelectionVector};
