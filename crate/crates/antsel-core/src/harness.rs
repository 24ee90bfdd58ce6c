//! Monte Carlo BER harness: seeded, parallel, reproducible.
//!
//! One operating point draws `trials` channel realizations; each realization
//! fixes the combining weights for a coherence block of
//! `symbols_per_channel` BPSK symbols. Every trial derives its own random
//! substream from `(seed, point index, trial index)`, so results are
//! bit-identical regardless of worker count or scheduling, and two schemes
//! run at the same point see the same channels, bits and noise.

use crate::channel::{build_correlation, sample_noise, sample_realization, RngStream};
use crate::error::{Error, Result};
use crate::receiver::{bpsk_detect, bpsk_modulate, combine_weights, receive};
use crate::scheme::SchemeRegistry;
use crate::selection::{build_problem, omp_select};
use rand::Rng;
use rayon::prelude::*;
use std::time::{Duration, Instant};

/// Transmit power is fixed; SNR is swept through the noise variance.
pub const SIGMA_X2: f64 = 1.0;

/// One simulated operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimPoint {
    pub m: usize,
    /// Sparsity budget; ignored by schemes that use every branch.
    pub k_s: usize,
    pub phi: f64,
    pub tau: f64,
    pub snr_db: f64,
    /// Registry name of the combining scheme.
    pub scheme: String,
    /// Channel realizations per point.
    pub trials: u64,
    /// Symbols (= bits, for BPSK) per realization.
    pub symbols_per_channel: u64,
    pub seed: u64,
}

impl SimPoint {
    /// Noise variance implied by the SNR: `sigma_v2 = sigma_x2 / SNR`.
    pub fn noise_variance(&self) -> f64 {
        SIGMA_X2 * 10f64.powf(-self.snr_db / 10.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParams("antenna count m must be >= 1".into()));
        }
        if self.k_s == 0 || self.k_s > self.m {
            return Err(Error::InvalidSparsity {
                k_s: self.k_s,
                m: self.m,
            });
        }
        if !(0.0..1.0).contains(&self.phi) || !self.phi.is_finite() {
            return Err(Error::InvalidPhi(self.phi));
        }
        if !(0.0..=1.0).contains(&self.tau) || !self.tau.is_finite() {
            return Err(Error::InvalidTau(self.tau));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::InvalidParams(format!(
                "snr_db must be finite, got {}",
                self.snr_db
            )));
        }
        let nv = self.noise_variance();
        if nv <= 0.0 || !nv.is_finite() {
            return Err(Error::InvalidVariance(nv));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be >= 1".into()));
        }
        if self.symbols_per_channel == 0 {
            return Err(Error::InvalidParams("symbols_per_channel must be >= 1".into()));
        }
        Ok(())
    }
}

/// Aggregated result of one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub point: SimPoint,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub ber: f64,
    /// Binomial standard error `sqrt(ber (1 - ber) / bits_sent)`.
    pub stderr: f64,
}

/// Sweep axis selector for [`run_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    SnrDb,
    Phi,
    KS,
    Tau,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::Phi => "phi",
            SweepAxis::KS => "k_s",
            SweepAxis::Tau => "tau",
        }
    }
}

/// Runs one operating point at sweep position 0.
pub fn run_point(registry: &SchemeRegistry, point: &SimPoint) -> Result<BerRecord> {
    run_point_at(registry, point, 0)
}

/// Runs one operating point with an explicit sweep position.
///
/// The position participates in substream derivation so that every point of
/// a sweep draws independent randomness, while two schemes simulated at the
/// same position share channels, bits and noise exactly.
pub fn run_point_at(
    registry: &SchemeRegistry,
    point: &SimPoint,
    point_index: u64,
) -> Result<BerRecord> {
    point.validate()?;
    let scheme = registry.get(&point.scheme)?;
    let model = build_correlation(point.m, point.phi)?;
    let sigma_v2 = point.noise_variance();
    let m = point.m;
    let spc = point.symbols_per_channel;

    let bit_errors: u64 = (0..point.trials)
        .into_par_iter()
        .map(|trial| -> Result<u64> {
            let mut rng = RngStream::new(point.seed, point_index, trial).rng();
            let realization = sample_realization(&model, point.tau, &mut rng)?;
            let weights = scheme.weights(&realization.h_est, point.k_s, SIGMA_X2, sigma_v2)?;

            let mut errors = 0u64;
            for _ in 0..spc {
                let bit = u8::from(rng.random::<bool>());
                let symbol = bpsk_modulate(bit, SIGMA_X2);
                let noise = sample_noise(m, sigma_v2, &mut rng)?;
                let y = receive(&realization.h_true, symbol, &noise)?;
                let detected = bpsk_detect(combine_weights(&weights, &y)?);
                errors += u64::from(detected != bit);
            }
            Ok(errors)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    let bits_sent = point.trials * spc;
    let ber = bit_errors as f64 / bits_sent as f64;
    let stderr = (ber * (1.0 - ber) / bits_sent as f64).sqrt();
    Ok(BerRecord {
        point: point.clone(),
        bits_sent,
        bit_errors,
        ber,
        stderr,
    })
}

/// Substitutes each value into `base` along `axis` and runs the points in
/// order. Record order always matches `values`; position `i` keys the
/// substreams of point `i`.
pub fn run_sweep(
    registry: &SchemeRegistry,
    base: &SimPoint,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<BerRecord>> {
    let points: Vec<SimPoint> = values
        .iter()
        .map(|&v| substitute(base, axis, v))
        .collect::<Result<_>>()?;

    points
        .iter()
        .enumerate()
        .map(|(i, p)| run_point_at(registry, p, i as u64))
        .collect()
}

fn substitute(base: &SimPoint, axis: SweepAxis, value: f64) -> Result<SimPoint> {
    let bad = |reason: String| Error::InvalidAxisValue {
        axis: axis.name(),
        value,
        reason,
    };
    let mut point = base.clone();
    match axis {
        SweepAxis::SnrDb => point.snr_db = value,
        SweepAxis::Phi => point.phi = value,
        SweepAxis::Tau => point.tau = value,
        SweepAxis::KS => {
            if !value.is_finite() || value.fract() != 0.0 || value < 1.0 {
                return Err(bad("k_s must be a positive integer".into()));
            }
            point.k_s = value as usize;
        }
    }
    point.validate().map_err(|e| bad(e.to_string()))?;
    Ok(point)
}

/// Exact average BPSK error probability for `m`-branch MRC over i.i.d.
/// unit-power Rayleigh fading at per-branch SNR `snr_linear`:
/// `p^m * sum_{k=0}^{m-1} C(m-1+k, k) (1-p)^k` with
/// `p = (1 - sqrt(g/(1+g))) / 2`.
pub fn analytic_mrc_ber(m: usize, snr_linear: f64) -> Result<f64> {
    if m == 0 || snr_linear <= 0.0 || !snr_linear.is_finite() {
        return Err(Error::InvalidParams(format!(
            "analytic_mrc_ber needs m >= 1 and snr > 0, got m={m}, snr={snr_linear}"
        )));
    }
    let mu = (snr_linear / (1.0 + snr_linear)).sqrt();
    let p = 0.5 * (1.0 - mu);
    let q = 1.0 - p;

    let mut sum = 0.0;
    let mut term = 1.0; // C(m-1+k, k) (1-p)^k at k = 0
    for k in 0..m {
        sum += term;
        term *= q * (m + k) as f64 / (k + 1) as f64;
    }
    Ok(p.powi(m as i32) * sum)
}

/// Times [`omp_select`] on random problems of each size and returns the mean
/// wall time per call. Setup (problem construction) is excluded from the
/// timed section.
pub fn measure_omp_runtime(
    m_values: &[usize],
    k_s: usize,
    repeats: usize,
) -> Result<Vec<(usize, Duration)>> {
    if m_values.iter().any(|&m| m < k_s || m == 0) {
        return Err(Error::InvalidParams(format!(
            "every m must satisfy m >= k_s >= 1, got {m_values:?} with k_s={k_s}"
        )));
    }
    if repeats == 0 {
        return Ok(Vec::new());
    }

    let mut out = Vec::with_capacity(m_values.len());
    for (mi, &m) in m_values.iter().enumerate() {
        let problems: Vec<_> = (0..4u64)
            .map(|i| {
                let mut rng = RngStream::new(0x0b5e_55ed, mi as u64, i).rng();
                let model = build_correlation(m, 0.5)?;
                let real = sample_realization(&model, 0.2, &mut rng)?;
                build_problem(&real.h_est, SIGMA_X2, 0.25)
            })
            .collect::<Result<_>>()?;

        for p in &problems {
            std::hint::black_box(omp_select(p, k_s)?);
        }
        let start = Instant::now();
        for rep in 0..repeats {
            let p = &problems[rep % problems.len()];
            std::hint::black_box(omp_select(p, k_s)?);
        }
        out.push((m, start.elapsed() / repeats as u32));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{MRC, OMP_SELECTION};

    fn base_point(scheme: &str) -> SimPoint {
        SimPoint {
            m: 4,
            k_s: 2,
            phi: 0.5,
            tau: 0.2,
            snr_db: 2.0,
            scheme: scheme.to_string(),
            trials: 50,
            symbols_per_channel: 10,
            seed: 0xd1ce,
        }
    }

    #[test]
    fn analytic_ber_known_values() {
        let p1 = analytic_mrc_ber(1, 1.0).unwrap();
        assert!((p1 - 0.14645).abs() < 5e-6, "{p1}");

        let p = 0.5 * (1.0 - 0.5f64.sqrt());
        let want2 = p * p * (1.0 + 2.0 * (1.0 - p));
        let p2 = analytic_mrc_ber(2, 1.0).unwrap();
        assert!((p2 - want2).abs() < 1e-12, "{p2} vs {want2}");
        assert!((p2 - 0.0581).abs() < 1e-4);

        assert!(analytic_mrc_ber(4, 1e9).unwrap() < 1e-12);
        assert!(matches!(analytic_mrc_ber(0, 1.0), Err(Error::InvalidParams(_))));
        assert!(matches!(analytic_mrc_ber(2, 0.0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn point_runs_are_deterministic() {
        let reg = SchemeRegistry::with_builtins();
        let point = base_point(OMP_SELECTION);
        let a = run_point(&reg, &point).unwrap();
        let b = run_point(&reg, &point).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let reg = SchemeRegistry::with_builtins();
        let mut point = base_point(OMP_SELECTION);
        point.trials = 200;
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_point(&reg, &point))
            .unwrap();
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| run_point(&reg, &point))
            .unwrap();
        assert_eq!(single, many);
    }

    #[test]
    fn high_snr_perfect_csi_is_error_free() {
        let reg = SchemeRegistry::with_builtins();
        for scheme in [OMP_SELECTION, MRC] {
            let point = SimPoint {
                m: 4,
                k_s: 4,
                phi: 0.0,
                tau: 0.0,
                snr_db: 60.0,
                scheme: scheme.to_string(),
                trials: 100,
                symbols_per_channel: 100,
                seed: 7,
            };
            let rec = run_point(&reg, &point).unwrap();
            assert_eq!(rec.bit_errors, 0, "scheme {scheme}");
            assert_eq!(rec.bits_sent, 10_000);
        }
    }

    #[test]
    fn single_branch_matches_closed_form() {
        // One symbol per realization keeps the bits independent, so the
        // binomial standard error is the true one.
        let reg = SchemeRegistry::with_builtins();
        let point = SimPoint {
            m: 1,
            k_s: 1,
            phi: 0.0,
            tau: 0.0,
            snr_db: 0.0,
            scheme: MRC.to_string(),
            trials: 1_000_000,
            symbols_per_channel: 1,
            seed: 0xbe7a7,
        };
        let rec = run_point(&reg, &point).unwrap();
        let want = analytic_mrc_ber(1, 1.0).unwrap();
        let se = (want * (1.0 - want) / rec.bits_sent as f64).sqrt();
        assert!(
            (rec.ber - want).abs() <= 3.0 * se,
            "ber {} vs analytic {want} (3 se = {})",
            rec.ber,
            3.0 * se
        );
    }

    #[test]
    fn full_sparsity_selection_equals_mrc_decisions() {
        // With k_s = m the selection weights are a positive multiple of the
        // estimate, so both schemes detect identical bits on shared streams.
        let reg = SchemeRegistry::with_builtins();
        let mk = |scheme: &str| SimPoint {
            m: 4,
            k_s: 4,
            phi: 0.0,
            tau: 0.0,
            snr_db: 30.0,
            scheme: scheme.to_string(),
            trials: 500,
            symbols_per_channel: 20,
            seed: 0xaaaa,
        };
        let omp = run_sweep(&reg, &mk(OMP_SELECTION), SweepAxis::KS, &[4.0]).unwrap();
        let mrc = run_sweep(&reg, &mk(MRC), SweepAxis::KS, &[4.0]).unwrap();
        assert_eq!(omp[0].bit_errors, mrc[0].bit_errors);
        assert_eq!(omp[0].bits_sent, mrc[0].bits_sent);
    }

    #[test]
    fn sweep_orders_and_validates() {
        let reg = SchemeRegistry::with_builtins();
        let base = base_point(MRC);

        let empty = run_sweep(&reg, &base, SweepAxis::SnrDb, &[]).unwrap();
        assert!(empty.is_empty());

        let recs = run_sweep(&reg, &base, SweepAxis::SnrDb, &[0.0, 2.0, 4.0]).unwrap();
        assert_eq!(recs.len(), 3);
        for (r, want) in recs.iter().zip([0.0, 2.0, 4.0]) {
            assert_eq!(r.point.snr_db, want);
        }

        let err = run_sweep(&reg, &base, SweepAxis::Phi, &[0.2, 1.5]);
        assert!(matches!(
            err,
            Err(Error::InvalidAxisValue { axis: "phi", .. })
        ));
        let err = run_sweep(&reg, &base, SweepAxis::KS, &[2.5]);
        assert!(matches!(err, Err(Error::InvalidAxisValue { axis: "k_s", .. })));
    }

    #[test]
    fn snr_sweep_is_a_waterfall() {
        let reg = SchemeRegistry::with_builtins();
        let base = SimPoint {
            m: 4,
            k_s: 2,
            phi: 0.0,
            tau: 0.0,
            snr_db: 0.0,
            scheme: OMP_SELECTION.to_string(),
            trials: 10_000,
            symbols_per_channel: 100,
            seed: 0x5eed,
        };
        let values: Vec<f64> = (0..6).map(|i| 2.0 * i as f64).collect();
        let recs = run_sweep(&reg, &base, SweepAxis::SnrDb, &values).unwrap();
        for pair in recs.windows(2) {
            let slack = 2.0 * (pair[0].stderr.powi(2) + pair[1].stderr.powi(2)).sqrt();
            assert!(
                pair[1].ber <= pair[0].ber + slack,
                "BER rose with SNR: {} -> {}",
                pair[0].ber,
                pair[1].ber
            );
        }
    }

    #[test]
    fn invalid_points_are_rejected_before_running() {
        let reg = SchemeRegistry::with_builtins();
        let mut p = base_point(MRC);
        p.phi = 1.0;
        assert!(run_point(&reg, &p).is_err());
        let mut p = base_point(MRC);
        p.k_s = 9;
        assert!(run_point(&reg, &p).is_err());
        let mut p = base_point(MRC);
        p.scheme = "unknown".into();
        assert!(matches!(run_point(&reg, &p), Err(Error::UnknownScheme(_))));
        let mut p = base_point(MRC);
        p.trials = 0;
        assert!(run_point(&reg, &p).is_err());
    }

    #[test]
    fn runtime_measurement_shapes() {
        assert!(measure_omp_runtime(&[16, 32], 4, 0).unwrap().is_empty());
        let out = measure_omp_runtime(&[16, 32], 4, 5).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].0, 16);
        assert!(matches!(
            measure_omp_runtime(&[8], 16, 3),
            Err(Error::InvalidParams(_))
        ));
    }
}
